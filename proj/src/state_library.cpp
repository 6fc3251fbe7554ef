#include "sepind/state_library.hpp"

#include <cmath>

namespace sepind {

namespace {

const Complex kI{0.0, 1.0};

void require_unit_interval(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(name) + " must be strictly positive");
}

double param(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw DomainError("missing parameter '" + key + "'");
    return it->second;
}

HermitianOperator E(std::size_t n, std::size_t i, std::size_t j) {
    if (i == j) return HermitianOperator(ComplexMatrix::unit(n, i, i));
    throw std::logic_error("off-diagonal unit matrix is not Hermitian");
}

HermitianOperator S12() { return HermitianOperator(ComplexMatrix::unit(2, 1, 2) + ComplexMatrix::unit(2, 2, 1)); }

// i (E_xy - E_yx) on C^2
HermitianOperator iA(std::size_t x, std::size_t y) {
    return HermitianOperator(kI * (ComplexMatrix::unit(2, x, y) - ComplexMatrix::unit(2, y, x)));
}

}  // namespace

HermitianOperator werner(double f) {
    require_unit_interval(f, "f");
    ComplexMatrix m(4, 4);
    m(0, 0) = m(3, 3) = (1.0 - f) / 3.0;
    m(1, 1) = m(2, 2) = (1.0 + 2.0 * f) / 6.0;
    m(1, 2) = m(2, 1) = (1.0 - 4.0 * f) / 6.0;
    return HermitianOperator(std::move(m));
}

HermitianOperator rho_b(double b, bool normalized) {
    require_unit_interval(b, "b");
    ComplexMatrix m(8, 8);
    for (std::size_t i : {0, 1, 2, 3, 5, 6}) m(i, i) = b;
    for (std::size_t i : {0, 1, 2}) m(i, i + 5) = m(i + 5, i) = b;
    m(4, 4) = m(7, 7) = (1.0 + b) / 2.0;
    m(4, 7) = m(7, 4) = std::sqrt(1.0 - b * b) / 2.0;
    if (normalized) m *= 1.0 / (1.0 + 7.0 * b);
    return HermitianOperator(std::move(m));
}

HermitianOperator example3(double a, double b, double c) {
    require_positive(a, "a");
    require_positive(b, "b");
    require_positive(c, "c");
    ComplexMatrix m(8, 8);
    const double diag[] = {1.0, a, b, c, 1.0 / a, 1.0 / b, 1.0 / c, 1.0};
    for (std::size_t i = 0; i < 8; ++i) m(i, i) = diag[i];
    m(0, 7) = m(7, 0) = 1.0;
    return HermitianOperator(std::move(m));
}

HermitianOperator maximally_mixed(const DimProfile& profile) {
    const std::size_t n = profile.total();
    return HermitianOperator::identity(n).scaled(1.0 / static_cast<double>(n));
}

TensorFactorization paper_factorization(WorkedExample which, const std::map<std::string, double>& params) {
    switch (which) {
        case WorkedExample::Example1: {
            const double b = param(params, "b");
            require_unit_interval(b, "b");
            // Hermitian pairs of the printed unit terms: E_kl (x) E_i'j' + E_lk (x) E_j'i'
            // = 1/2 [S_kl (x) S_i'j' - iA_kl (x) iA_i'j'] for the off-diagonal entries.
            TensorFactorization f{DimProfile({2, 4}), {}};
            auto diag = [&](double w, std::size_t k, std::size_t ip) {
                f.terms.push_back({E(2, k, k), E(4, ip, ip).scaled(w)});
            };
            auto offdiag = [&](double w, std::size_t ip, std::size_t jp) {
                auto s4 = HermitianOperator(ComplexMatrix::unit(4, ip, jp) + ComplexMatrix::unit(4, jp, ip));
                auto a4 = HermitianOperator(kI * (ComplexMatrix::unit(4, ip, jp) - ComplexMatrix::unit(4, jp, ip)));
                f.terms.push_back({S12(), s4.scaled(w / 2.0)});
                f.terms.push_back({iA(1, 2), a4.scaled(-w / 2.0)});
            };
            for (std::size_t ip = 1; ip <= 4; ++ip) diag(b, 1, ip);
            diag(b, 2, 2);
            diag(b, 2, 3);
            offdiag(b, 1, 2);
            offdiag(b, 2, 3);
            offdiag(b, 3, 4);
            diag((1.0 + b) / 2.0, 2, 1);
            diag((1.0 + b) / 2.0, 2, 4);
            const double s = std::sqrt(1.0 - b * b) / 2.0;
            f.terms.push_back({E(2, 2, 2),
                               HermitianOperator(ComplexMatrix::unit(4, 1, 4) + ComplexMatrix::unit(4, 4, 1)).scaled(s)});
            return f;
        }
        case WorkedExample::Example2: {
            const double f = param(params, "f");
            require_unit_interval(f, "f");
            const double a = (1.0 - f) / 3.0;
            const double d = (1.0 + 2.0 * f) / 6.0;
            const double o = (1.0 - 4.0 * f) / 12.0;
            // i (E21 - E12) = iA(2, 1)
            return {DimProfile({2, 2}),
                    {{E(2, 1, 1), E(2, 1, 1).scaled(a)},
                     {E(2, 1, 1), E(2, 2, 2).scaled(d)},
                     {E(2, 2, 2), E(2, 1, 1).scaled(d)},
                     {S12(), S12().scaled(o)},
                     {iA(1, 2), iA(2, 1).scaled(-o)},
                     {E(2, 2, 2), E(2, 2, 2).scaled(a)}}};
        }
        case WorkedExample::Example3: {
            const double a = param(params, "a");
            const double b = param(params, "b");
            const double c = param(params, "c");
            require_positive(a, "a");
            require_positive(b, "b");
            require_positive(c, "c");
            const auto e1 = E(2, 1, 1);
            const auto e2 = E(2, 2, 2);
            const auto s = S12();
            const auto ia = iA(1, 2);
            // E18 + E81 = 1/4 [S S S - S iA iA - iA S iA - iA iA S].
            return {DimProfile({2, 2, 2}),
                    {{e1, e1, e1},
                     {e2, e2, e2},
                     {s, s, s.scaled(0.25)},
                     {s, ia, ia.scaled(-0.25)},
                     {ia, s, ia.scaled(-0.25)},
                     {ia, ia, s.scaled(-0.25)},
                     {e1, e1, e2.scaled(a)},
                     {e1, e2, e1.scaled(b)},
                     {e1, e2, e2.scaled(c)},
                     {e2, e1, e1.scaled(1.0 / a)},
                     {e2, e1, e2.scaled(1.0 / b)},
                     {e2, e2, e1.scaled(1.0 / c)}}};
        }
    }
    throw std::logic_error("unknown worked example");
}

std::vector<UnitProduct> example1_unit_terms(double b) {
    require_unit_interval(b, "b");
    using P = std::pair<std::size_t, std::size_t>;
    auto term = [](double w, P first, P second) { return UnitProduct{Complex(w, 0.0), {first, second}}; };
    const double h = (1.0 + b) / 2.0;
    const double r = std::sqrt(1.0 - b * b) / 2.0;
    return {term(b, {1, 1}, {1, 1}), term(b, {1, 2}, {1, 2}), term(b, {1, 1}, {2, 2}), term(b, {1, 2}, {2, 3}),
            term(b, {1, 1}, {3, 3}), term(b, {1, 2}, {3, 4}), term(b, {1, 1}, {4, 4}), term(b, {2, 1}, {2, 1}),
            term(b, {2, 2}, {2, 2}), term(b, {2, 1}, {3, 2}), term(b, {2, 2}, {3, 3}), term(b, {2, 1}, {4, 3}),
            term(h, {2, 2}, {1, 1}), term(h, {2, 2}, {4, 4}), term(r, {2, 2}, {1, 4}), term(r, {2, 2}, {4, 1})};
}

std::string_view to_string(StateName s) {
    switch (s) {
        case StateName::Werner: return "werner";
        case StateName::RhoB: return "rho-b";
        case StateName::Example3: return "example3";
        case StateName::MaximallyMixed: return "maximally-mixed";
        case StateName::Custom: return "custom";
    }
    return "custom";
}

std::optional<StateName> parse_state_name(std::string_view s) {
    for (auto n : {StateName::Werner, StateName::RhoB, StateName::Example3, StateName::MaximallyMixed, StateName::Custom})
        if (to_string(n) == s) return n;
    return std::nullopt;
}

DimProfile default_profile(StateName s) {
    switch (s) {
        case StateName::Werner: return DimProfile({2, 2});
        case StateName::RhoB: return DimProfile({2, 4});
        case StateName::Example3: return DimProfile({2, 2, 2});
        default: return DimProfile({2, 2});
    }
}

HermitianOperator make_state(const StateSpec& spec, const std::optional<DimProfile>& profile) {
    const auto& p = spec.parameters;
    switch (spec.name) {
        case StateName::Werner: return werner(param(p, "f"));
        case StateName::RhoB: {
            auto it = p.find("normalized");
            return rho_b(param(p, "b"), it != p.end() && it->second != 0.0);
        }
        case StateName::Example3: return example3(param(p, "a"), param(p, "b"), param(p, "c"));
        case StateName::MaximallyMixed: return maximally_mixed(profile.value_or(DimProfile({2, 2})));
        case StateName::Custom: break;
    }
    throw DomainError("custom states have no factory");
}

}  // namespace sepind
