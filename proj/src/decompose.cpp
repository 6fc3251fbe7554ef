#include "sepind/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>

namespace sepind {

namespace {

std::string format_error(double err) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", err);
    return buf;
}


const Complex kI{0.0, 1.0};

HermitianOperator unit_diag(std::size_t n, std::size_t i) {
    return HermitianOperator(ComplexMatrix::unit(n, i, i));
}

// S_xy = E_xy + E_yx
HermitianOperator sym_unit(std::size_t n, std::size_t x, std::size_t y) {
    return HermitianOperator(ComplexMatrix::unit(n, x, y) + ComplexMatrix::unit(n, y, x));
}

// i A_xy = i (E_xy - E_yx)
HermitianOperator antisym_unit(std::size_t n, std::size_t x, std::size_t y) {
    return HermitianOperator(kI * (ComplexMatrix::unit(n, x, y) - ComplexMatrix::unit(n, y, x)));
}

TensorFactorization two_party(std::size_t m, std::size_t n, std::vector<Term> terms) {
    return {DimProfile({m, n}), std::move(terms)};
}

void check_indices(std::size_t i, std::size_t j, std::size_t m, std::size_t n) {
    if (m < 1 || n < 1 || i < 1 || j < 1 || i > m * n || j > m * n) {
        throw DimensionError("basis index out of range: (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") for dims " + std::to_string(m) + " x " + std::to_string(n));
    }
}

void check_strict(std::size_t i, std::size_t j) {
    if (i >= j) throw DimensionError("off-diagonal basis element requires i < j");
}

double relative_to(double err, double scale) { return scale > 0.0 ? err / scale : err; }

// Merge terms sharing identical leading factors by summing the last factor.
std::vector<Term> merge_terms(std::vector<Term> terms) {
    std::vector<Term> out;
    for (auto& t : terms) {
        auto same_head = [&](const Term& o) {
            return std::equal(o.begin(), o.end() - 1, t.begin(), t.end() - 1,
                              [](const auto& a, const auto& b) { return a.matrix() == b.matrix(); });
        };
        auto it = std::find_if(out.begin(), out.end(), same_head);
        if (it == out.end()) {
            out.push_back(std::move(t));
        } else {
            it->back() += t.back();
        }
    }
    std::erase_if(out, [](const Term& t) { return t.back().matrix().max_abs() == 0.0; });
    return out;
}

}  // namespace

// --- profile and factorization plumbing ----------------------------------------

DimProfile::DimProfile(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw DimensionError("a profile needs at least two subsystems");
    for (auto d : dims_)
        if (d < 2) throw DimensionError("every subsystem dimension must be at least 2");
}

std::size_t DimProfile::total() const noexcept {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

void check_shape(const TensorFactorization& f) {
    for (const auto& t : f.terms) {
        if (t.size() != f.profile.parties()) throw DimensionError("term has wrong number of factors");
        for (std::size_t j = 0; j < t.size(); ++j)
            if (t[j].dim() != f.profile[j]) throw DimensionError("factor dimension does not match profile");
    }
}

HermitianOperator reconstruct(const TensorFactorization& f) {
    check_shape(f);
    HermitianOperator sum = HermitianOperator::zero(f.profile.total());
    for (const auto& t : f.terms) sum += kron_all(t);
    return sum;
}

double relative_reconstruction_error(const TensorFactorization& f, const HermitianOperator& a) {
    const double err = max_abs_diff(reconstruct(f).matrix(), a.matrix());
    return relative_to(err, a.matrix().max_abs());
}

// --- unit-matrix decomposition ---------------------------------------------------

UnitIndex split_unit_index(std::size_t i, std::size_t j, std::size_t m, std::size_t n) {
    check_indices(i, j, m, n);
    return {(i - 1) / n + 1, (j - 1) / n + 1, (i - 1) % n + 1, (j - 1) % n + 1};
}

UnitProduct decompose_unit(std::size_t i, std::size_t j, std::size_t m, std::size_t n) {
    const auto s = split_unit_index(i, j, m, n);
    return {Complex{1.0, 0.0}, {{s.k, s.l}, {s.ip, s.jp}}};
}

std::vector<UnitProduct> expand_units(const ComplexMatrix& a, const DimProfile& profile) {
    if (!a.is_square() || a.rows() != profile.total()) throw DimensionError("profile does not match matrix size");
    const auto& dims = profile.dims();
    std::vector<UnitProduct> out;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (a(r, c) == Complex{}) continue;
            UnitProduct p;
            p.coefficient = a(r, c);
            p.positions.resize(dims.size());
            // Peel off the last subsystem repeatedly (left-associative block split).
            std::size_t rr = r;
            std::size_t cc = c;
            for (std::size_t j = dims.size(); j-- > 0;) {
                p.positions[j] = {rr % dims[j] + 1, cc % dims[j] + 1};
                rr /= dims[j];
                cc /= dims[j];
            }
            out.push_back(std::move(p));
        }
    return out;
}

ComplexMatrix reconstruct_units(const std::vector<UnitProduct>& terms, const DimProfile& profile) {
    ComplexMatrix sum(profile.total(), profile.total());
    for (const auto& t : terms) {
        if (t.positions.size() != profile.parties()) throw DimensionError("unit product has wrong arity");
        ComplexMatrix prod = ComplexMatrix::unit(profile[0], t.positions[0].first, t.positions[0].second);
        for (std::size_t j = 1; j < t.positions.size(); ++j)
            prod = kron(prod, ComplexMatrix::unit(profile[j], t.positions[j].first, t.positions[j].second));
        sum += t.coefficient * prod;
    }
    return sum;
}

// --- Hermitian basis elements ------------------------------------------------------

TensorFactorization decompose_diag_basis(std::size_t i, std::size_t m, std::size_t n) {
    const auto s = split_unit_index(i, i, m, n);
    return two_party(m, n, {{unit_diag(m, s.k), unit_diag(n, s.ip)}});
}

TensorFactorization decompose_sym_basis(std::size_t i, std::size_t j, std::size_t m, std::size_t n) {
    const auto s = split_unit_index(i, j, m, n);
    check_strict(i, j);
    if (s.k == s.l) return two_party(m, n, {{unit_diag(m, s.k), sym_unit(n, s.ip, s.jp)}});
    if (s.ip == s.jp) return two_party(m, n, {{sym_unit(m, s.k, s.l), unit_diag(n, s.ip)}});
    return two_party(m, n,
                     {{sym_unit(m, s.k, s.l), sym_unit(n, s.ip, s.jp).scaled(0.5)},
                      {antisym_unit(m, s.k, s.l), antisym_unit(n, s.ip, s.jp).scaled(-0.5)}});
}

TensorFactorization decompose_antisym_basis(std::size_t i, std::size_t j, std::size_t m, std::size_t n) {
    const auto s = split_unit_index(i, j, m, n);
    check_strict(i, j);
    if (s.k == s.l) return two_party(m, n, {{unit_diag(m, s.k), antisym_unit(n, s.ip, s.jp)}});
    if (s.ip == s.jp) return two_party(m, n, {{antisym_unit(m, s.k, s.l), unit_diag(n, s.ip)}});
    return two_party(m, n,
                     {{sym_unit(m, s.k, s.l), antisym_unit(n, s.ip, s.jp).scaled(0.5)},
                      {antisym_unit(m, s.k, s.l), sym_unit(n, s.ip, s.jp).scaled(0.5)}});
}

namespace {

std::vector<Term> elementary_terms(const HermitianOperator& a, const std::vector<std::size_t>& dims,
                                   double prune) {
    const std::size_t m = dims.front();
    const std::size_t n = a.dim() / m;
    const std::vector<std::size_t> rest(dims.begin() + 1, dims.end());

    std::vector<Term> out;
    auto emit = [&](const TensorFactorization& basis, double coefficient) {
        for (const auto& t : basis.terms) {
            HermitianOperator second = t[1].scaled(coefficient);
            if (rest.size() == 1) {
                out.push_back({t[0], std::move(second)});
                continue;
            }
            for (auto& sub : elementary_terms(second, rest, prune)) {
                Term full{t[0]};
                full.insert(full.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
                out.push_back(std::move(full));
            }
        }
    };

    const std::size_t dim = a.dim();
    for (std::size_t i = 1; i <= dim; ++i) {
        const double d = a(i - 1, i - 1).real();
        if (std::abs(d) >= prune) emit(decompose_diag_basis(i, m, n), d);
        for (std::size_t j = i + 1; j <= dim; ++j) {
            const Complex z = a(i - 1, j - 1);
            if (std::abs(z.real()) >= prune) emit(decompose_sym_basis(i, j, m, n), z.real());
            if (std::abs(z.imag()) >= prune) emit(decompose_antisym_basis(i, j, m, n), z.imag());
        }
    }
    return out;
}

}  // namespace

TensorFactorization decompose_elementary(const HermitianOperator& a, const DimProfile& profile,
                                         const ElementaryOptions& opts) {
    if (a.dim() != profile.total()) throw DimensionError("profile does not match operator dimension");
    TensorFactorization f{profile, elementary_terms(a, profile.dims(), opts.prune_tolerance)};
    if (opts.merge) f.terms = merge_terms(std::move(f.terms));
    const double err = relative_reconstruction_error(f, a);
    if (err > opts.reconstruction_tolerance) {
        throw ReconstructionError("elementary decomposition misses reconstruction tolerance: " + format_error(err));
    }
    return f;
}

// --- realignment / SVD route --------------------------------------------------------

TensorFactorization decompose_svd(const HermitianOperator& a, std::size_t m, std::size_t n, const SvdOptions& opts) {
    const DimProfile profile({m, n});
    if (a.dim() != m * n) throw DimensionError("profile does not match operator dimension");

    const ComplexMatrix re = realign(a.matrix().real_part(), m, n);
    const ComplexMatrix im = realign(a.matrix().imag_part(), m, n);
    ComplexMatrix block(2 * m * m, 2 * n * n);
    for (std::size_t r = 0; r < m * m; ++r)
        for (std::size_t c = 0; c < n * n; ++c) {
            block(r, c) = re(r, c);
            block(r, c + n * n) = im(r, c);
            block(r + m * m, c) = -im(r, c);
            block(r + m * m, c + n * n) = re(r, c);
        }
    const ComplexMatrix q1 = build_Q1(m);
    const ComplexMatrix q2 = build_Q1(n);
    const ComplexMatrix transformed = q1.transpose() * block * q2;

    // Lower-right m^2 x n^2 block; the off-diagonal blocks vanish for Hermitian input.
    ComplexMatrix lower(m * m, n * n);
    double off_block = 0.0;
    for (std::size_t r = 0; r < 2 * m * m; ++r)
        for (std::size_t c = 0; c < 2 * n * n; ++c) {
            const bool row_low = r >= m * m;
            const bool col_low = c >= n * n;
            if (row_low && col_low) lower(r - m * m, c - n * n) = transformed(r, c).real();
            else if (row_low != col_low) off_block = std::max(off_block, std::abs(transformed(r, c)));
        }
    const double scale = a.matrix().max_abs();
    if (relative_to(off_block, scale) > opts.reconstruction_tolerance) {
        throw ReconstructionError("transformed matrix has non-vanishing off-diagonal blocks");
    }

    const SvdResult s = svd(lower);
    TensorFactorization f{profile, {}};
    const double cutoff = s.sigma.empty() ? 0.0 : opts.relative_cutoff * s.sigma.front();
    for (std::size_t t = 0; t < s.sigma.size(); ++t) {
        if (s.sigma[t] <= cutoff || s.sigma[t] == 0.0) continue;
        std::vector<Complex> pad_b(2 * m * m);
        std::vector<Complex> pad_c(2 * n * n);
        for (std::size_t r = 0; r < m * m; ++r) pad_b[m * m + r] = s.sigma[t] * s.u(r, t).real();
        for (std::size_t r = 0; r < n * n; ++r) pad_c[n * n + r] = s.v(r, t).real();

        // (vec b; -vec B) = Q1 (0; sigma u),  (vec c; vec C) = Q2 (0; v)
        const ComplexMatrix coords_b = q1 * ComplexMatrix(2 * m * m, 1, pad_b);
        const ComplexMatrix coords_c = q2 * ComplexMatrix(2 * n * n, 1, pad_c);
        std::vector<Complex> vb(m * m);
        std::vector<Complex> vc(n * n);
        for (std::size_t r = 0; r < m * m; ++r)
            vb[r] = Complex(coords_b(r, 0).real(), -coords_b(m * m + r, 0).real());
        for (std::size_t r = 0; r < n * n; ++r)
            vc[r] = Complex(coords_c(r, 0).real(), coords_c(n * n + r, 0).real());
        f.terms.push_back({HermitianOperator(unvec(vb, m, m)), HermitianOperator(unvec(vc, n, n))});
    }

    const double err = relative_reconstruction_error(f, a);
    if (err > opts.reconstruction_tolerance) {
        throw ReconstructionError("SVD decomposition misses reconstruction tolerance: " + format_error(err));
    }
    return f;
}

TensorFactorization decompose_svd(const HermitianOperator& a, const DimProfile& profile, const SvdOptions& opts) {
    if (a.dim() != profile.total()) throw DimensionError("profile does not match operator dimension");
    const std::size_t m = profile[0];
    const auto rest = profile.tail();
    auto head = decompose_svd(a, m, a.dim() / m, opts);
    if (rest.size() == 1) return head;

    TensorFactorization f{profile, {}};
    for (auto& t : head.terms) {
        for (auto& sub : decompose_svd(t[1], DimProfile(rest), opts).terms) {
            Term full{t[0]};
            full.insert(full.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
            f.terms.push_back(std::move(full));
        }
    }
    const double err = relative_reconstruction_error(f, a);
    if (err > opts.reconstruction_tolerance) {
        throw ReconstructionError("SVD decomposition misses reconstruction tolerance: " + format_error(err));
    }
    return f;
}

// --- dimension counts ----------------------------------------------------------------

namespace {
std::int64_t choose2(std::int64_t x) { return x < 2 ? 0 : x * (x - 1) / 2; }
}  // namespace

std::int64_t dim_gap_symmetric(std::int64_t m, std::int64_t n) {
    return choose2(m * n + 1) - choose2(m + 1) * choose2(n + 1);
}

std::int64_t dim_gap_antisymmetric(std::int64_t m, std::int64_t n) {
    return choose2(m * n - 1) - choose2(m - 1) * choose2(n - 1);
}

std::int64_t dim_gap_symmetric_closed(std::int64_t m, std::int64_t n) { return choose2(m) * choose2(n); }

std::int64_t dim_gap_antisymmetric_closed(std::int64_t m, std::int64_t n) {
    return choose2(m + 1) * choose2(n + 1) - 1;
}

}  // namespace sepind
