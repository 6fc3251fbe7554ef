#include "sepind/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sepind/ppt_oracle.hpp"

namespace sepind {

namespace {

bool negative(double x) { return x < -kSignTolerance; }

void require_arity(const SpectrumSummary& s, std::size_t k, const char* what) {
    for (const auto& t : s.terms)
        if (t.size() != k) throw std::invalid_argument(std::string(what) + ": wrong number of factors per term");
}

// Least eigenvalue of s * P' where P' = P - m(P) I has extremes (0, spread).
double min_of_scaled_shift(double s, double spread) { return negative(s) ? s * spread : 0.0; }

// Spread of s * P, from the extremes of P.
double spread_of_scaled(double s, Extremes p) { return scale_extremes(s, p).spread(); }

}  // namespace

SpectrumSummary summarize(const TensorFactorization& f) {
    check_shape(f);
    SpectrumSummary s;
    s.terms.reserve(f.terms.size());
    for (const auto& t : f.terms) {
        std::vector<Extremes> row;
        row.reserve(t.size());
        for (const auto& factor : t) row.push_back(eig_extremes(factor));
        s.terms.push_back(std::move(row));
    }
    return s;
}

// --- procedural normal form -------------------------------------------------------

ShiftedForm shift_normal_form(const TensorFactorization& f) {
    check_shape(f);
    const std::size_t k = f.profile.parties();
    ShiftedForm out{{f.profile, {}}, 0.0};

    std::vector<HermitianOperator> identities;
    for (std::size_t j = 0; j < k; ++j) identities.push_back(HermitianOperator::identity(f.profile[j]));

    for (const auto& term : f.terms) {
        std::vector<double> least(k);
        std::vector<HermitianOperator> shifted;
        double term_scale = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            least[j] = eig_extremes(term[j]).min;
            shifted.push_back(term[j].shifted(least[j]));
            term_scale *= std::max(term[j].matrix().max_abs(), std::abs(least[j]));
        }
        const double negligible = 1e-15 * term_scale;

        // Subsets of subsystems carrying a shifted factor, largest first.
        for (std::size_t mask = (std::size_t{1} << k); mask-- > 0;) {
            double coefficient = 1.0;
            std::vector<std::size_t> members;
            for (std::size_t j = 0; j < k; ++j) {
                if (mask & (std::size_t{1} << j)) members.push_back(j);
                else coefficient *= least[j];
            }

            for (std::size_t pos = 0; pos < members.size(); ++pos) {
                const std::size_t j = members[pos];
                const HermitianOperator scaled = shifted[j].scaled(coefficient);
                const double mu = eig_extremes(scaled).min;

                Term piece = identities;
                piece[j] = scaled.shifted(mu);
                for (std::size_t rest = pos + 1; rest < members.size(); ++rest) piece[members[rest]] = shifted[members[rest]];

                double size = 1.0;
                for (const auto& factor : piece) size *= factor.matrix().max_abs();
                if (size > negligible) out.base.terms.push_back(std::move(piece));
                coefficient = mu;
            }
            out.q += coefficient;
        }
    }
    return out;
}

// --- closed forms -------------------------------------------------------------------

double q_bipartite(const SpectrumSummary& s) {
    require_arity(s, 2, "q_bipartite");
    double both_nonneg = 0.0;
    double b_negative = 0.0;
    double c_negative = 0.0;
    double both_negative = 0.0;
    for (const auto& t : s.terms) {
        const Extremes b = t[0];
        const Extremes c = t[1];
        const bool nb = negative(b.min);
        const bool nc = negative(c.min);
        if (!nb && !nc) both_nonneg += b.min * c.min;
        if (nb) b_negative += b.min * c.max;
        if (nc) c_negative += b.max * c.min;
        if (nb && nc) both_negative += b.min * c.min;
    }
    return both_nonneg + b_negative + c_negative - both_negative;
}

double q_tripartite(const SpectrumSummary& s) {
    require_arity(s, 3, "q_tripartite");
    double q = 0.0;
    for (const auto& t : s.terms) {
        const double b = t[0].min;
        const double c = t[1].min;
        const double d = t[2].min;
        const double sb = t[0].spread();
        const double sc = t[1].spread();
        const double sd = t[2].spread();

        // m(m(d B') C'), m(m(b C') D'), m(m(c B') D')
        q += min_of_scaled_shift(min_of_scaled_shift(d, sb), sc);
        q += min_of_scaled_shift(min_of_scaled_shift(b, sc), sd);
        q += min_of_scaled_shift(min_of_scaled_shift(c, sb), sd);
        // m(cd B'), m(bd C'), m(bc D')
        q += min_of_scaled_shift(c * d, sb);
        q += min_of_scaled_shift(b * d, sc);
        q += min_of_scaled_shift(b * c, sd);
        q += b * c * d;
    }
    return q;
}

double q_multipartite_nonneg(const SpectrumSummary& s) {
    double q = 0.0;
    for (const auto& t : s.terms) {
        double prod = 1.0;
        for (const auto& e : t) {
            if (negative(e.min)) {
                throw std::invalid_argument("q_multipartite_nonneg: factor with negative least eigenvalue");
            }
            prod *= std::max(e.min, 0.0);
        }
        q += prod;
    }
    return q;
}

double lower_bound_bipartite(const SpectrumSummary& s, double max_eig) {
    require_arity(s, 2, "lower_bound_bipartite");
    double sum = 0.0;
    for (const auto& t : s.terms) {
        const Extremes b = t[0];
        const Extremes c = t[1];
        sum += b.spread() * c.spread() + spread_of_scaled(c.min, b) + spread_of_scaled(b.min, c);
    }
    return max_eig - sum;
}

double lower_bound_bipartite_by_sign(const SpectrumSummary& s, double max_eig) {
    require_arity(s, 2, "lower_bound_bipartite_by_sign");
    double sum = 0.0;
    for (const auto& t : s.terms) {
        const double mb = t[0].min, Mb = t[0].max;
        const double mc = t[1].min, Mc = t[1].max;
        const bool nb = negative(mb);
        const bool nc = negative(mc);
        if (!nb && !nc) sum += Mb * Mc - mb * mc;
        else if (nb && !nc) sum += (Mb - 2 * mb) * Mc + mb * mc;
        else if (!nb && nc) sum += Mb * (Mc - 2 * mc) + mb * mc;
        else sum += (Mb - 2 * mb) * (Mc - 2 * mc) - mb * mc;
    }
    return max_eig - sum;
}

double lower_bound_tripartite(const SpectrumSummary& s, double max_eig) {
    require_arity(s, 3, "lower_bound_tripartite");
    double sum = 0.0;
    for (const auto& t : s.terms) {
        const Extremes B = t[0], C = t[1], D = t[2];
        const double b = B.min, c = C.min, d = D.min;

        sum += B.spread() * C.spread() * D.spread();
        sum += spread_of_scaled(b * d, C) + spread_of_scaled(c * d, B) + spread_of_scaled(b * c, D);
        // m(m(B) C) - m(B) m(C) is the least eigenvalue of m(B) C'.
        sum += spread_of_scaled(scale_extremes(b, C).min - b * c, D);
        sum += spread_of_scaled(scale_extremes(c, B).min - c * b, D);
        sum += spread_of_scaled(scale_extremes(d, B).min - d * b, C);
        sum += spread_of_scaled(d, B) * C.spread();
        sum += spread_of_scaled(c, B) * D.spread();
        sum += spread_of_scaled(b, C) * D.spread();
    }
    return max_eig - sum;
}

double lower_bound_nonneg(const SpectrumSummary& s, double max_eig) {
    double sum = 0.0;
    for (const auto& t : s.terms) {
        double top = 1.0;
        double bottom = 1.0;
        for (const auto& e : t) {
            top *= e.max;
            bottom *= e.min;
        }
        sum += top - bottom;
    }
    return max_eig - sum;
}

double lower_bound_shifted(const ShiftedForm& shifted, double max_eig) {
    double sum = 0.0;
    for (const auto& piece : shifted.base.terms) {
        double top = 1.0;
        for (const auto& factor : piece) top *= eig_extremes(factor).max;
        sum += top;
    }
    return max_eig - sum;
}

double upper_bound(const HermitianOperator& a) { return eig_extremes(a).min; }

// --- verdicts --------------------------------------------------------------------------

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Separable: return "Separable";
        case Verdict::Entangled: return "Entangled";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::string_view to_string(Method m) { return m == Method::Svd ? "svd" : "elementary"; }

std::optional<Verdict> parse_verdict(std::string_view s) {
    for (auto v : {Verdict::Separable, Verdict::Entangled, Verdict::Inconclusive})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

std::optional<Method> parse_method(std::string_view s) {
    if (s == "elementary") return Method::Elementary;
    if (s == "svd") return Method::Svd;
    return std::nullopt;
}

void require_density(const HermitianOperator& a, double tol) {
    const double tr = a.matrix().trace().real();
    if (std::abs(tr - 1.0) > tol) {
        throw NotDensityError("not a density matrix: trace is " + std::to_string(tr));
    }
    const double least = eig_extremes(a).min;
    if (least < -tol) {
        throw NotDensityError("not a density matrix: least eigenvalue is " + std::to_string(least));
    }
}

AnalysisReport analyze(const HermitianOperator& a, const DimProfile& profile, const AnalysisOptions& opts) {
    if (a.dim() != profile.total()) throw DimensionError("profile does not match operator dimension");
    if (opts.verdict) require_density(a, opts.density_tolerance);

    ElementaryOptions eo;
    SvdOptions so;
    if (opts.reconstruction_tolerance) eo.reconstruction_tolerance = so.reconstruction_tolerance = *opts.reconstruction_tolerance;
    const TensorFactorization f =
        opts.method == Method::Svd ? decompose_svd(a, profile, so) : decompose_elementary(a, profile, eo);

    AnalysisReport r;
    r.spectra = summarize(f);
    r.M_A = eig_extremes(reconstruct(f)).max;
    r.upper_bound_mA = upper_bound(a);
    switch (profile.parties()) {
        case 2:
            r.q = q_bipartite(r.spectra);
            r.lower_bound = lower_bound_bipartite(r.spectra, r.M_A);
            break;
        case 3:
            r.q = q_tripartite(r.spectra);
            r.lower_bound = lower_bound_tripartite(r.spectra, r.M_A);
            break;
        default: {
            const auto shifted = shift_normal_form(f);
            r.q = shifted.q;
            r.lower_bound = lower_bound_shifted(shifted, r.M_A);
        }
    }
    r.ppt_min_eig = ppt_min_eig(a, profile);

    if (opts.verdict) {
        const bool ppt_exact = profile.parties() == 2 && profile[0] * profile[1] <= 6;
        if (r.q >= -opts.verdict_tolerance) r.verdict = Verdict::Separable;
        else if (r.ppt_min_eig < -opts.verdict_tolerance) r.verdict = Verdict::Entangled;
        else if (ppt_exact) r.verdict = Verdict::Separable;
        else r.verdict = Verdict::Inconclusive;
    }
    return r;
}

}  // namespace sepind
