#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sepind/decompose.hpp"
#include "sepind/hermitian_core.hpp"

namespace sepind {

struct NotDensityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Per-term, per-factor (least, greatest) eigenvalue pairs.
struct SpectrumSummary {
    std::vector<std::vector<Extremes>> terms;
};

SpectrumSummary summarize(const TensorFactorization& f);

/// base + q * (Id (x) ... (x) Id) with every factor of base positive semi-definite.
/// Identity padding is stored explicitly as identity factors.
struct ShiftedForm {
    TensorFactorization base;
    double q = 0.0;
};

/// Rewrites every term as shifted positive pieces plus a scalar. Each factor P is
/// replaced by P' = P - m(P) I, the product is expanded over subsets of subsystems,
/// and negative coefficients are absorbed left to right into successive shifts.
ShiftedForm shift_normal_form(const TensorFactorization& f);

/// Values in (-kSignTolerance, 0) are classified as non-negative.
inline constexpr double kSignTolerance = 1e-12;

double q_bipartite(const SpectrumSummary& s);
double q_tripartite(const SpectrumSummary& s);
/// Sum over terms of the product of least eigenvalues; every factor must be PSD.
/// Least eigenvalues inside (-kSignTolerance, 0) count as zero.
double q_multipartite_nonneg(const SpectrumSummary& s);

/// Spectral lower bounds on q. max_eig is M of the reconstructed operator.
double lower_bound_bipartite(const SpectrumSummary& s, double max_eig);
/// The same bound written per sign pattern of (m(B), m(C)).
double lower_bound_bipartite_by_sign(const SpectrumSummary& s, double max_eig);
double lower_bound_tripartite(const SpectrumSummary& s, double max_eig);
/// M(A) - sum [prod M - prod m]; valid when every factor is PSD.
double lower_bound_nonneg(const SpectrumSummary& s, double max_eig);
/// M(A) - sum of the greatest eigenvalues of the shifted pieces; any number of parties.
double lower_bound_shifted(const ShiftedForm& shifted, double max_eig);

/// m(A); no decomposition of A yields a larger q.
double upper_bound(const HermitianOperator& a);

enum class Verdict { Separable, Entangled, Inconclusive };
enum class Method { Elementary, Svd };

std::string_view to_string(Verdict v);
std::string_view to_string(Method m);
std::optional<Verdict> parse_verdict(std::string_view s);
std::optional<Method> parse_method(std::string_view s);

struct AnalysisOptions {
    Method method = Method::Elementary;
    /// When false the input only needs to be Hermitian and no verdict is produced.
    bool verdict = true;
    double density_tolerance = 1e-10;
    double verdict_tolerance = 1e-10;
    /// Overrides the decomposition's own reconstruction tolerance when set.
    std::optional<double> reconstruction_tolerance;
};

struct AnalysisReport {
    double q = 0.0;
    double lower_bound = 0.0;
    double upper_bound_mA = 0.0;
    double M_A = 0.0;
    double ppt_min_eig = 0.0;
    std::optional<Verdict> verdict;
    SpectrumSummary spectra;

    std::size_t term_count() const noexcept { return spectra.terms.size(); }
};

/// Throws NotDensityError unless a is PSD with unit trace.
void require_density(const HermitianOperator& a, double tol = 1e-10);

AnalysisReport analyze(const HermitianOperator& a, const DimProfile& profile, const AnalysisOptions& opts = {});

}  // namespace sepind
