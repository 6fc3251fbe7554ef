#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sepind/hermitian_core.hpp"

namespace sepind {

struct ReconstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Subsystem dimensions (d_1, ..., d_k), k >= 2, every d_j >= 2.
class DimProfile {
public:
    DimProfile() = default;
    explicit DimProfile(std::vector<std::size_t> dims);
    DimProfile(std::initializer_list<std::size_t> dims) : DimProfile(std::vector<std::size_t>(dims)) {}

    std::size_t parties() const noexcept { return dims_.size(); }
    std::size_t operator[](std::size_t j) const { return dims_.at(j); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t total() const noexcept;
    /// Profile with the first subsystem removed; may have a single entry.
    std::vector<std::size_t> tail() const { return {dims_.begin() + 1, dims_.end()}; }

    friend bool operator==(const DimProfile&, const DimProfile&) = default;

private:
    std::vector<std::size_t> dims_;
};

/// One summand B^1 (x) ... (x) B^k.
using Term = std::vector<HermitianOperator>;

/// A = sum over terms of the Kronecker product of the term's factors.
struct TensorFactorization {
    DimProfile profile;
    std::vector<Term> terms;
};

/// Throws DimensionError unless every term has one factor per subsystem of matching size.
void check_shape(const TensorFactorization& f);

HermitianOperator reconstruct(const TensorFactorization& f);

/// Block index split i = (k-1)n + i', j = (l-1)n + j'; all indices 1-based.
struct UnitIndex {
    std::size_t k, l, ip, jp;
    friend bool operator==(const UnitIndex&, const UnitIndex&) = default;
};
UnitIndex split_unit_index(std::size_t i, std::size_t j, std::size_t m, std::size_t n);

/// E_ij^{mn} = E_kl^m (x) E_{i'j'}^n as a coefficient-free unit product. The factors
/// are generally not Hermitian, so this is returned outside TensorFactorization.
struct UnitProduct {
    Complex coefficient{1.0, 0.0};
    /// (row, col) per subsystem, 1-based.
    std::vector<std::pair<std::size_t, std::size_t>> positions;
    friend bool operator==(const UnitProduct&, const UnitProduct&) = default;
};
UnitProduct decompose_unit(std::size_t i, std::size_t j, std::size_t m, std::size_t n);

/// Entrywise unit-matrix expansion of a whole matrix over a profile, one product
/// per nonzero entry, in row-major entry order.
std::vector<UnitProduct> expand_units(const ComplexMatrix& a, const DimProfile& profile);
ComplexMatrix reconstruct_units(const std::vector<UnitProduct>& terms, const DimProfile& profile);

/// Diagonal element E_ii (Hermitian); single term.
TensorFactorization decompose_diag_basis(std::size_t i, std::size_t m, std::size_t n);
/// E_ij + E_ji, i < j.
TensorFactorization decompose_sym_basis(std::size_t i, std::size_t j, std::size_t m, std::size_t n);
/// sqrt(-1) (E_ij - E_ji), i < j.
TensorFactorization decompose_antisym_basis(std::size_t i, std::size_t j, std::size_t m, std::size_t n);

struct ElementaryOptions {
    double prune_tolerance = 1e-13;
    /// Merge terms whose leading k-1 factors are equal by summing their last factors.
    bool merge = false;
    double reconstruction_tolerance = 1e-12;
};

TensorFactorization decompose_elementary(const HermitianOperator& a, const DimProfile& profile,
                                         const ElementaryOptions& opts = {});

struct SvdOptions {
    /// Singular values at or below this fraction of the largest are dropped.
    double relative_cutoff = 1e-13;
    double reconstruction_tolerance = 1e-9;
};

/// Bipartite realignment/SVD factorization; at most m^2 terms.
TensorFactorization decompose_svd(const HermitianOperator& a, std::size_t m, std::size_t n,
                                  const SvdOptions& opts = {});
/// Multipartite variant: split off the first subsystem, then recurse on each second factor.
TensorFactorization decompose_svd(const HermitianOperator& a, const DimProfile& profile,
                                  const SvdOptions& opts = {});

/// C(mn+1,2) - C(m+1,2) C(n+1,2)
std::int64_t dim_gap_symmetric(std::int64_t m, std::int64_t n);
/// C(mn-1,2) - C(m-1,2) C(n-1,2)
std::int64_t dim_gap_antisymmetric(std::int64_t m, std::int64_t n);
/// Closed forms the gaps are claimed to equal: C(m,2) C(n,2) and C(m+1,2) C(n+1,2) - 1.
std::int64_t dim_gap_symmetric_closed(std::int64_t m, std::int64_t n);
std::int64_t dim_gap_antisymmetric_closed(std::int64_t m, std::int64_t n);

/// max|reconstruct(f) - a| / max|a| (absolute when a is zero).
double relative_reconstruction_error(const TensorFactorization& f, const HermitianOperator& a);

}  // namespace sepind
