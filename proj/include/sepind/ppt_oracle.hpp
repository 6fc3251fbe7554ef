#pragma once

#include <cstdint>
#include <vector>

#include "sepind/decompose.hpp"
#include "sepind/hermitian_core.hpp"

namespace sepind {

/// 1-based subsystem position within a DimProfile.
struct SubsystemIndex {
    std::size_t which = 1;
};

/// Transposes the indices of one subsystem only.
HermitianOperator partial_transpose(const HermitianOperator& a, const DimProfile& profile, SubsystemIndex sub);

/// Least eigenvalue over the partial transposes of every single subsystem
/// (for two parties: transpose of the second subsystem).
double ppt_min_eig(const HermitianOperator& a, const DimProfile& profile);

/// PSD, unit trace, requested rank. Columns are orthonormalized Gaussian vectors;
/// weights are random and normalized, or all equal when equal_weights is set.
HermitianOperator random_density(std::size_t dim, std::size_t rank, std::uint64_t seed, bool equal_weights = false);

struct SeparableSample {
    HermitianOperator state;
    /// Convex weight folded into the first factor of each term.
    TensorFactorization witness;
    std::vector<double> weights;
};

/// sum_i p_i rho_i^1 (x) ... (x) rho_i^k with random density factors and convex weights.
SeparableSample random_separable(const DimProfile& profile, std::size_t terms, std::uint64_t seed);

}  // namespace sepind
