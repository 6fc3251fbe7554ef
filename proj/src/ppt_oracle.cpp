#include "sepind/ppt_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sepind/random.hpp"

namespace sepind {

HermitianOperator partial_transpose(const HermitianOperator& a, const DimProfile& profile, SubsystemIndex sub) {
    if (a.dim() != profile.total()) throw DimensionError("partial_transpose: profile does not match operator");
    if (sub.which < 1 || sub.which > profile.parties()) throw DimensionError("partial_transpose: subsystem out of range");

    // Index = outer * (d * inner_size) + digit * inner_size + inner.
    const std::size_t d = profile[sub.which - 1];
    std::size_t inner = 1;
    for (std::size_t j = sub.which; j < profile.parties(); ++j) inner *= profile[j];

    const std::size_t n = a.dim();
    ComplexMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t rd = (r / inner) % d;
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t cd = (c / inner) % d;
            const std::size_t r2 = r + (cd - rd) * inner;
            const std::size_t c2 = c + (rd - cd) * inner;
            out(r2, c2) = a(r, c);
        }
    }
    return HermitianOperator(std::move(out));
}

double ppt_min_eig(const HermitianOperator& a, const DimProfile& profile) {
    if (profile.parties() == 2) return eig_extremes(partial_transpose(a, profile, {2})).min;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= profile.parties(); ++j)
        best = std::min(best, eig_extremes(partial_transpose(a, profile, {j})).min);
    return best;
}

HermitianOperator random_density(std::size_t dim, std::size_t rank, std::uint64_t seed, bool equal_weights) {
    if (rank < 1 || rank > dim) throw DimensionError("random_density: rank must be in [1, dim]");
    Rng rng(seed);

    // Gram-Schmidt on Gaussian columns; redraw on (measure-zero) dependence.
    std::vector<std::vector<Complex>> basis;
    while (basis.size() < rank) {
        std::vector<Complex> v(dim);
        for (auto& x : v) x = Complex(rng.normal(), rng.normal());
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                Complex dot = 0.0;
                for (std::size_t i = 0; i < dim; ++i) dot += std::conj(b[i]) * v[i];
                for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * b[i];
            }
        }
        double norm = 0.0;
        for (const auto& x : v) norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm < 1e-8) continue;
        for (auto& x : v) x /= norm;
        basis.push_back(std::move(v));
    }

    std::vector<double> w(rank, 1.0);
    if (!equal_weights) {
        for (auto& x : w) x = rng.uniform() + 1e-3;
    }
    double total = 0.0;
    for (auto x : w) total += x;

    ComplexMatrix rho(dim, dim);
    for (std::size_t k = 0; k < rank; ++k) {
        const double p = w[k] / total;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) rho(i, j) += p * basis[k][i] * std::conj(basis[k][j]);
    }
    // Exact Hermitian symmetry.
    for (std::size_t i = 0; i < dim; ++i) {
        rho(i, i) = rho(i, i).real();
        for (std::size_t j = i + 1; j < dim; ++j) rho(j, i) = std::conj(rho(i, j));
    }
    return HermitianOperator(std::move(rho));
}

SeparableSample random_separable(const DimProfile& profile, std::size_t terms, std::uint64_t seed) {
    if (terms < 1) throw std::invalid_argument("random_separable: need at least one term");
    Rng rng(seed);
    std::vector<double> weights(terms);
    double total = 0.0;
    for (auto& p : weights) {
        p = rng.uniform() + 1e-3;
        total += p;
    }
    for (auto& p : weights) p /= total;

    TensorFactorization witness{profile, {}};
    for (std::size_t t = 0; t < terms; ++t) {
        Term term;
        for (std::size_t j = 0; j < profile.parties(); ++j) {
            const std::size_t d = profile[j];
            const std::size_t rank = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(d));
            auto rho = random_density(d, std::min(rank, d), rng.next_u64());
            term.push_back(j == 0 ? rho.scaled(weights[t]) : std::move(rho));
        }
        witness.terms.push_back(std::move(term));
    }
    return {reconstruct(witness), std::move(witness), std::move(weights)};
}

}  // namespace sepind
