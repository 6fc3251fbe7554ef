#include "sepind/random.hpp"

#include <cmath>
#include <numbers>

namespace sepind {

namespace {
std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t Rng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::split(std::uint64_t stream) const { return Rng(mix(state_ ^ mix(stream + 0x632be59bd9b4e019ULL))); }

HermitianOperator random_hermitian(std::size_t dim, Rng& rng) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = rng.normal();
        for (std::size_t j = i + 1; j < dim; ++j) {
            const Complex z(rng.normal(), rng.normal());
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    return HermitianOperator(std::move(m));
}

}  // namespace sepind
