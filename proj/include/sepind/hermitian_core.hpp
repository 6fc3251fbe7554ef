#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepind {

using Complex = std::complex<double>;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct HermiticityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense row-major complex matrix. Entries are always finite.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    /// The unit matrix E_{ij} of size n x n, 1-based indices.
    static ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::span<const Complex> entries() const noexcept { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix real_part() const;
    ComplexMatrix imag_part() const;
    double max_abs() const noexcept;
    Complex trace() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex s);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |a_ij - b_ij|; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Default hermiticity tolerance: 1e-12 relative to the largest entry, floor 1e-14.
double hermiticity_tolerance(const ComplexMatrix& m);

/// Square complex matrix equal to its conjugate transpose within tolerance.
class HermitianOperator {
public:
    HermitianOperator() = default;
    explicit HermitianOperator(ComplexMatrix m);
    HermitianOperator(ComplexMatrix m, double tol);

    static HermitianOperator identity(std::size_t n) {
        return HermitianOperator(ComplexMatrix::identity(n));
    }
    static HermitianOperator zero(std::size_t n) {
        return HermitianOperator(ComplexMatrix(n, n));
    }

    std::size_t dim() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    HermitianOperator& operator+=(const HermitianOperator& o);
    HermitianOperator& operator-=(const HermitianOperator& o);
    HermitianOperator scaled(double s) const;
    /// this - s * I
    HermitianOperator shifted(double s) const;

private:
    ComplexMatrix m_;
};

HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b);
HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b);

/// Eigenvalues sorted ascending; eigenvector columns in matching order when requested.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::optional<ComplexMatrix> eigenvectors;
};

/// Least and greatest eigenvalue of a Hermitian operator.
struct Extremes {
    double min = 0.0;
    double max = 0.0;
    double spread() const noexcept { return max - min; }
    friend bool operator==(const Extremes&, const Extremes&) = default;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator kron_all(std::span<const HermitianOperator> factors);

/// Cyclic complex Jacobi eigensolver.
Spectrum eigh(const HermitianOperator& a, bool want_vectors = true);
Extremes eig_extremes(const HermitianOperator& a);

/// Extremes of s*P given the extremes of P, without an eigensolve.
Extremes scale_extremes(double s, Extremes p);

bool is_psd(const HermitianOperator& a, std::optional<double> tol = std::nullopt);

/// Column-stacked vectorization.
std::vector<Complex> vec(const ComplexMatrix& t);
/// Inverse of vec for an rows x cols matrix.
ComplexMatrix unvec(std::span<const Complex> v, std::size_t rows, std::size_t cols);

/// Realignment of an (mn)x(mn) matrix viewed as m x m blocks of size n x n.
/// Row (k,l) of the result, ordered (1,1),(2,1),...,(m,1),(1,2),...,(m,m), is vec(Z_kl)^t.
ComplexMatrix realign(const ComplexMatrix& z, std::size_t m, std::size_t n);

/// [[A^R, A^I], [-A^I, A^R]]
ComplexMatrix sigma_embed(const ComplexMatrix& a);

/// Antisymmetric selector, m^2 x m(m-1)/2, entries 0/1/-1.
ComplexMatrix build_Qs(std::size_t m);
/// Symmetric selector, m^2 x m(m+1)/2, entries 0/1.
ComplexMatrix build_Qa(std::size_t m);
/// [[Qs~, 0, 0, Qa~], [0, Qa~, Qs~, 0]] with unit-norm columns; 2m^2 x 2m^2 orthogonal.
ComplexMatrix build_Q1(std::size_t m);

struct SvdResult {
    ComplexMatrix u;             // rows x k
    std::vector<double> sigma;   // descending, k = min(rows, cols)
    ComplexMatrix v;             // cols x k
};

/// One-sided Jacobi SVD: m = u * diag(sigma) * v^H.
SvdResult svd(const ComplexMatrix& m);

}  // namespace sepind
