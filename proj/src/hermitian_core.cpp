#include "sepind/hermitian_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sepind {

namespace {

void require_finite(std::span<const Complex> xs) {
    for (const auto& x : xs) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            throw std::invalid_argument("matrix entry is not finite");
        }
    }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch");
    }
}

// Unitary 2x2 rotation J = [[c, s], [-s*conj(e), c*conj(e)]] (rows/cols p,q) that
// diagonalizes [[app, apq], [conj(apq), aqq]] via J^H * . * J.
struct Rotation {
    double c = 1.0;
    double s = 0.0;
    Complex e{1.0, 0.0};

    static Rotation for_block(double app, double aqq, Complex apq) {
        Rotation r;
        const double g = std::abs(apq);
        r.e = apq / g;
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        r.c = 1.0 / std::sqrt(1.0 + t * t);
        r.s = t * r.c;
        return r;
    }

    // M <- M * J on columns p, q.
    void apply_right(ComplexMatrix& m, std::size_t p, std::size_t q) const {
        const Complex ce = std::conj(e);
        for (std::size_t k = 0; k < m.rows(); ++k) {
            const Complex mp = m(k, p);
            const Complex mq = m(k, q);
            m(k, p) = c * mp - s * ce * mq;
            m(k, q) = s * mp + c * ce * mq;
        }
    }

    // M <- J^H * M on rows p, q.
    void apply_left_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q) const {
        for (std::size_t k = 0; k < m.cols(); ++k) {
            const Complex mp = m(p, k);
            const Complex mq = m(q, k);
            m(p, k) = c * mp - s * e * mq;
            m(q, k) = s * mp + c * e * mq;
        }
    }
};

constexpr int kMaxSweeps = 100;

}  // namespace

// --- ComplexMatrix ---------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("entry count does not match rows x cols");
    }
    require_finite(entries_);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ragged matrix literal");
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
    require_finite(entries_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::unit(std::size_t n, std::size_t i, std::size_t j) {
    if (i < 1 || j < 1 || i > n || j > n) throw DimensionError("unit matrix index out of range");
    ComplexMatrix m(n, n);
    m(i - 1, j - 1) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::real_part() const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k].real();
    return r;
}

ComplexMatrix ComplexMatrix::imag_part() const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k].imag();
    return r;
}

double ComplexMatrix::max_abs() const noexcept {
    double best = 0.0;
    for (const auto& x : entries_) best = std::max(best, std::abs(x));
    return best;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw DimensionError("trace of non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "matrix addition");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "matrix subtraction");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& x : entries_) x *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimension mismatch");
    ComplexMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double best = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        best = std::max(best, std::abs(a.entries()[k] - b.entries()[k]));
    return best;
}

double hermiticity_tolerance(const ComplexMatrix& m) {
    return std::max(1e-12 * m.max_abs(), 1e-14);
}

// --- HermitianOperator -----------------------------------------------------

HermitianOperator::HermitianOperator(ComplexMatrix m) : HermitianOperator(m, hermiticity_tolerance(m)) {}

HermitianOperator::HermitianOperator(ComplexMatrix m, double tol) : m_(std::move(m)) {
    if (!m_.is_square()) throw DimensionError("Hermitian operator must be square");
    double worst = 0.0;
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = i; j < m_.cols(); ++j)
            worst = std::max(worst, std::abs(m_(i, j) - std::conj(m_(j, i))));
    if (worst > tol) {
        throw HermiticityError("matrix is not Hermitian: max |A_ij - conj(A_ji)| = " + std::to_string(worst));
    }
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
    m_ += o.m_;
    return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
    m_ -= o.m_;
    return *this;
}

HermitianOperator HermitianOperator::scaled(double s) const {
    HermitianOperator r = *this;
    r.m_ *= s;
    return r;
}

HermitianOperator HermitianOperator::shifted(double s) const {
    HermitianOperator r = *this;
    for (std::size_t i = 0; i < dim(); ++i) r.m_(i, i) -= s;
    return r;
}

HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }

// --- products ----------------------------------------------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(kron(a.matrix(), b.matrix()));
}

HermitianOperator kron_all(std::span<const HermitianOperator> factors) {
    if (factors.empty()) return HermitianOperator::identity(1);
    ComplexMatrix r = factors.front().matrix();
    for (std::size_t k = 1; k < factors.size(); ++k) r = kron(r, factors[k].matrix());
    return HermitianOperator(std::move(r));
}

// --- spectra -------------------------------------------------------------------

Spectrum eigh(const HermitianOperator& a, bool want_vectors) {
    const std::size_t n = a.dim();
    ComplexMatrix w = a.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    double total = 0.0;
    for (const auto& x : w.entries()) total += std::norm(x);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(w(p, q));
        if (off <= 1e-32 * total || off == 0.0) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = w(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const auto rot = Rotation::for_block(w(p, p).real(), w(q, q).real(), apq);
                rot.apply_right(w, p, q);
                rot.apply_left_adjoint(w, p, q);
                w(p, q) = 0.0;
                w(q, p) = 0.0;
                w(p, p) = w(p, p).real();
                w(q, q) = w(q, q).real();
                if (want_vectors) rot.apply_right(v, p, q);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return w(x, x).real() < w(y, y).real(); });

    Spectrum out;
    out.eigenvalues.reserve(n);
    for (auto k : order) out.eigenvalues.push_back(w(k, k).real());
    if (want_vectors) {
        ComplexMatrix sorted(n, n);
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < n; ++r) sorted(r, c) = v(r, order[c]);
        out.eigenvectors = std::move(sorted);
    }
    return out;
}

Extremes eig_extremes(const HermitianOperator& a) {
    if (a.dim() == 0) throw DimensionError("spectrum of an empty operator");
    const auto s = eigh(a, false);
    return {s.eigenvalues.front(), s.eigenvalues.back()};
}

Extremes scale_extremes(double s, Extremes p) {
    const double pos = (s + std::abs(s)) / 2.0;
    const double neg = (s - std::abs(s)) / 2.0;
    return {pos * p.min + neg * p.max, pos * p.max + neg * p.min};
}

bool is_psd(const HermitianOperator& a, std::optional<double> tol) {
    const double t = tol.value_or(1e-10 * std::max(1.0, a.matrix().max_abs()));
    return eig_extremes(a).min >= -t;
}

// --- realignment and embeddings ---------------------------------------------------

std::vector<Complex> vec(const ComplexMatrix& t) {
    std::vector<Complex> out;
    out.reserve(t.rows() * t.cols());
    for (std::size_t j = 0; j < t.cols(); ++j)
        for (std::size_t i = 0; i < t.rows(); ++i) out.push_back(t(i, j));
    return out;
}

ComplexMatrix unvec(std::span<const Complex> v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) throw DimensionError("unvec: length mismatch");
    ComplexMatrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = v[j * rows + i];
    return m;
}

ComplexMatrix realign(const ComplexMatrix& z, std::size_t m, std::size_t n) {
    if (!z.is_square() || z.rows() != m * n) {
        throw DimensionError("realign: matrix is not (mn)x(mn)");
    }
    ComplexMatrix r(m * m, n * n);
    for (std::size_t l = 0; l < m; ++l)
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t row = k + l * m;
            for (std::size_t jp = 0; jp < n; ++jp)
                for (std::size_t ip = 0; ip < n; ++ip) r(row, ip + jp * n) = z(k * n + ip, l * n + jp);
        }
    return r;
}

ComplexMatrix sigma_embed(const ComplexMatrix& a) {
    const std::size_t r = a.rows();
    const std::size_t c = a.cols();
    ComplexMatrix out(2 * r, 2 * c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const double re = a(i, j).real();
            const double im = a(i, j).imag();
            out(i, j) = re;
            out(i, j + c) = im;
            out(i + r, j) = -im;
            out(i + r, j + c) = re;
        }
    return out;
}

namespace {

// Row index of e_{ij} (1-based) in the ordering 11, 21, ..., m1, 12, ..., mm.
std::size_t pair_row(std::size_t i, std::size_t j, std::size_t m) { return (i - 1) + (j - 1) * m; }

ComplexMatrix normalize_columns(ComplexMatrix q) {
    for (std::size_t c = 0; c < q.cols(); ++c) {
        double norm = 0.0;
        for (std::size_t r = 0; r < q.rows(); ++r) norm += std::norm(q(r, c));
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) /= norm;
    }
    return q;
}

void place(ComplexMatrix& dst, const ComplexMatrix& src, std::size_t r0, std::size_t c0) {
    for (std::size_t i = 0; i < src.rows(); ++i)
        for (std::size_t j = 0; j < src.cols(); ++j) dst(r0 + i, c0 + j) = src(i, j);
}

}  // namespace

ComplexMatrix build_Qs(std::size_t m) {
    if (m < 1) throw DimensionError("build_Qs: m must be positive");
    ComplexMatrix q(m * m, m * (m - 1) / 2);
    std::size_t col = 0;
    for (std::size_t j = 1; j <= m; ++j)
        for (std::size_t i = j + 1; i <= m; ++i, ++col) {
            q(pair_row(i, j, m), col) = 1.0;
            q(pair_row(j, i, m), col) = -1.0;
        }
    return q;
}

ComplexMatrix build_Qa(std::size_t m) {
    if (m < 1) throw DimensionError("build_Qa: m must be positive");
    ComplexMatrix q(m * m, m * (m + 1) / 2);
    std::size_t col = 0;
    for (std::size_t j = 1; j <= m; ++j) {
        q(pair_row(j, j, m), col++) = 1.0;
        for (std::size_t i = j + 1; i <= m; ++i, ++col) {
            q(pair_row(i, j, m), col) = 1.0;
            q(pair_row(j, i, m), col) = 1.0;
        }
    }
    return q;
}

ComplexMatrix build_Q1(std::size_t m) {
    const ComplexMatrix qs = normalize_columns(build_Qs(m));
    const ComplexMatrix qa = normalize_columns(build_Qa(m));
    const std::size_t half = m * m;
    const std::size_t ns = qs.cols();
    const std::size_t na = qa.cols();
    ComplexMatrix q(2 * half, 2 * half);
    place(q, qs, 0, 0);
    place(q, qa, half, ns);
    place(q, qs, half, ns + na);
    place(q, qa, 0, ns + na + ns);
    return q;
}

// --- SVD -------------------------------------------------------------------------

SvdResult svd(const ComplexMatrix& m) {
    if (m.rows() < m.cols()) {
        auto t = svd(m.adjoint());
        return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
    }
    const std::size_t rows = m.rows();
    const std::size_t k = m.cols();
    ComplexMatrix w = m;
    ComplexMatrix v = ComplexMatrix::identity(k);

    auto column_dot = [&](std::size_t p, std::size_t q) {
        Complex s = 0.0;
        for (std::size_t r = 0; r < rows; ++r) s += std::conj(w(r, p)) * w(r, q);
        return s;
    };

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                const double alpha = column_dot(p, p).real();
                const double beta = column_dot(q, q).real();
                const Complex gamma = column_dot(p, q);
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) <= 1e-300) continue;
                rotated = true;
                const auto rot = Rotation::for_block(alpha, beta, gamma);
                rot.apply_right(w, p, q);
                rot.apply_right(v, p, q);
            }
        }
        if (!rotated) break;
    }

    std::vector<double> norms(k);
    for (std::size_t c = 0; c < k; ++c) norms[c] = std::sqrt(column_dot(c, c).real());
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

    SvdResult out{ComplexMatrix(rows, k), std::vector<double>(k), ComplexMatrix(k, k)};
    const double cutoff = 1e-14 * (k > 0 ? norms[order.front()] : 0.0);
    std::vector<std::size_t> missing;
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t src = order[c];
        out.sigma[c] = norms[src];
        for (std::size_t r = 0; r < k; ++r) out.v(r, c) = v(r, src);
        if (norms[src] > cutoff && norms[src] > 0.0) {
            for (std::size_t r = 0; r < rows; ++r) out.u(r, c) = w(r, src) / norms[src];
        } else {
            missing.push_back(c);
        }
    }

    // Complete U for negligible singular values by Gram-Schmidt against the standard basis.
    std::size_t basis = 0;
    for (auto c : missing) {
        while (basis < rows) {
            std::vector<Complex> cand(rows);
            cand[basis++] = 1.0;
            for (std::size_t other = 0; other < k; ++other) {
                if (other == c) continue;
                if (std::find(missing.begin(), missing.end(), other) != missing.end() && other > c) continue;
                Complex dot = 0.0;
                for (std::size_t r = 0; r < rows; ++r) dot += std::conj(out.u(r, other)) * cand[r];
                for (std::size_t r = 0; r < rows; ++r) cand[r] -= dot * out.u(r, other);
            }
            double norm = 0.0;
            for (const auto& x : cand) norm += std::norm(x);
            norm = std::sqrt(norm);
            if (norm > 1e-8) {
                for (std::size_t r = 0; r < rows; ++r) out.u(r, c) = cand[r] / norm;
                break;
            }
        }
    }
    return out;
}

}  // namespace sepind
