#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "sepind/hermitian_core.hpp"
#include "sepind/random.hpp"
#include "test_support.hpp"

using namespace sepind;

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
    return m;
}

}  // namespace

TEST(ComplexMatrix, UnitMatrixIsOneBased) {
    const auto e = ComplexMatrix::unit(3, 1, 3);
    EXPECT_EQ(e(0, 2), Complex(1.0, 0.0));
    EXPECT_EQ(e.max_abs(), 1.0);
    EXPECT_THROW(ComplexMatrix::unit(3, 0, 1), DimensionError);
    EXPECT_THROW(ComplexMatrix::unit(3, 1, 4), DimensionError);
}

TEST(ComplexMatrix, ProductAndAdjoint) {
    Rng rng(11);
    const auto a = random_matrix(3, 4, rng);
    const auto b = random_matrix(4, 2, rng);
    const Eigen::MatrixXcd expected = to_eigen(a) * to_eigen(b);
    const auto got = a * b;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(got(i, j) - expected(i, j)), 0.0, 1e-13);
    EXPECT_EQ((a * b).adjoint(), b.adjoint() * a.adjoint());
    EXPECT_THROW(a * a, DimensionError);
}

TEST(HermitianOperator, RejectsNonHermitianAndNonSquare) {
    EXPECT_THROW(HermitianOperator(ComplexMatrix{{1.0, 2.0}, {0.0, 1.0}}), HermiticityError);
    EXPECT_THROW(HermitianOperator(ComplexMatrix{{Complex(0.0, 1.0)}}), HermiticityError);
    EXPECT_THROW(HermitianOperator(ComplexMatrix(2, 3)), DimensionError);
    EXPECT_NO_THROW(HermitianOperator(ComplexMatrix{{1.0, Complex(0.0, 2.0)}, {Complex(0.0, -2.0), 1.0}}));
}

TEST(HermitianOperator, ShiftAndScale) {
    const auto z = fixtures::pauli_z();
    EXPECT_EQ(z.shifted(-1.0).matrix(), (ComplexMatrix{{2.0, 0.0}, {0.0, 0.0}}));
    EXPECT_EQ(z.scaled(-2.0).matrix(), (ComplexMatrix{{-2.0, 0.0}, {0.0, 2.0}}));
}

TEST(Kron, MatchesEigenKroneckerByHand) {
    Rng rng(3);
    const auto a = random_matrix(2, 3, rng);
    const auto b = random_matrix(3, 2, rng);
    const auto k = kron(a, b);
    ASSERT_EQ(k.rows(), 6u);
    ASSERT_EQ(k.cols(), 6u);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(k(i, j), a(i / 3, j / 2) * b(i % 3, j % 2));
}

TEST(Kron, KronAllIsLeftAssociative) {
    Rng rng(5);
    std::vector<HermitianOperator> fs = {random_hermitian(2, rng), random_hermitian(3, rng), random_hermitian(2, rng)};
    const auto all = kron_all(fs);
    const auto manual = kron(kron(fs[0], fs[1]), fs[2]);
    EXPECT_EQ(all.matrix(), manual.matrix());
}

class EighOracle : public ::testing::TestWithParam<std::size_t> {};

TEST_P(EighOracle, EigenvaluesMatchEigen) {
    const std::size_t n = GetParam();
    Rng rng(100 + n);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_hermitian(n, rng);
        const auto spec = eigh(a, true);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(a.matrix()));
        const double scale = a.matrix().max_abs();
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(spec.eigenvalues[i], es.eigenvalues()(i), 1e-12 * scale * n);
        EXPECT_TRUE(std::is_sorted(spec.eigenvalues.begin(), spec.eigenvalues.end()));

        // A V = V diag(lambda), V unitary.
        const ComplexMatrix& v = *spec.eigenvectors;
        const auto av = a.matrix() * v;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                EXPECT_NEAR(std::abs(av(i, j) - v(i, j) * spec.eigenvalues[j]), 0.0, 1e-11 * scale * n);
        EXPECT_LE(max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(n)), 1e-12 * n);
    }
}

INSTANTIATE_TEST_SUITE_P(Sizes, EighOracle, ::testing::Values(1u, 2u, 3u, 4u, 6u, 8u, 12u, 16u));

TEST(Eigh, DegenerateAndDiagonal) {
    const auto id = HermitianOperator::identity(5).scaled(0.25);
    const auto spec = eigh(id, false);
    for (double x : spec.eigenvalues) EXPECT_DOUBLE_EQ(x, 0.25);
    const auto ext = eig_extremes(fixtures::pauli_z());
    EXPECT_DOUBLE_EQ(ext.min, -1.0);
    EXPECT_DOUBLE_EQ(ext.max, 1.0);
    EXPECT_DOUBLE_EQ(ext.spread(), 2.0);
}

TEST(ScaleExtremes, MatchesEigensolveOfScaledOperator) {
    Rng rng(8);
    for (double s : {-2.5, -1.0, 0.0, 0.3, 4.0}) {
        const auto p = random_hermitian(4, rng);
        const auto direct = eig_extremes(p.scaled(s));
        const auto fast = scale_extremes(s, eig_extremes(p));
        EXPECT_NEAR(direct.min, fast.min, 1e-12);
        EXPECT_NEAR(direct.max, fast.max, 1e-12);
    }
}

TEST(IsPsd, ClassifiesSigns) {
    Rng rng(9);
    EXPECT_TRUE(is_psd(fixtures::random_psd(4, rng)));
    EXPECT_FALSE(is_psd(fixtures::pauli_z()));
    EXPECT_TRUE(is_psd(HermitianOperator::zero(3)));
}

TEST(Vec, ColumnStackingAndInverse) {
    const ComplexMatrix t{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
    const auto v = vec(t);
    const std::vector<Complex> expected = {1.0, 4.0, 2.0, 5.0, 3.0, 6.0};
    EXPECT_EQ(v, expected);
    EXPECT_EQ(unvec(v, 2, 3), t);
}

TEST(Realign, RowsAreVecOfBlocksInColumnMajorBlockOrder) {
    // 2 x 2 blocks of size 2; entry value encodes (row, col).
    ComplexMatrix z(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) z(i, j) = Complex(10.0 * i + j, 0.0);
    const auto r = realign(z, 2, 2);
    ASSERT_EQ(r.rows(), 4u);
    ASSERT_EQ(r.cols(), 4u);
    // Row order Z11, Z21, Z12, Z22.
    const std::size_t block_row[] = {0, 1, 0, 1};
    const std::size_t block_col[] = {0, 0, 1, 1};
    for (std::size_t row = 0; row < 4; ++row) {
        ComplexMatrix block(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) block(i, j) = z(2 * block_row[row] + i, 2 * block_col[row] + j);
        const auto v = vec(block);
        for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(r(row, c), v[c]);
    }
}

TEST(Realign, KronProductBecomesRankOne) {
    Rng rng(12);
    const auto b = random_hermitian(3, rng);
    const auto c = random_hermitian(2, rng);
    const auto r = realign(kron(b.matrix(), c.matrix()), 3, 2);
    const auto s = svd(r);
    EXPECT_GT(s.sigma[0], 1e-3);
    for (std::size_t i = 1; i < s.sigma.size(); ++i) EXPECT_LT(s.sigma[i], 1e-12 * s.sigma[0]);
}

TEST(SigmaEmbed, BlockLayout) {
    const ComplexMatrix a{{1.0, Complex(2.0, 3.0)}, {Complex(2.0, -3.0), 4.0}};
    const auto s = sigma_embed(a);
    const ComplexMatrix expected{{1.0, 2.0, 0.0, 3.0}, {2.0, 4.0, -3.0, 0.0}, {0.0, -3.0, 1.0, 2.0}, {3.0, 0.0, 2.0, 4.0}};
    EXPECT_EQ(s, expected);
}

TEST(Selectors, TwoByTwoFixtures) {
    const ComplexMatrix qs_expected{{0.0}, {1.0}, {-1.0}, {0.0}};
    const ComplexMatrix qa_expected{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    EXPECT_EQ(build_Qs(2), qs_expected);
    EXPECT_EQ(build_Qa(2), qa_expected);
}

TEST(Selectors, ColumnsAndShapes) {
    for (std::size_t m = 1; m <= 5; ++m) {
        const auto qs = build_Qs(m);
        const auto qa = build_Qa(m);
        EXPECT_EQ(qs.rows(), m * m);
        EXPECT_EQ(qs.cols(), m * (m - 1) / 2);
        EXPECT_EQ(qa.cols(), m * (m + 1) / 2);
        // Qs columns span antisymmetric vecs, Qa symmetric: together orthogonal.
        if (qs.cols() > 0) {
            EXPECT_EQ((qs.adjoint() * qa).max_abs(), 0.0);
        }
    }
    // Third column of Qs(3) pairs rows 32 and 23 (0-based vec index 5 and 7).
    const auto qs3 = build_Qs(3);
    EXPECT_EQ(qs3(5, 2), Complex(1.0, 0.0));
    EXPECT_EQ(qs3(7, 2), Complex(-1.0, 0.0));
}

TEST(Selectors, Q1IsOrthogonal) {
    for (std::size_t m = 2; m <= 6; ++m) {
        const auto q = build_Q1(m);
        ASSERT_EQ(q.rows(), 2 * m * m);
        ASSERT_EQ(q.cols(), 2 * m * m);
        EXPECT_LE(max_abs_diff(q.transpose() * q, ComplexMatrix::identity(2 * m * m)), 1e-14) << "m=" << m;
    }
}

class SvdOracle : public ::testing::TestWithParam<std::pair<std::size_t, std::size_t>> {};

TEST_P(SvdOracle, SingularValuesMatchEigenAndFactorsReconstruct) {
    const auto [rows, cols] = GetParam();
    Rng rng(rows * 31 + cols);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = random_matrix(rows, cols, rng);
        const auto s = svd(m);
        Eigen::JacobiSVD<Eigen::MatrixXcd> es(to_eigen(m));
        const std::size_t k = std::min(rows, cols);
        ASSERT_EQ(s.sigma.size(), k);
        for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(s.sigma[i], es.singularValues()(i), 1e-12 * es.singularValues()(0));

        ComplexMatrix us = s.u;
        for (std::size_t i = 0; i < us.rows(); ++i)
            for (std::size_t j = 0; j < k; ++j) us(i, j) *= s.sigma[j];
        EXPECT_LE(max_abs_diff(us * s.v.adjoint(), m), 1e-12 * s.sigma[0]);
        EXPECT_LE(max_abs_diff(s.u.adjoint() * s.u, ComplexMatrix::identity(k)), 1e-12);
        EXPECT_LE(max_abs_diff(s.v.adjoint() * s.v, ComplexMatrix::identity(k)), 1e-12);
    }
}

INSTANTIATE_TEST_SUITE_P(Shapes, SvdOracle,
                         ::testing::Values(std::pair<std::size_t, std::size_t>{1, 1}, std::pair<std::size_t, std::size_t>{3, 3},
                                           std::pair<std::size_t, std::size_t>{4, 2}, std::pair<std::size_t, std::size_t>{2, 5},
                                           std::pair<std::size_t, std::size_t>{9, 9}, std::pair<std::size_t, std::size_t>{16, 4}));

TEST(Svd, RankDeficientKeepsOrthonormalU) {
    // rank 1, 4 x 3
    const ComplexMatrix x{{1.0}, {2.0}, {0.0}, {Complex(0.0, 1.0)}};
    const ComplexMatrix y{{1.0, -1.0, 2.0}};
    const auto s = svd(x * y);
    EXPECT_NEAR(s.sigma[1], 0.0, 1e-14);
    EXPECT_NEAR(s.sigma[2], 0.0, 1e-14);
    EXPECT_LE(max_abs_diff(s.u.adjoint() * s.u, ComplexMatrix::identity(3)), 1e-12);
}

TEST(Rng, DeterministicAndSplittable) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
    Rng c(42);
    EXPECT_NE(c.split(1).next_u64(), c.split(2).next_u64());
    Rng d(7);
    double mean = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = d.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        mean += u;
    }
    EXPECT_NEAR(mean / 20000.0, 0.5, 0.01);
}
