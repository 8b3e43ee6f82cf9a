#include <gtest/gtest.h>

#include <random>

#include "irnn/wsvt.hpp"

using namespace irnn;

namespace {

Matrix randn(Index m, Index n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Matrix A(m, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i)
            A(i, j) = g(rng);
    return A;
}

Matrix diag2(double a, double b) {
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = a;
    D(1, 1) = b;
    return D;
}

WeightVector wv(std::initializer_list<ExtendedWeight> w) {
    return WeightVector(std::vector<ExtendedWeight>(w));
}

} // namespace

TEST(Svd, Diagonal) {
    const auto d = svd(diag2(3, 1));
    EXPECT_DOUBLE_EQ(d.sigma(0), 3);
    EXPECT_DOUBLE_EQ(d.sigma(1), 1);
    EXPECT_NEAR((d.U.cwiseAbs() - Matrix::Identity(2, 2)).norm(), 0, 1e-14);
    EXPECT_NEAR((d.V.cwiseAbs() - Matrix::Identity(2, 2)).norm(), 0, 1e-14);
}

TEST(Svd, ZeroMatrix) {
    const auto d = svd(Matrix::Zero(3, 4));
    EXPECT_EQ(d.sigma.size(), 3);
    EXPECT_EQ(d.sigma.norm(), 0.0);
    EXPECT_EQ(numerical_rank(d.sigma), 0);
}

TEST(Svd, RandomReconstructionBothOrientations) {
    std::mt19937_64 rng(1);
    for (auto [m, n] : {std::pair<Index, Index>{5, 7}, {7, 5}, {1, 4}, {6, 6}}) {
        const Matrix Y = randn(m, n, rng);
        const auto d = svd(Y);
        const Index s = std::min(m, n);
        ASSERT_EQ(d.U.cols(), s);
        ASSERT_EQ(d.V.cols(), s);
        EXPECT_LT((d.reconstruct() - Y).norm(), 1e-10 * Y.norm());
        EXPECT_LT((d.U.transpose() * d.U - Matrix::Identity(s, s)).norm(), 1e-8);
        EXPECT_LT((d.V.transpose() * d.V - Matrix::Identity(s, s)).norm(), 1e-8);
        for (Index i = 1; i < s; ++i)
            EXPECT_GE(d.sigma(i - 1), d.sigma(i));
        EXPECT_LT((singular_values(Y) - d.sigma).norm(), 1e-10 * Y.norm());
    }
}

TEST(Svd, RejectsNonFinite) {
    Matrix Y = Matrix::Ones(2, 2);
    Y(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(svd(Y), DomainError);
}

TEST(Wsvt, WorkedExamples) {
    EXPECT_LT((wsvt_apply(diag2(3, 1), wv({0, 0})) - diag2(3, 1)).norm(), 1e-14);
    EXPECT_LT((wsvt_apply(diag2(3, 1), wv({1, 1})) - diag2(2, 0)).norm(), 1e-14);
    EXPECT_LT((wsvt_apply(diag2(3, 1), wv({0.5, 2})) - diag2(2.5, 0)).norm(), 1e-14);
    const auto inf = ExtendedWeight::infinity();
    EXPECT_EQ(wsvt_apply(diag2(3, 1), wv({inf, inf})).norm(), 0.0);
}

TEST(Wsvt, Errors) {
    EXPECT_THROW(wsvt_apply(diag2(3, 1), wv({1})), PreconditionError);
    EXPECT_THROW(wsvt_apply(diag2(3, 1), wv({2, 1})), PreconditionError);
    EXPECT_THROW(wsvt_apply(diag2(3, 1), wv({-1, 1})), PreconditionError);
}

TEST(Wsvt, InfiniteWeightsGiveExactZeros) {
    std::mt19937_64 rng(3);
    const Matrix Y = randn(6, 4, rng);
    const auto d = wsvt_decompose(Y, wv({0.1, 0.2, ExtendedWeight::infinity(),
                                         ExtendedWeight::infinity()}));
    EXPECT_EQ(d.sigma(2), 0.0);
    EXPECT_EQ(d.sigma(3), 0.0);
    EXPECT_EQ(numerical_rank(d.sigma), 2);
    EXPECT_EQ(numerical_rank(singular_values(d.reconstruct()), 1e-12), 2);
}

TEST(Wsvt, WeightedNuclearNorm) {
    EXPECT_DOUBLE_EQ(weighted_nuclear_norm(diag2(2, 1), wv({1, 3})), 5);
    EXPECT_DOUBLE_EQ(weighted_nuclear_norm(diag2(2, 0), wv({1, ExtendedWeight::infinity()})), 2);
    EXPECT_EQ(weighted_nuclear_norm(Matrix(Matrix::Zero(2, 2)), wv({1, 7})), 0);
    EXPECT_TRUE(std::isinf(
        weighted_nuclear_norm(diag2(2, 1), wv({1, ExtendedWeight::infinity()}))));
}

TEST(WsvtProperty, UniformSvtIsNonexpansive) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
        const Matrix A = randn(5, 6, rng), B = A + 0.3 * randn(5, 6, rng);
        const auto w = WeightVector::uniform(5, 0.7);
        EXPECT_LE((wsvt_apply(A, w) - wsvt_apply(B, w)).norm(), (A - B).norm() + 1e-12);
    }
}
