#include <gtest/gtest.h>

#include <random>

#include <Eigen/SVD>
#include <sstream>

#include "irnn/bench.hpp"
#include "irnn/solver.hpp"

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

CompletionLoss full_loss(const Matrix &M) {
    return CompletionLoss(CompletionProblem(ObservationMask::full(M.rows(), M.cols()), M));
}

// Textbook singular value soft-thresholding, written without the library.
Matrix svt_reference(const Matrix &Y, double tau) {
    Eigen::JacobiSVD<Matrix> s(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vector d = (s.singularValues().array() - tau).max(0.0).matrix();
    return s.matrixU() * d.asDiagonal() * s.matrixV().transpose();
}

SolverConfig fixed(int iters) {
    SolverConfig cfg;
    cfg.max_iters = iters;
    return cfg;
}

} // namespace

TEST(Objective, WorkedExamples) {
    const Matrix M = Matrix::Zero(2, 2);
    const auto loss = full_loss(M);
    Matrix X = Matrix::Zero(2, 2);
    X(0, 0) = 4;
    EXPECT_DOUBLE_EQ(objective(loss, Penalty::lp(1, 0.5), X), 10);
    EXPECT_DOUBLE_EQ(objective(loss, Penalty::scad(1), Matrix::Zero(2, 2)), 0);

    std::mt19937_64 rng(1);
    const Matrix A = randn(3, 4, rng), B = randn(3, 4, rng);
    const auto lossA = full_loss(A);
    EXPECT_NEAR(objective(lossA, Penalty::nuclear(1), B),
                singular_values(B).sum() + 0.5 * (B - A).squaredNorm(), 1e-12);
}

TEST(IrnnStep, Examples) {
    std::mt19937_64 rng(2);
    const Matrix M = randn(4, 5, rng);
    const auto loss = full_loss(M);
    // Zero gradient and zero weights: fixed point.
    EXPECT_LT((irnn_step(loss, M, WeightVector::uniform(4, 0.0), 1.1) - M).norm(), 1e-12);
    // From 0 with μ = 1: SVT of M at λ.
    EXPECT_LT((irnn_step(loss, Matrix::Zero(4, 5), WeightVector::uniform(4, 0.8), 1.0) -
               svt_reference(M, 0.8)).norm(), 1e-10);
    EXPECT_EQ(irnn_step(loss, M, WeightVector::uniform(4, ExtendedWeight::infinity()), 1.1).norm(), 0);
}

TEST(Solve, RejectsSmallMu) {
    const auto loss = full_loss(Matrix::Ones(3, 3));
    SolverConfig cfg;
    cfg.mu = 1.0;
    EXPECT_THROW(solve(loss, Penalty::lp(1), cfg), ConfigurationError);
    cfg.mu = 1.1;
    cfg.continuation = Continuation{1, 0.7, 2, 10, 0};
    EXPECT_THROW(solve(loss, Penalty::lp(1), cfg), ConfigurationError);
}

TEST(Solve, LargeLambdaGivesZero) {
    std::mt19937_64 rng(3);
    const Matrix M = randn(5, 5, rng);
    const double s1 = singular_values(M)(0);
    const auto rep = solve(full_loss(M), Penalty::nuclear(1.5 * s1), fixed(200));
    EXPECT_EQ(rep.final_X.norm(), 0);
}

TEST(Solve, ConvexEquivalenceWithProximalGradient) {
    std::mt19937_64 rng(4);
    const Matrix M = randn(6, 5, rng);
    ObservationMask mask(6, 5, {{0, 0}, {1, 2}, {2, 1}, {3, 3}, {4, 4}, {5, 0}, {0, 3}, {2, 4}, {5, 2}});
    const CompletionProblem prob(mask, M);
    const CompletionLoss loss(prob);
    const double lambda = 0.3, mu = 1.1;
    std::vector<Matrix> iterates;
    SolverConfig cfg = fixed(30);
    cfg.mu = mu;
    cfg.on_iterate = [&](int, const Matrix &X) { iterates.push_back(X); };
    solve(loss, Penalty::nuclear(lambda), cfg);
    Matrix X = Matrix::Zero(6, 5);
    for (const Matrix &got : iterates) {
        const Matrix grad = mask.project(X - M);
        X = svt_reference(X - grad / mu, lambda / mu);
        EXPECT_LT((got - X).norm(), 1e-10);
    }
}

TEST(Solve, FixedLambdaDescentRankAndStationarity) {
    std::mt19937_64 rng(5);
    const Matrix M = gen_lowrank(25, 25, 3, 17);
    const CompletionProblem prob(sample_mask(25, 25, 0.6, 18), M);
    const CompletionLoss loss(prob);
    for (PenaltyKind k : nonconvex_kinds()) {
        Penalty pen = benchmark_penalty(k).with_lambda(0.5);
        if (k == PenaltyKind::CappedL1)
            pen.gamma = 2;
        SolverConfig cfg = fixed(400);
        cfg.stop_step = 1e-9;
        const auto rep = solve(loss, pen, cfg);
        ASSERT_EQ(rep.objective_trace.size(), static_cast<std::size_t>(rep.iterations));
        for (std::size_t i = 1; i < rep.objective_trace.size(); ++i)
            EXPECT_LE(rep.objective_trace[i], rep.objective_trace[i - 1] + 1e-10) << to_string(k);
        if (k == PenaltyKind::Lp)
            for (std::size_t i = 1; i < rep.rank_trace.size(); ++i)
                EXPECT_LE(rep.rank_trace[i], rep.rank_trace[i - 1]);
        const double bound = 10 * M.norm();
        EXPECT_LE(rep.final_X.norm(), bound);
        // One more step with the final weights barely moves.
        const auto w = weights_from_singular_values(
            pen, std::span<const double>(rep.final_sigma.data(), rep.final_sigma.size()));
        if (rep.termination == Termination::Step)
            EXPECT_LT((irnn_step(loss, rep.final_X, w, cfg.mu) - rep.final_X).norm(), 1e-8)
                << to_string(k);
    }
}

TEST(Solve, StationaryStartStopsImmediately) {
    std::mt19937_64 rng(6);
    const Matrix M = randn(4, 4, rng);
    SolverConfig cfg = fixed(50);
    cfg.stop_step = 1e-12;
    cfg.initial_weights = WeightVector::uniform(4, 0.0);
    const auto rep = solve(full_loss(M), Penalty::nuclear(1e-9), cfg, M);
    EXPECT_LE(rep.iterations, 2);
    EXPECT_EQ(rep.termination, Termination::Step);
}

TEST(Solve, NoiseFreeRecoveryWithPaperSchedule) {
    const Matrix M = gen_lowrank(30, 30, 3, 101);
    const CompletionProblem prob(sample_mask(30, 30, 0.6, 102), M);
    const auto rep = solve(CompletionLoss(prob), Penalty::lp(1, 0.5), noise_free_config(prob));
    EXPECT_LT(relative_error(rep.final_X, M), 1e-3);
}

TEST(Solve, ContinuationScheduleIsGeometricAndFloored) {
    Continuation c{8, 0.5, 1, 1, 0};
    EXPECT_EQ(c.at(0), 8);
    EXPECT_EQ(c.at(2), 2);
    EXPECT_EQ(c.at(10), 1);
    LambdaSchedule s(c, 0);
    std::vector<double> seen;
    for (int i = 0; i < 5; ++i) {
        seen.push_back(s.current());
        s.advance(1, 1);
    }
    EXPECT_EQ(seen, (std::vector<double>{8, 4, 2, 1, 1}));
    EXPECT_TRUE(s.at_target());
}

TEST(Solve, WeightsUseCurrentLambda) {
    const Matrix M = gen_lowrank(12, 12, 2, 5);
    const CompletionProblem prob(sample_mask(12, 12, 0.7, 6), M);
    SolverConfig cfg;
    cfg.max_iters = 12;
    cfg.continuation = Continuation{2, 0.5, 0.1, 1, 0};
    const auto rep = solve(CompletionLoss(prob), Penalty::lp(1), cfg);
    for (std::size_t k = 0; k < rep.lambda_trace.size(); ++k)
        EXPECT_DOUBLE_EQ(rep.lambda_trace[k], std::max(2 * std::pow(0.5, double(k)), 0.1));
}

TEST(SolveTruncated, Cases) {
    std::mt19937_64 rng(7);
    const Matrix M = randn(5, 5, rng);
    const auto loss = full_loss(M);
    // r = min(m, n): no penalty, plain gradient steps towards M.
    auto rep = solve_truncated(loss, 5, fixed(300));
    EXPECT_LT((rep.final_X - M).norm(), 1e-8);

    // r = 0 coincides with the nuclear norm at λ = 1.
    const auto a = solve_truncated(loss, 0, fixed(20));
    const auto b = solve(loss, Penalty::nuclear(1), fixed(20));
    for (std::size_t k = 0; k < a.objective_trace.size(); ++k)
        EXPECT_NEAR(a.objective_trace[k], b.objective_trace[k], 1e-12);

    const Matrix L = gen_lowrank(20, 20, 2, 8);
    const CompletionProblem prob(sample_mask(20, 20, 0.7, 9), L);
    SolverConfig cfg = fixed(3000);
    cfg.stop_step = 1e-10;
    const auto t = solve_truncated(CompletionLoss(prob), 2, cfg, std::nullopt, 0.05);
    EXPECT_LT(relative_error(t.final_X, L), 1e-3);
}

TEST(SolveReport, CsvHeader) {
    const auto rep = solve(full_loss(Matrix::Ones(2, 2)), Penalty::lp(0.1), fixed(2));
    std::ostringstream os;
    write_report_csv(os, rep);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "iter,lambda,objective,rank,step");
}
