#include <gtest/gtest.h>

#include <sstream>

#include "irnn/bench.hpp"
#include "irnn/wsvt.hpp"

using namespace irnn;

TEST(GenLowrank, RankAndDeterminism) {
    EXPECT_EQ(gen_lowrank(4, 5, 0, 1).norm(), 0);
    EXPECT_EQ(gen_lowrank(30, 20, 4, 9), gen_lowrank(30, 20, 4, 9));
    EXPECT_NE(gen_lowrank(30, 20, 4, 9), gen_lowrank(30, 20, 4, 10));
    const Vector s = singular_values(gen_lowrank(150, 150, 20, 3));
    EXPECT_GT(s(19) / s(0), 1e-10);
    EXPECT_LT(s(20) / s(0), 1e-10);
    EXPECT_THROW(gen_lowrank(4, 5, 5, 1), PreconditionError);
    EXPECT_THROW(gen_lowrank(4, 5, -1, 1), PreconditionError);
}

TEST(SampleMask, CountsAndDeterminism) {
    EXPECT_EQ(sample_mask(150, 150, 0.5, 1).size(), 11250u);
    EXPECT_EQ(sample_mask(7, 9, 1.0, 1).size(), 63u);
    EXPECT_EQ(sample_mask(40, 30, 0.3, 5).coordinates(), sample_mask(40, 30, 0.3, 5).coordinates());
    EXPECT_NE(sample_mask(40, 30, 0.3, 5).coordinates(), sample_mask(40, 30, 0.3, 6).coordinates());
    EXPECT_THROW(sample_mask(10, 10, 0.0, 1), PreconditionError);
    EXPECT_THROW(sample_mask(10, 10, 0.001, 1), PreconditionError);
}

TEST(AddNoise, VarianceAndZero) {
    std::vector<double> v(100000, 1.0);
    EXPECT_EQ(add_noise(v, 0, 3), v);
    const auto n = add_noise(v, 0.1, 3);
    double mean = 0, var = 0;
    for (double x : n)
        mean += x - 1;
    mean /= double(n.size());
    for (double x : n)
        var += (x - 1 - mean) * (x - 1 - mean);
    var /= double(n.size() - 1);
    EXPECT_NEAR(var, 0.01, 0.05 * 0.01);
    EXPECT_THROW(add_noise(v, -1, 1), PreconditionError);
}

TEST(RelativeError, Examples) {
    const Matrix M = gen_lowrank(5, 5, 2, 1);
    EXPECT_EQ(relative_error(M, M), 0);
    EXPECT_DOUBLE_EQ(relative_error(Matrix::Zero(5, 5), M), 1);
    EXPECT_DOUBLE_EQ(relative_error(2 * M, M), 1);
    EXPECT_THROW(relative_error(M, Matrix::Zero(5, 5)), DomainError);
}

TEST(Experiment, ZeroRankIsTrivialSuccess) {
    ExperimentSpec spec;
    spec.m = spec.n = 10;
    spec.ranks = {0};
    spec.trials = 1;
    spec.methods = {MethodSpec::irnn(benchmark_penalty(PenaltyKind::Lp)), MethodSpec::convex_baseline()};
    const auto res = run_experiment(spec);
    EXPECT_EQ(res.aggregate("irnn-lp", 0).success_frequency, 1);
    EXPECT_EQ(res.aggregate("convex", 0).success_frequency, 1);
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
    ExperimentSpec spec;
    spec.m = spec.n = 20;
    spec.ranks = {2, 3};
    spec.trials = 3;
    spec.seed = 42;
    spec.methods = {MethodSpec::parse("lp"), MethodSpec::parse("convex")};
    spec.threads = 1;
    const auto a = run_experiment(spec);
    spec.threads = 3;
    const auto b = run_experiment(spec);
    std::ostringstream sa, sb, aa, ab;
    write_trials_csv(sa, a);
    write_trials_csv(sb, b);
    write_aggregate_csv(aa, a);
    write_aggregate_csv(ab, b);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(aa.str(), ab.str());
    EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')),
              "method,rank,trial,rel_error,success,iters,seconds");
    EXPECT_EQ(aa.str().substr(0, aa.str().find('\n')),
              "method,rank,trials,success_freq,mean_rel_error");
    for (const auto &t : a.trials)
        EXPECT_EQ(t.success, t.rel_error < spec.success_threshold);
}

TEST(Experiment, DeskScaleRankThreeRecovered) {
    ExperimentSpec spec;
    spec.ranks = {3};
    spec.trials = 5;
    spec.seed = 1;
    spec.methods = {MethodSpec::parse("lp")};
    EXPECT_EQ(run_experiment(spec).aggregate("irnn-lp", 3).success_frequency, 1.0);
}

TEST(Experiment, SpecValidation) {
    ExperimentSpec spec;
    spec.methods = {MethodSpec::parse("lp")};
    spec.ranks = {61};
    EXPECT_THROW(spec.validate(), PreconditionError);
    spec.ranks = {3};
    spec.trials = 0;
    EXPECT_THROW(spec.validate(), PreconditionError);
}

TEST(MethodSpec, Parse) {
    EXPECT_TRUE(MethodSpec::parse("convex").convex);
    const auto lp = MethodSpec::parse("lp");
    EXPECT_EQ(lp.label, "irnn-lp");
    EXPECT_EQ(lp.penalty.p, 0.1);
    EXPECT_EQ(MethodSpec::parse("mcp").penalty.kind, PenaltyKind::MCP);
    EXPECT_THROW(MethodSpec::parse("nope"), ParameterError);
}
