#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "irnn/penalty.hpp"

using namespace irnn;

namespace {

std::vector<Penalty> all_kinds_sample() {
    std::vector<Penalty> out;
    for (PenaltyKind k : nonconvex_kinds())
        out.push_back(Penalty::make(k, 1.3));
    out.push_back(Penalty::capped_l1(2, 0.7));
    out.push_back(Penalty::lp(0.4, 0.2));
    out.push_back(Penalty::scad(0.5, 2.5));
    out.push_back(Penalty::nuclear(0.8));
    return out;
}

} // namespace

TEST(Penalty, WorkedValues) {
    EXPECT_DOUBLE_EQ(value(Penalty::lp(1, 0.5), 4), 2.0);
    EXPECT_DOUBLE_EQ(value(Penalty::scad(1, 3.7), 10), 2.35);
    EXPECT_DOUBLE_EQ(value(Penalty::capped_l1(2, 3), 5), 6.0);
    EXPECT_DOUBLE_EQ(supergradient(Penalty::lp(1, 0.5), 4).value(), 0.25);
    EXPECT_TRUE(supergradient(Penalty::lp(1, 0.5), 0).is_infinite());
    EXPECT_EQ(supergradient(Penalty::mcp(1, 2), 3).value(), 0.0);
    EXPECT_EQ(supergradient(Penalty::capped_l1(2, 3), 3).value(), 0.0);
}

TEST(Penalty, ClosedFormsAtInteriorPoints) {
    // Reference formulas written out independently of the implementation.
    const double t = 0.8, l = 1.3;
    EXPECT_NEAR(value(Penalty::logarithm(l, 10), t), l / std::log(11) * std::log(10 * t + 1), 1e-14);
    EXPECT_NEAR(value(Penalty::mcp(l, 1.5), t), l * t - t * t / 3, 1e-14);
    EXPECT_NEAR(value(Penalty::etp(l, 2), t), l * (1 - std::exp(-2 * t)) / (1 - std::exp(-2)), 1e-14);
    EXPECT_NEAR(value(Penalty::geman(l, 1), t), l * t / (t + 1), 1e-14);
    EXPECT_NEAR(value(Penalty::laplace(l, 1), t), l * (1 - std::exp(-t)), 1e-14);
    EXPECT_NEAR(value(Penalty::scad(1, 3.7), 2), (-4 + 2 * 3.7 * 2 - 1) / (2 * 2.7), 1e-14);
    EXPECT_NEAR(supergradient(Penalty::geman(l, 1), t).value(), l / ((t + 1) * (t + 1)), 1e-14);
    EXPECT_NEAR(supergradient(Penalty::scad(1, 3.7), 2).value(), (3.7 - 2) / 2.7, 1e-14);
}

TEST(Penalty, ZeroAnchoredAndNonnegative) {
    for (const auto &pen : all_kinds_sample()) {
        EXPECT_EQ(value(pen, 0), 0.0) << to_string(pen.kind);
        for (double t = 0; t <= 100; t += 0.25)
            EXPECT_GE(value(pen, t), 0.0);
    }
}

TEST(Penalty, Errors) {
    EXPECT_THROW(value(Penalty::lp(1, 0.5), -1), DomainError);
    EXPECT_THROW(supergradient(Penalty::mcp(1, 1.5), -0.1), DomainError);
    EXPECT_THROW(Penalty::scad(1, 1).validate(), ParameterError);
    EXPECT_THROW(Penalty::lp(1, 1).validate(), ParameterError);
    EXPECT_THROW(Penalty::lp(0, 0.5).validate(), ParameterError);
    EXPECT_THROW(Penalty::mcp(1, 0).validate(), ParameterError);
    EXPECT_THROW(parse_penalty_kind("l1"), ParameterError);
}

TEST(Penalty, NamesRoundTrip) {
    for (PenaltyKind k : nonconvex_kinds())
        EXPECT_EQ(parse_penalty_kind(to_string(k)), k);
    EXPECT_EQ(parse_penalty_kind("log"), PenaltyKind::Logarithm);
    EXPECT_EQ(parse_penalty_kind("tnn"), PenaltyKind::TruncatedNuclear);
    EXPECT_EQ(nonconvex_kinds().size(), 8u);
}

TEST(Penalty, WeightsFromSingularValues) {
    const auto w = weights_from_singular_values(Penalty::lp(1, 0.5), std::vector<double>{3, 2, 1});
    EXPECT_NEAR(w[0].value(), 0.5 / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(w[1].value(), 0.5 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(w[2].value(), 0.5, 1e-12);

    for (const auto &pen : all_kinds_sample()) {
        const auto eq = weights_from_singular_values(pen, std::vector<double>{5, 5});
        EXPECT_EQ(eq[0], eq[1]);
    }
    const auto t = weights_from_singular_values(Penalty::truncated(2),
                                                std::vector<double>{4, 2, 0.5, 0});
    EXPECT_EQ(t[0].value(), 0);
    EXPECT_EQ(t[1].value(), 0);
    EXPECT_EQ(t[2].value(), 1);
    EXPECT_EQ(t[3].value(), 1);

    EXPECT_THROW(weights_from_singular_values(Penalty::lp(1), std::vector<double>{1, 2}),
                 PreconditionError);
    EXPECT_THROW(weights_from_singular_values(Penalty::lp(1), std::vector<double>{1, -1}),
                 DomainError);
}

TEST(Penalty, TruncatedIndexAware) {
    const auto pen = Penalty::truncated(2, 1.5);
    EXPECT_EQ(value_at_index(pen, 0, 3), 0.0);
    EXPECT_EQ(value_at_index(pen, 1, 3), 0.0);
    EXPECT_DOUBLE_EQ(value_at_index(pen, 2, 3), 4.5);
    EXPECT_DOUBLE_EQ(penalty_sum(pen, std::vector<double>{4, 3, 2, 1}), 4.5);
}

TEST(PenaltyProperty, SupergradientInequalityAndMonotonicity) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 20);
    for (const auto &pen : all_kinds_sample()) {
        for (int i = 0; i < 2000; ++i) {
            const double x = u(rng), y = u(rng);
            const auto gx = supergradient(pen, x), gy = supergradient(pen, y);
            EXPECT_GE(value(pen, x) + gx.value() * (y - x), value(pen, y) - 1e-10);
            if (x <= y) {
                EXPECT_LE(value(pen, x), value(pen, y));
                EXPECT_GE(gx, gy);
            }
            EXPECT_GE(value(pen, (x + y) / 2), (value(pen, x) + value(pen, y)) / 2 - 1e-12);
        }
    }
}

TEST(PenaltyProperty, SupergradientMatchesFiniteDifferences) {
    const double h = 1e-6;
    for (const auto &pen : all_kinds_sample()) {
        for (double t : {0.05, 0.31, 0.9, 2.2, 7.7}) {
            // Skip kinks of the piecewise kinds.
            bool kink = false;
            for (double k : {pen.lambda, pen.gamma, pen.gamma * pen.lambda})
                kink = kink || std::abs(t - k) < 1e-3;
            if (kink)
                continue;
            const double fd = (value(pen, t + h) - value(pen, t - h)) / (2 * h);
            const double g = supergradient(pen, t).value();
            EXPECT_NEAR(g, fd, 1e-6 * std::max(1.0, std::abs(g))) << to_string(pen.kind) << " at " << t;
        }
    }
}

TEST(PenaltyProperty, WeightOrdering) {
    std::mt19937_64 rng(5);
    std::exponential_distribution<double> e(0.3);
    for (const auto &pen : all_kinds_sample()) {
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> sigma(9);
            for (auto &s : sigma)
                s = e(rng);
            sigma[8] = 0;
            std::sort(sigma.rbegin(), sigma.rend());
            const auto w = weights_from_singular_values(pen, sigma);
            EXPECT_TRUE(w.is_valid());
        }
    }
}

TEST(ExtendedWeight, Semantics) {
    const auto inf = ExtendedWeight::infinity();
    EXPECT_TRUE(inf > ExtendedWeight(1e300));
    EXPECT_EQ(inf.times(0), 0.0);
    EXPECT_EQ(inf.value(), std::numeric_limits<double>::infinity());
    EXPECT_TRUE(inf.scaled(0.5).is_infinite());
}
