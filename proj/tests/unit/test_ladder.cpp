#include "nlheat/error.hpp"
#include "nlheat/ladder.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nlheat;

namespace {

ProblemSpec zero_data(double p, double l, const char* c, const char* k, double T) {
    ProblemSpec s;
    s.p = p;
    s.l = l;
    s.c = parse_coefficient(c);
    s.k = parse_kernel(k);
    s.u0 = Profile::constant(0.0);
    s.T = T;
    return s;
}

LadderReport ladder(const ProblemSpec& s, int n = 100, double dt = 1e-3) {
    StepScheme scheme;
    scheme.store_stride = 10;
    return run_ladder(s, build_grid(n), time_grid_to(0.0, s.T, dt), LadderOptions{}, scheme);
}

}  // namespace

TEST(Ladder, EquilibriumRungsAreTrivial) {
    const auto r = ladder(zero_data(1, 1, "const(0)", "const(0)", 0.2), 20, 1e-2);
    ASSERT_EQ(r.eps.size(), 6u);
    for (std::size_t m = 0; m < r.eps.size(); ++m) {
        EXPECT_NEAR(r.final_sup_norms[m], r.eps[m], 1e-14);
        EXPECT_NEAR(r.min_values[m], r.eps[m], 1e-14);
    }
    EXPECT_NEAR(r.extrapolated_final_sup, 0.0, 1e-12);
    EXPECT_EQ(r.verdict, LadderVerdict::trivial);
    const auto o = ordering_check(r, 1e-6);
    EXPECT_TRUE(o.ordered);
    EXPECT_EQ(o.worst_violation, 0.0);
}

TEST(Ladder, NontrivialBelowCriticalBoundaryExponent) {
    EXPECT_EQ(ladder(zero_data(1, 0.5, "const(1)", "const(1)", 0.5)).verdict, LadderVerdict::nontrivial);
}

TEST(Ladder, TrivialWhenAbsorptionDominates) {
    EXPECT_EQ(ladder(zero_data(0.5, 0.75, "const(1)", "const(1)", 0.5)).verdict, LadderVerdict::trivial);
}

TEST(Ladder, SwappedRungsBreakOrdering) {
    auto r = ladder(zero_data(1, 1, "const(0)", "const(0)", 0.1), 10, 1e-2);
    std::swap(r.trajectories[1], r.trajectories[2]);
    const auto o = ordering_check(r, 1e-6);
    EXPECT_FALSE(o.ordered);
    EXPECT_GT(o.worst_violation, 1e-3);
    EXPECT_EQ(o.worst_rung, 1);
}

TEST(Ladder, OptionValidation) {
    LadderOptions o;
    o.rungs = 2;
    EXPECT_THROW(o.validate(), ConfigError);
    o = LadderOptions{};
    o.eps0 = 1.0;
    EXPECT_THROW(o.validate(), ConfigError);
}

TEST(Ladder, RungFailureIsWrapped) {
    auto s = zero_data(2, 2, "const(1)", "const(5)", 0.1);
    StepScheme tight;
    tight.fp_max = 1;
    tight.fp_tol = 1e-15;
    try {
        (void)run_ladder(s, build_grid(10), time_grid_to(0.0, 0.1, 0.01), LadderOptions{}, tight);
        FAIL();
    } catch (const LadderError& e) {
        EXPECT_EQ(e.rung(), 0);
        EXPECT_EQ(e.cause(), "nonconvergence");
    }
}

TEST(Aitken, GeometricSequence) {
    const std::vector<double> s{1.0 + 0.5, 1.0 + 0.25, 1.0 + 0.125};
    EXPECT_NEAR(aitken_limit(s), 1.0, 1e-14);
    const std::vector<double> z{0.4, 0.2, 0.1};
    EXPECT_NEAR(aitken_limit(z), 0.0, 1e-15);
    const std::vector<double> flat{1.0, 2.0, 4.0};
    EXPECT_EQ(aitken_limit(flat), 4.0);
}
