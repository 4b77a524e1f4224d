#include "nlheat/barriers.hpp"
#include "nlheat/error.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nlheat;

namespace {

ProblemSpec spec_with(double p, double l, const char* c, const char* k, const char* u0, double T) {
    ProblemSpec s;
    s.p = p;
    s.l = l;
    s.c = parse_coefficient(c);
    s.k = parse_kernel(k);
    s.u0 = parse_profile(u0);
    s.T = T;
    return s;
}

const auto grid = build_grid(100);

}  // namespace

TEST(ExpSuper, ZeroKernelAcceptsAnyB) {
    const auto s = spec_with(2, 1, "const(1)", "const(0)", "0.5", 1);
    const auto w = build_exp_super(s, grid, 1.0);
    const auto& p = std::get<ExpSuperParams>(w.params());
    EXPECT_GT(p.B, 0.0);
    const auto r = classify_candidate(w, s, grid, time_grid_to(0.0, p.horizon, 1e-2));
    EXPECT_GT(r.boundary_gap_0, 0.0);
    EXPECT_GT(r.boundary_gap_1, 0.0);
    EXPECT_TRUE(r.supersolution);
}

TEST(ExpSuper, LinearBoundaryBound) {
    // B >= 1 + B/12 gives B >= 12/11.
    const auto s = spec_with(2, 1, "const(1)", "const(1)", "0.5", 1);
    const auto w = build_exp_super(s, grid, 1.0);
    const auto& p = std::get<ExpSuperParams>(w.params());
    EXPECT_GE(p.B, 12.0 / 11.0);
    EXPECT_LE(p.B, 2.0);
    EXPECT_NEAR(p.horizon, std::min(1.0, 1.0 / (2 * p.B)), 1e-15);
    const auto r = classify_candidate(w, s, grid, time_grid_to(0.0, p.horizon, 1e-2));
    EXPECT_TRUE(r.supersolution);
    EXPECT_GT(r.margin, 0.0);
}

TEST(ExpSuper, RejectsSmallM) {
    const auto s = spec_with(2, 1, "const(1)", "const(1)", "2", 1);
    EXPECT_THROW((void)build_exp_super(s, grid, 1.0), ConfigError);
}

TEST(LayerSub, ConstraintsNameTheInequality) {
    const auto s = spec_with(1, 0.5, "const(1)", "const(1)", "0", 0.5);
    EXPECT_NO_THROW((void)build_layer_sub(s, {1, 3, 3, 1, 0, 0.05}));
    try {
        (void)build_layer_sub(s, {1, 2, 3, 1, 0, 0.05});
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("alpha"), std::string::npos);
    }
    EXPECT_THROW((void)build_layer_sub(s, {1, 3, 2, 1, 0, 0.05}), ConfigError);
    const auto q = spec_with(0.5, 0.25, "const(1)", "const(1)", "0", 0.5);
    EXPECT_NO_THROW((void)build_layer_sub(q, {1, 2, 3.9, 0.5, 0, 0.05}));
    EXPECT_THROW((void)build_layer_sub(q, {1, 2.1, 3, 0.5, 0, 0.05}), ConfigError);
    EXPECT_THROW((void)build_layer_sub(q, {1, 4.0 / 3.0, 3, 0.5, 0, 0.05}), ConfigError);
    EXPECT_THROW((void)build_layer_sub(q, {1, 2, 4, 0.5, 0, 0.05}), ConfigError);
    const auto wrong = spec_with(0.5, 0.75, "const(1)", "const(1)", "0", 0.5);
    EXPECT_THROW((void)build_layer_sub(wrong, {1, 3, 3, 1, 0, 0.05}), ConfigError);
}

TEST(LayerSub, VanishesAtStartAndOutsideLayer) {
    const auto s = spec_with(1, 0.5, "const(1)", "const(1)", "0", 0.5);
    const auto b = build_layer_sub(s, {1, 3, 3, 1, 0.1, 0.05});
    for (double x : {0.0, 0.2, 0.5}) EXPECT_EQ(b.value(x, 0.1), 0.0);
    EXPECT_GT(b.value(0.0, 0.12), 0.0);
    EXPECT_EQ(b.value(0.4, 0.12), 0.0);
}

TEST(LayerSub, ShrinkCertifies) {
    const auto s = spec_with(1, 0.5, "const(1)", "const(1)", "0", 0.5);
    const auto r = shrink_to_admissible(build_layer_sub(s, {1, 3, 3, 1, 0, 0.2}), s, grid,
                                        time_grid_to(0.0, 0.5, 1e-3));
    ASSERT_TRUE(r.certified);
    EXPECT_TRUE(r.report.subsolution);
    EXPECT_GT(r.report.sub_margin, 0.0);
}

TEST(LayerSub, ZeroKernelNeverCertifies) {
    const auto s = spec_with(1, 0.5, "const(1)", "const(0)", "0", 0.5);
    const auto r = shrink_to_admissible(build_layer_sub(s, {1, 3, 3, 1, 0, 0.2}), s, grid,
                                        time_grid_to(0.0, 0.5, 1e-3), {}, 1e-2);
    EXPECT_FALSE(r.certified);
    EXPECT_FALSE(r.trace.empty());
}

TEST(LayerSub, BoundaryRatioShrinksTowardStart) {
    const auto s = spec_with(1, 0.5, "const(1)", "const(1)", "0", 0.5);
    const auto r = shrink_to_admissible(build_layer_sub(s, {1, 3, 3, 1, 0, 0.2}), s, grid,
                                        time_grid_to(0.0, 0.5, 1e-3));
    ASSERT_TRUE(r.certified);
    double last = 0.0;
    int used = 0;
    for (const auto& p : r.report.boundary_trace) {
        if (!(p.integral > 0.0)) continue;
        const double ratio = p.flux / p.integral;
        EXPECT_GE(ratio, last * (1 - 1e-12)) << p.t;
        last = ratio;
        ++used;
    }
    EXPECT_GT(used, 3);
}

TEST(StrictSuper, GammaIntervalAndBoundaryTrace) {
    const auto s = spec_with(0.5, 0.75, "const(1)", "const(1)", "0", 0.5);
    EXPECT_NO_THROW((void)build_strict_super(s, {1, 0.2, 0.1, 0.01}));
    EXPECT_THROW((void)build_strict_super(s, {1, 0.125, 0.1, 0.01}), ConfigError);
    EXPECT_THROW((void)build_strict_super(s, {1, 0.25, 0.1, 0.01}), ConfigError);
    const auto b = build_strict_super(s, {2, 0.2, 0.1, 0.01});
    EXPECT_NEAR(b.value(0.0, 0.3), 0.1 * 2 * std::pow(0.01, 5.0), 1e-25);
    EXPECT_NEAR(b.value(1.0, 0.0), b.value(0.0, 0.0), 1e-25);
}

TEST(StrictSuper, SupScalesWithEps) {
    const auto s = spec_with(0.5, 0.75, "const(1)", "const(1)", "0", 0.5);
    const double a = build_strict_super(s, {1, 0.2, 0.1, 0.01}).sup_value();
    const double b = build_strict_super(s, {1, 0.2, 0.05, 0.01}).sup_value();
    EXPECT_NEAR(b / a, 0.5, 1e-12);
}

TEST(StrictSuper, ShrinkCertifiesStrict) {
    const auto s = spec_with(0.5, 0.75, "const(1)", "const(1)", "0", 0.5);
    const auto r = shrink_to_admissible(build_strict_super(s, {1, 0.2, 0.1, 0.5}), s, grid,
                                        time_grid_to(0.0, 0.5, 1e-3));
    ASSERT_TRUE(r.certified);
    EXPECT_TRUE(r.report.strict);
    EXPECT_EQ(r.report.verdict, Certification::strict_supersolution);
}

TEST(Extinction, SupportEmptiesAtXiOverMu) {
    const auto s = spec_with(0.5, 0.75, "const(1)", "const(1)", "0", 0.5);
    const auto b = build_extinction_barrier(s, {1, 0.2, 0.1, 0.5, 2.0});
    EXPECT_NEAR(b.t_end(), 0.25, 1e-15);
    for (double x : {0.0, 0.01, 0.5}) EXPECT_EQ(b.value(x, 0.25), 0.0);
    EXPECT_NEAR(b.value(0.0, 0.0), 0.1 * std::pow(0.5, 5.0), 1e-16);
    const auto strict = build_strict_super(s, {1, 0.2, 0.1, 0.5});
    const auto slow = build_extinction_barrier(s, {1, 0.2, 0.1, 0.5, 1e-12});
    for (double x : {0.0, 0.001, 0.003}) EXPECT_NEAR(slow.value(x, 0.1), strict.value(x, 0.1), 1e-14);
    EXPECT_THROW((void)build_extinction_barrier(s, {1, 0.2, 0.1, 0.5, 0.0}), ConfigError);
}

TEST(Extinction, DecayRateSearch) {
    const auto s = spec_with(0.5, 0.75, "const(1)", "const(1)", "0", 0.6);
    const double mu = search_decay_rate({0.003, 0.2, 0.1, 0.75, 0}, s, grid, 16.0);
    EXPECT_GT(mu, 0.0);
    EXPECT_LE(mu, 16.0);
    const auto b = build_extinction_barrier(s, {0.003, 0.2, 0.1, 0.75, mu});
    const auto r = classify_candidate(b, s, grid, make_time_grid(0.0, b.t_end() / 256, 256));
    EXPECT_TRUE(r.strict);
}

TEST(Classify, ZeroCandidateIsBothButNotStrict) {
    const auto s = spec_with(1, 0.5, "const(1)", "const(1)", "0", 0.5);
    const BarrierCandidate zero(LayerSubParams{0.0, 3, 3, 0.5, 0, 0.1});
    const auto r = classify_candidate(zero, s, grid, time_grid_to(0.0, 0.5, 1e-2));
    EXPECT_TRUE(r.subsolution);
    EXPECT_TRUE(r.supersolution);
    EXPECT_FALSE(r.strict);
    EXPECT_EQ(r.verdict, Certification::solution);
}

TEST(Family, NamesRoundTrip) {
    for (auto f : {BarrierFamily::exp_super, BarrierFamily::layer_sub, BarrierFamily::strict_super,
                   BarrierFamily::extinction}) {
        EXPECT_EQ(parse_family(family_name(f)), f);
    }
    EXPECT_THROW((void)parse_family("bogus"), ConfigError);
}

TEST(AmplitudeSearch, FindsAnInterval) {
    const auto s = spec_with(0.5, 0.5, "const(1)", "const(0.01)", "0", 0.5);
    const auto b = build_strict_super(s, {1, 0.25, 0.1, 0.5});
    const auto r = search_amplitude(b, s, grid, time_grid_to(0.0, 0.5, 1e-3), 1e-8, 1e2, 51);
    EXPECT_TRUE(r.found);
    EXPECT_LE(r.lo, r.hi);
}
