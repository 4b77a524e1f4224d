#include "nlheat/error.hpp"
#include "nlheat/experiments.hpp"

#include <gtest/gtest.h>

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

ExperimentContext coarse() {
    ExperimentContext ctx;
    ctx.disc.n_cells = 50;
    ctx.disc.dt = 2e-3;
    return ctx;
}

}  // namespace

TEST(Checks, Relations) {
    EXPECT_TRUE(check_le("a", "", 1, 1).pass);
    EXPECT_FALSE(check_lt("a", "", 1, 1).pass);
    EXPECT_TRUE(check_ge("a", "", 1, 1).pass);
    EXPECT_FALSE(check_gt("a", "", 1, 1).pass);
    EXPECT_FALSE(check_le("a", "", std::nan(""), 1).pass);
    ExperimentOutcome o;
    o.checks = {check_true("x", "", true), check_true("y", "", false)};
    EXPECT_FALSE(o.pass());
    EXPECT_EQ(o.check("x").measured, 1.0);
    EXPECT_THROW((void)o.check("z"), std::out_of_range);
}

TEST(Comparison, OrderedConstants) {
    const auto o = run_comparison(spec_with(2, 2, "const(1)", "const(1)", "0.5", 0.2),
                                  spec_with(2, 2, "const(1)", "const(1)", "1", 0.2), coarse());
    EXPECT_TRUE(o.pass());
    EXPECT_FALSE(o.details["swapped"].get<bool>());
}

TEST(Comparison, IdenticalSpecsHaveZeroMargin) {
    const auto a = spec_with(2, 2, "const(1)", "const(1)", "cos(1, 0.5)", 0.2);
    const auto o = run_comparison(a, a, coarse());
    EXPECT_TRUE(o.pass());
    EXPECT_EQ(o.check("ordering").measured, 0.0);
}

TEST(Comparison, RolesSwapWhenFirstIsAbove) {
    const auto o = run_comparison(spec_with(2, 1, "const(1)", "const(1)", "poly(0.3, 0, 0.2)", 0.2),
                                  spec_with(2, 1, "const(1)", "const(1)", "0.3", 0.2), coarse());
    EXPECT_TRUE(o.pass());
    EXPECT_TRUE(o.details["swapped"].get<bool>());
}

TEST(Comparison, RejectsUnorderedOrUnequalData) {
    EXPECT_THROW((void)run_comparison(spec_with(2, 1, "const(1)", "const(1)", "cos(0.3, 0.1)", 0.2),
                                      spec_with(2, 1, "const(1)", "const(1)", "0.3", 0.2), coarse()),
                 HypothesisError);
    EXPECT_THROW((void)run_comparison(spec_with(2, 1, "const(1)", "const(1)", "0.2", 0.2),
                                      spec_with(2, 1, "const(2)", "const(1)", "0.3", 0.2), coarse()),
                 HypothesisError);
    EXPECT_THROW((void)run_comparison(spec_with(2, 0.5, "const(1)", "const(1)", "0", 0.2),
                                      spec_with(2, 0.5, "const(1)", "const(1)", "0.3", 0.2), coarse()),
                 HypothesisError);
}

TEST(Comparison, SuiteHasTenPairs) { EXPECT_EQ(comparison_suite().size(), 10u); }

TEST(Positivity, BumpAndHeatVariants) {
    EXPECT_TRUE(run_positivity(spec_with(2, 1, "const(1)", "const(1)", "bump(0.3, 0.3, 1)", 0.1), coarse()).pass());
    EXPECT_TRUE(
        run_positivity(spec_with(0.5, 0.5, "const(0)", "const(1)", "bump(0.3, 0.3, 1)", 0.1), coarse()).pass());
}

TEST(Positivity, RejectsZeroDataAndSublinearAbsorption) {
    EXPECT_THROW((void)run_positivity(spec_with(2, 1, "const(1)", "const(1)", "0", 0.1), coarse()), HypothesisError);
    EXPECT_THROW((void)run_positivity(spec_with(0.5, 1, "const(1)", "const(1)", "1", 0.1), coarse()),
                 HypothesisError);
}

TEST(Nonuniqueness, RejectsLAboveP) {
    EXPECT_THROW((void)run_nonuniqueness(spec_with(0.5, 0.75, "const(1)", "const(1)", "0", 0.5), coarse(), {}),
                 HypothesisError);
}

TEST(TrivialUniqueness, RejectsPAboveL) {
    EXPECT_THROW((void)run_trivial_uniqueness(spec_with(0.75, 0.5, "const(1)", "const(1)", "0", 0.5), coarse(), {},
                                              {0.1}),
                 HypothesisError);
}

TEST(ThresholdScan, RejectsZeroAbsorption) {
    EXPECT_THROW((void)run_threshold_scan(spec_with(0.5, 0.5, "const(1)", "const(1)", "0", 0.5), 0.0, {1.0},
                                          coarse()),
                 HypothesisError);
}

TEST(Extinction, RejectsLinearBoundary) {
    EXPECT_THROW((void)run_extinction(spec_with(0.5, 1, "const(1)", "const(1)", "0", 0.5), coarse(), {}),
                 HypothesisError);
}

TEST(UniquenessProbe, RejectsDataWithZeros) {
    EXPECT_THROW((void)run_uniqueness_probe(spec_with(2, 0.5, "const(1)", "const(1)", "bump(0.5, 0.2, 1)", 0.05),
                                            coarse()),
                 HypothesisError);
}

TEST(UniquenessProbe, PositiveDataAgrees) {
    auto ctx = coarse();
    ctx.disc.dt = 1e-4;
    EXPECT_TRUE(run_uniqueness_probe(spec_with(2, 0.5, "const(1)", "const(1)", "1", 0.05), ctx).pass());
}

TEST(Oracles, AbsorptionAndKernel) {
    EXPECT_TRUE(oracle_absorption(ExperimentContext{}).pass());
    EXPECT_TRUE(oracle_kernel(ExperimentContext{}).pass());
}
