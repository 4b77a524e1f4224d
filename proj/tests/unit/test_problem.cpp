#include "nlheat/error.hpp"
#include "nlheat/problem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace nlheat;

namespace {

ProblemSpec spec_with(double p, double l, const char* c, const char* k, const char* u0) {
    ProblemSpec s;
    s.p = p;
    s.l = l;
    s.c = parse_coefficient(c);
    s.k = parse_kernel(k);
    s.u0 = parse_profile(u0);
    s.T = 1.0;
    return s;
}

}  // namespace

TEST(Profile, ParsesEveryKind) {
    EXPECT_DOUBLE_EQ(parse_profile("2.5")(0.3), 2.5);
    EXPECT_DOUBLE_EQ(parse_profile("const(4)")(0.9), 4.0);
    EXPECT_NEAR(parse_profile("cos(1, 0.5)")(0.0), 1.5, 1e-15);
    EXPECT_NEAR(parse_profile("cos(1, 0.5)")(1.0), 0.5, 1e-15);
    EXPECT_NEAR(parse_profile("poly(1, 2, 3)")(2.0), 17.0, 1e-13);
    EXPECT_NEAR(parse_profile("bump(0.5, 0.25, 2)")(0.5), 2.0, 1e-15);
    EXPECT_EQ(parse_profile("bump(0.5, 0.25, 2)")(0.8), 0.0);
    EXPECT_NEAR(parse_profile("pwl(0, 1, 1, 3)")(0.25), 1.5, 1e-15);
    EXPECT_NEAR(parse_profile("exp(2, -1)")(1.0), 2.0 * std::exp(-1.0), 1e-15);
}

TEST(Profile, RejectsUnknownKindAndBadNumbers) {
    EXPECT_THROW((void)parse_profile("sin(1)"), ConfigError);
    EXPECT_THROW((void)parse_profile("1.5x"), ConfigError);
    EXPECT_THROW((void)parse_profile("const(1, 2)"), ConfigError);
}

TEST(Fields, SeparableEvaluation) {
    const auto c = parse_coefficient("sep(poly(1, 1), const(2))");
    EXPECT_NEAR(c(0.5, 0.3), 3.0, 1e-15);
    const auto k = parse_kernel("sep(1, 2, poly(0, 1), const(1))");
    EXPECT_NEAR(k(Boundary::left, 0.5, 0.0), 0.5, 1e-15);
    EXPECT_NEAR(k(Boundary::right, 0.5, 0.0), 1.0, 1e-15);
    EXPECT_TRUE(parse_coefficient("const(0)").is_zero());
    EXPECT_FALSE(parse_kernel("const(1)").is_zero());
}

TEST(ProblemSpec, ValidationNamesTheKey) {
    const auto g = build_grid(10);
    auto s = spec_with(1, 1, "const(1)", "const(1)", "1");
    EXPECT_NO_THROW(s.validate(g));
    s.p = -1;
    try {
        s.validate(g);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_STREQ(e.what(), "problem.p must be > 0");
    }
    auto neg = spec_with(1, 1, "const(1)", "const(1)", "cos(0, 1)");
    EXPECT_THROW(neg.validate(g), ConfigError);
    auto negc = spec_with(1, 1, "const(-1)", "const(1)", "1");
    EXPECT_THROW(negc.validate(g), ConfigError);
}

TEST(Compatibility, ZeroDataIsCompatible) {
    const auto g = build_grid(20);
    for (const char* k : {"const(1)", "const(7)", "sep(1, 3, poly(1, 1), const(1))"}) {
        const auto r = compatibility_residual(spec_with(1, 0.5, "const(1)", k, "0"), g);
        EXPECT_EQ(r[0], 0.0);
        EXPECT_EQ(r[1], 0.0);
    }
}

TEST(Compatibility, ConstantDataZeroKernel) {
    const auto r = compatibility_residual(spec_with(1, 2, "const(1)", "const(0)", "1"), build_grid(20));
    EXPECT_NEAR(r[0], 0.0, 1e-13);
    EXPECT_NEAR(r[1], 0.0, 1e-13);
}

TEST(Compatibility, ConstantDataUnitKernel) {
    const auto r = compatibility_residual(spec_with(1, 2, "const(1)", "const(1)", "1"), build_grid(20));
    EXPECT_NEAR(r[0], -1.0, 1e-13);
    EXPECT_NEAR(r[1], -1.0, 1e-13);
}

TEST(Regularize, ShiftByEps) {
    const auto g = build_grid(10);
    const auto s = spec_with(1, 1, "const(1)", "const(1)", "0");
    for (const double v : regularize_initial(s, g, 0.5)) EXPECT_EQ(v, 0.5);
    const auto b = spec_with(1, 1, "const(1)", "const(1)", "cos(1, 0.5)");
    const auto lo = regularize_initial(b, g, 0.1);
    const auto hi = regularize_initial(b, g, 0.2);
    const auto u0 = initial_values(b, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_LE(lo[i], hi[i]);
        EXPECT_NEAR(lo[i] - u0[i], 0.1, 1e-15);
    }
}

TEST(Regularize, RejectsEpsOutsideUnitInterval) {
    const auto g = build_grid(10);
    const auto s = spec_with(1, 1, "const(1)", "const(1)", "0");
    EXPECT_THROW((void)regularize_initial(s, g, 0.0), ConfigError);
    EXPECT_THROW((void)regularize_initial(s, g, 1.0), ConfigError);
    EXPECT_THROW((void)regularize_initial(s, g, -0.1), ConfigError);
}

TEST(BoundaryIntegral, ConstantKernel) {
    const auto g = build_grid(50);
    const auto s = spec_with(1, 2, "const(1)", "const(3)", "0");
    const auto u = g.sample([](double x) { return x; });
    EXPECT_NEAR(boundary_integral(s, g, u, Boundary::left, 0.0), 1.0, 1e-3);
}
