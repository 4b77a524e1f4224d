#include "nlheat/error.hpp"
#include "nlheat/green.hpp"

#include <gtest/gtest.h>

#include "nlheat/barriers.hpp"

#include <cmath>
#include <numbers>

using namespace nlheat;

namespace {

constexpr double pi = std::numbers::pi;

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

}  // namespace

TEST(Kernel, TMinMatchesTailTolerance) {
    const NeumannKernel k;
    EXPECT_EQ(k.n_modes(), 64);
    EXPECT_NEAR(k.tail_bound(k.t_min()), 1e-10, 1e-12);
    EXPECT_GT(k.tail_bound(k.t_min() * 0.9), 1e-10);
}

TEST(Kernel, LargeTimeIsUniform) {
    const NeumannKernel k;
    for (double x : {0.0, 0.3, 1.0}) EXPECT_NEAR(kernel_eval(k, x, 0.7, 10.0), 1.0, 1e-12);
}

TEST(Kernel, SymmetricExactly) {
    const NeumannKernel k;
    for (double t : {k.t_min(), 0.01, 0.1}) EXPECT_EQ(kernel_eval(k, 0.3, 0.7, t), kernel_eval(k, 0.7, 0.3, t));
}

TEST(Kernel, Normalized) {
    const NeumannKernel k;
    for (double x : {0.0, 0.25, 0.6}) {
        for (double t : {k.t_min(), 0.01, 0.5}) {
            const double m = integrate_pieces([&](double y) { return kernel_eval(k, x, y, t); }, 0.0, 1.0, {}, 256);
            EXPECT_NEAR(m, 1.0, 1e-10);
        }
    }
}

TEST(Kernel, RefusedBelowTMin) {
    const NeumannKernel k;
    EXPECT_THROW((void)kernel_eval(k, 0.5, 0.5, k.t_min() / 2), KernelDomainError);
}

TEST(StaticTail, MatchesDirectSum) {
    for (auto [x, xi] : {std::pair{0.2, 0.0}, {0.9, 1.0}, {0.5, 0.0}}) {
        double direct = 0.0;
        for (int m = 200000; m > 16; --m) {
            const double mp = m * pi;
            direct += 2 * std::cos(mp * x) * std::cos(mp * xi) / (mp * mp);
        }
        EXPECT_NEAR(static_tail(x, xi, 16), direct, 1e-7);
    }
}

TEST(Contraction, ClosedForms) {
    const auto g = build_grid(20);
    EXPECT_EQ(contraction_estimate(spec_with(2, 1, "const(0)", "const(1)", "1", 1), g, 0.1, 3, 0.5), 0.0);
    // c = 1, p = 1: theta = 1 and the inner integral is T.
    EXPECT_NEAR(contraction_estimate(spec_with(1, 1, "const(1)", "const(1)", "1", 1), g, 0.1, 3, 0.3), 0.3, 1e-14);
    EXPECT_NEAR(contraction_estimate(spec_with(1, 1, "const(1)", "const(1)", "1", 1), g, 0.5, 100, 0.3), 0.3, 1e-14);
    // theta = p max(eps^(p-1), M^(p-1)) = 2 * 3 for p = 2.
    EXPECT_NEAR(contraction_estimate(spec_with(2, 1, "const(1)", "const(1)", "1", 1), g, 0.1, 3, 0.1), 0.6, 1e-14);
}

TEST(Picard, HeatNeedsOneIterationPerSlab) {
    const auto s = spec_with(1, 1, "const(0)", "const(0)", "cos(1, 0.5)", 0.05);
    const auto g = build_grid(40);
    const auto r = picard_solve(s, g, time_grid_to(0.0, 0.05, 1e-3), 1e-3, PicardOptions{});
    for (const auto& h : r.history) EXPECT_EQ(h.iteration, 1);
    const double decay = std::exp(-pi * pi * 0.05);
    const auto u = r.trajectory.final_slice();
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(u[i], 1.001 + 0.5 * decay * std::cos(pi * g.node(i)), 1e-10);
    }
}

TEST(Picard, ConstantEpsIsPreserved) {
    const auto s = spec_with(1, 1, "const(0)", "const(0)", "0", 0.1);
    const auto r = picard_solve(s, build_grid(20), time_grid_to(0.0, 0.1, 1e-2), 0.2, PicardOptions{});
    for (const double v : r.trajectory.values) EXPECT_NEAR(v, 0.2, 1e-14);
}

TEST(Picard, ResidualContractsOnAdmissibleSlab) {
    const auto s = spec_with(2, 2, "const(1)", "const(1)", "cos(1, 0.5)", 0.05);
    const auto r = picard_solve(s, build_grid(50), time_grid_to(0.0, 0.05, 1e-3), 1e-3, PicardOptions{});
    ASSERT_GE(r.history.size(), 3u);
    for (std::size_t i = 2; i < r.history.size(); ++i) {
        if (r.history[i].slab != r.history[i - 1].slab) continue;
        EXPECT_LE(r.history[i].sup_delta, r.history[i - 1].sup_delta);
    }
    EXPECT_TRUE(r.bound_respected);
}

TEST(Picard, LongUserSlabIsRejected) {
    const auto s = spec_with(2, 2, "const(50)", "const(1)", "1", 0.5);
    PicardOptions o;
    o.slab_length = 0.5;
    EXPECT_THROW((void)picard_solve(s, build_grid(20), time_grid_to(0.0, 0.5, 1e-2), 1e-3, o), ConfigError);
}

TEST(Picard, RequiresPositiveEps) {
    const auto s = spec_with(1, 1, "const(0)", "const(0)", "1", 0.1);
    EXPECT_THROW((void)picard_solve(s, build_grid(20), time_grid_to(0.0, 0.1, 1e-2), 0.0, PicardOptions{}),
                 ConfigError);
}
