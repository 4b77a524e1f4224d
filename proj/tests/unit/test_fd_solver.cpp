#include "nlheat/error.hpp"
#include "nlheat/fd_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace nlheat;

namespace {

constexpr double pi = std::numbers::pi;

ProblemSpec spec_with(double p, double l, const char* c, const char* k, const char* u0, double T = 1.0) {
    ProblemSpec s;
    s.p = p;
    s.l = l;
    s.c = parse_coefficient(c);
    s.k = parse_kernel(k);
    s.u0 = parse_profile(u0);
    s.T = T;
    return s;
}

StepScheme every_step() {
    StepScheme s;
    s.store_stride = 1;
    return s;
}

}  // namespace

TEST(Step, ConstantIsHeatEquilibrium) {
    const auto g = build_grid(20);
    const auto s = spec_with(1, 1, "const(0)", "const(0)", "1");
    const std::vector<double> state(g.size(), 1.0);
    for (const double v : step(state, 0.1, 0.1, s, g, 0.0, StepScheme{})) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(Step, LinearDecayDividesByOnePlusDt) {
    const auto g = build_grid(20);
    const auto s = spec_with(1, 1, "const(1)", "const(0)", "1");
    const std::vector<double> state(g.size(), 1.0);
    for (const double v : step(state, 0.1, 0.1, s, g, 0.0, StepScheme{})) EXPECT_NEAR(v, 1.0 / 1.1, 1e-13);
}

TEST(Step, EpsIsRegularizedEquilibrium) {
    const auto g = build_grid(20);
    const auto s = spec_with(0.5, 1, "const(1)", "const(0)", "0");
    const std::vector<double> state(g.size(), 0.25);
    for (const double v : step(state, 0.1, 0.1, s, g, 0.25, StepScheme{})) EXPECT_NEAR(v, 0.25, 1e-13);
}

TEST(Step, InfluxRaisesBoundaryValues) {
    const auto g = build_grid(20);
    const auto s = spec_with(0.5, 1, "const(1)", "const(1)", "0");
    const std::vector<double> state(g.size(), 0.25);
    const auto next = step(state, 0.01, 0.01, s, g, 0.25, StepScheme{});
    EXPECT_GT(next.front(), 0.25);
    EXPECT_GT(next.back(), 0.25);
    EXPECT_GE(*std::min_element(next.begin(), next.end()), 0.25 - 1e-10);
}

TEST(Step, NonconvergenceCarriesResidual) {
    const auto g = build_grid(20);
    const auto s = spec_with(2, 2, "const(1)", "const(5)", "1");
    StepScheme tight;
    tight.fp_max = 1;
    tight.fp_tol = 1e-15;
    const std::vector<double> state(g.size(), 1.0);
    try {
        (void)step(state, 0.1, 0.1, s, g, 0.0, tight);
        FAIL();
    } catch (const NonconvergenceError& e) {
        EXPECT_GT(e.residual(), 0.0);
    }
}

TEST(Step, SchemeValidation) {
    StepScheme s;
    s.fp_tol = 0.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = StepScheme{};
    s.fp_max = 0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = StepScheme{};
    s.store_stride = 0;
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Solve, HeatModeMatchesTimeExactReference) {
    // Fully discrete reference: the cosine mode is an eigenvector of the scheme with eigenvalue
    // lambda_h = 2 (1 - cos(pi h)) / h^2, so n backward-Euler steps give (1 + dt lambda_h)^-n.
    auto s = spec_with(1, 1, "const(0)", "const(0)", "cos(1, 1)", 0.1);
    for (int n : {20, 40}) {
        const auto g = build_grid(n);
        const auto times = time_grid_to(0.0, 0.1, 1e-3);
        const auto traj = solve(s, g, times, 0.0, StepScheme{});
        const double h = g.h();
        const double lambda = 2.0 * (1.0 - std::cos(pi * h)) / (h * h);
        const double factor = std::pow(1.0 + times.dt * lambda, -times.n_steps);
        const auto u = traj.final_slice();
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_NEAR(u[i], 1.0 + factor * std::cos(pi * g.node(i)), 1e-11);
        }
    }
}

TEST(Solve, HeatSemidiscreteSpatialOrder) {
    // The spatial part of the error, with time integrated exactly, is second order.
    double prev = 0.0;
    for (int n : {50, 100, 200}) {
        const double h = 1.0 / n;
        const double lambda = 2.0 * (1.0 - std::cos(pi * h)) / (h * h);
        const double err = std::fabs(std::exp(-lambda * 0.1) - std::exp(-pi * pi * 0.1));
        if (prev > 0.0) {
            EXPECT_GE(std::log2(prev / err), 1.8);
        }
        prev = err;
    }
}

TEST(Solve, AbsorptionOde) {
    const auto s = spec_with(0.5, 1, "const(1)", "const(0)", "1", 1.5);
    const auto g = build_grid(8);
    const auto traj = solve(s, g, time_grid_to(0.0, 1.5, 1e-4), 0.0, every_step());
    for (std::size_t j = 0; j < traj.n_slices(); j += 500) {
        const double t = traj.time(j);
        const double exact = (1 - t / 2) * (1 - t / 2);
        EXPECT_NEAR(traj.slice(j)[3], exact, 1e-3 * exact);
    }
}

TEST(Solve, HeatConservesMass) {
    const auto s = spec_with(1, 1, "const(0)", "const(0)", "bump(0.3, 0.2, 1)", 0.5);
    const auto g = build_grid(50);
    const auto traj = solve(s, g, time_grid_to(0.0, 0.5, 1e-3), 0.0, every_step());
    const double m0 = mass(traj, 0);
    for (std::size_t j = 0; j < traj.n_slices(); ++j) EXPECT_NEAR(mass(traj, j), m0, 1e-8 * 0.5);
}

TEST(Solve, StoresStrideAndFinalSlice) {
    const auto s = spec_with(1, 1, "const(0)", "const(0)", "1", 0.105);
    const auto g = build_grid(10);
    StepScheme scheme;
    scheme.store_stride = 10;
    const auto traj = solve(s, g, make_time_grid(0.0, 0.005, 21), 0.0, scheme);
    ASSERT_EQ(traj.n_slices(), 4u);
    EXPECT_EQ(traj.steps.back(), 21);
    EXPECT_EQ(traj.diagnostics.size(), 21u);
}

TEST(Solve, RegularizedLowerBarrier) {
    const auto s = spec_with(0.5, 0.75, "const(1)", "const(1)", "0", 0.5);
    const auto g = build_grid(40);
    const double eps = 1e-3;
    const auto traj = solve(s, g, time_grid_to(0.0, 0.5, 1e-3), eps, every_step());
    EXPECT_GE(traj.min_value(), eps - 1e-10);
}

TEST(Solve, ErrorsCarryTheTimeIndex) {
    const auto s = spec_with(2, 2, "const(1)", "const(5)", "1", 0.1);
    const auto g = build_grid(10);
    StepScheme tight;
    tight.fp_max = 1;
    tight.fp_tol = 1e-15;
    try {
        (void)solve(s, g, time_grid_to(0.0, 0.1, 0.01), 0.0, tight);
        FAIL();
    } catch (const NonconvergenceError& e) {
        EXPECT_EQ(e.time_index(), 1);
    }
}

TEST(Mass, ConstantAndLinearFields) {
    const auto g = build_grid(10);
    Trajectory t{g, make_time_grid(0.0, 1.0, 1), 0.0, {}, {}, {}};
    t.push(0, g.sample([](double) { return 1.0; }));
    t.push(1, g.sample([](double x) { return x; }));
    EXPECT_NEAR(mass(t, 0), 1.0, 1e-15);
    EXPECT_NEAR(mass(t, 1), 0.5, 1e-15);
    EXPECT_THROW((void)mass(t, 2), ConfigError);
}
