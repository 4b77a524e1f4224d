#include "nlheat/error.hpp"
#include "nlheat/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace nlheat;

TEST(Grid, FourCellsHasQuarterSpacing) {
    const auto g = build_grid(4);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g.h(), 0.25);
    const double expect[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(g.node(i), expect[i]);
}

TEST(Grid, WeightsSumToOne) {
    for (int n : {4, 10, 37, 100, 1000}) {
        const auto g = build_grid(n);
        double s = 0.0;
        for (const double w : g.weights()) s += w;
        EXPECT_NEAR(s, 1.0, n * std::numeric_limits<double>::epsilon()) << n;
        EXPECT_DOUBLE_EQ(g.weights().front(), g.h() / 2);
    }
}

TEST(Grid, RejectsFewerThanFourCells) {
    EXPECT_THROW((void)build_grid(3), ConfigError);
    EXPECT_THROW((void)build_grid(0), ConfigError);
}

TEST(Grid, NodesIncreaseUniformly) {
    const auto g = build_grid(64);
    EXPECT_EQ(g.node(0), 0.0);
    EXPECT_EQ(g.node(64), 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g.node(i) - g.node(i - 1), g.h(), 1e-15);
}

TEST(Integrate, AffineExact) {
    for (int n : {4, 7, 100}) {
        const auto g = build_grid(n);
        EXPECT_NEAR(integrate(g, g.sample([](double) { return 1.0; })), 1.0, 1e-15);
        EXPECT_NEAR(integrate(g, g.sample([](double x) { return x; })), 0.5, 1e-15);
    }
}

TEST(Integrate, QuadraticWithinBound) {
    const auto g = build_grid(100);
    EXPECT_NEAR(integrate(g, g.sample([](double x) { return x * x; })), 1.0 / 3.0, 1e-4);
}

TEST(Integrate, ShapeMismatchThrows) {
    const auto g = build_grid(10);
    const std::vector<double> v(5, 1.0);
    EXPECT_THROW((void)integrate(g, v), ShapeError);
}

TEST(NormalDerivative, ConstantIsZero) {
    const auto g = build_grid(8);
    const auto u = g.sample([](double) { return 3.0; });
    EXPECT_NEAR(normal_derivative(g, u, Boundary::left), 0.0, 1e-13);
    EXPECT_NEAR(normal_derivative(g, u, Boundary::right), 0.0, 1e-13);
}

TEST(NormalDerivative, LinearGivesOutwardSigns) {
    const auto g = build_grid(8);
    const auto u = g.sample([](double x) { return x; });
    EXPECT_NEAR(normal_derivative(g, u, Boundary::right), 1.0, 1e-13);
    EXPECT_NEAR(normal_derivative(g, u, Boundary::left), -1.0, 1e-13);
}

TEST(NormalDerivative, ExactOnQuadratics) {
    const auto g = build_grid(10);
    const auto u = g.sample([](double x) { return x * x; });
    EXPECT_NEAR(normal_derivative(g, u, Boundary::right), 2.0, 1e-12);
    EXPECT_NEAR(normal_derivative(g, u, Boundary::left), 0.0, 1e-12);
    const auto w = g.sample([](double x) { return 2.0 - 3.0 * x + 5.0 * x * x; });
    EXPECT_NEAR(normal_derivative(g, w, Boundary::left), 3.0, 1e-11);
    EXPECT_NEAR(normal_derivative(g, w, Boundary::right), 7.0, 1e-11);
}

TEST(TimeGrid, HorizonAndValidation) {
    const auto t = make_time_grid(0.5, 0.1, 10);
    EXPECT_NEAR(t.horizon(), 1.5, 1e-15);
    EXPECT_THROW((void)make_time_grid(0.0, 0.0, 10), ConfigError);
    EXPECT_THROW((void)make_time_grid(0.0, 0.1, -1), ConfigError);
    const auto u = time_grid_to(0.0, 0.5, 0.003);
    EXPECT_NEAR(u.horizon(), 0.5, 1e-14);
    EXPECT_LE(u.dt, 0.003);
}
