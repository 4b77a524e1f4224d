#include "nlheat/grid.hpp"

#include "nlheat/error.hpp"
#include "nlheat/simd.hpp"

#include <cmath>
#include <string>

namespace nlheat {

SpatialGrid build_grid(int n_cells) {
    if (n_cells < 4) {
        throw ConfigError("grid.n_cells must be >= 4 (got " + std::to_string(n_cells) + ")");
    }
    SpatialGrid g;
    g.n_cells_ = n_cells;
    g.h_ = 1.0 / n_cells;
    const auto n = static_cast<std::size_t>(n_cells) + 1;
    g.nodes_.resize(n);
    g.weights_.assign(n, g.h_);
    for (std::size_t i = 0; i < n; ++i) g.nodes_[i] = static_cast<double>(i) / n_cells;
    g.weights_.front() = 0.5 * g.h_;
    g.weights_.back() = 0.5 * g.h_;
    return g;
}

void check_shape(const SpatialGrid& grid, std::span<const double> values, const char* what) {
    if (values.size() != grid.size()) {
        throw ShapeError(std::string(what) + ": expected " + std::to_string(grid.size()) + " values, got " +
                         std::to_string(values.size()));
    }
}

double integrate(const SpatialGrid& grid, std::span<const double> values) {
    check_shape(grid, values, "integrate");
    return simd::dot(grid.weights(), values);
}

double normal_derivative(const SpatialGrid& grid, std::span<const double> values, Boundary end) {
    check_shape(grid, values, "normal_derivative");
    const double h = grid.h();
    if (end == Boundary::left) {
        return -(-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    }
    const std::size_t n = values.size() - 1;
    return (3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * h);
}

TimeGrid make_time_grid(double t0, double dt, int n_steps) {
    if (!std::isfinite(t0) || !std::isfinite(dt)) throw ConfigError("time grid values must be finite");
    if (!(dt > 0.0)) throw ConfigError("time step dt must be > 0");
    if (n_steps < 0) throw ConfigError("time grid n_steps must be >= 0");
    return TimeGrid{t0, dt, n_steps};
}

TimeGrid time_grid_to(double t0, double horizon, double max_dt) {
    if (!(max_dt > 0.0)) throw ConfigError("time step dt must be > 0");
    if (!(horizon > t0)) throw ConfigError("time horizon must exceed the start time");
    const double span = horizon - t0;
    // Tolerate horizons that are an integer multiple of max_dt up to rounding.
    const int n = static_cast<int>(std::ceil(span / max_dt - 1e-9));
    return make_time_grid(t0, span / n, n);
}

}  // namespace nlheat
