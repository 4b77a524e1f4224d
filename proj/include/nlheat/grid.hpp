#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nlheat {

/// The two points of the boundary of (0,1). Outward normal is -1 at `left`, +1 at `right`.
enum class Boundary { left, right };

[[nodiscard]] constexpr double outward_normal(Boundary b) noexcept {
    return b == Boundary::left ? -1.0 : 1.0;
}

/// Uniform nodes on [0,1] with trapezoid weights. Immutable after construction.
class SpatialGrid {
public:
    [[nodiscard]] int n_cells() const noexcept { return n_cells_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] double node(std::size_t i) const noexcept { return nodes_[i]; }

    /// Grid function sampled from a callable f(x).
    template <typename F>
    [[nodiscard]] std::vector<double> sample(F&& f) const {
        std::vector<double> v(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) v[i] = f(nodes_[i]);
        return v;
    }

private:
    friend SpatialGrid build_grid(int n_cells);
    SpatialGrid() = default;

    int n_cells_ = 0;
    double h_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Throws ConfigError when n_cells < 4 (one-sided boundary stencils need three nodes per side).
[[nodiscard]] SpatialGrid build_grid(int n_cells);

/// Trapezoid rule over [0,1]. Throws ShapeError on length mismatch.
[[nodiscard]] double integrate(const SpatialGrid& grid, std::span<const double> values);

/// Second-order one-sided outward normal derivative at an endpoint.
[[nodiscard]] double normal_derivative(const SpatialGrid& grid, std::span<const double> values, Boundary end);

/// Uniform time levels t0, t0+dt, ..., t0+n_steps*dt.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    int n_steps = 0;

    [[nodiscard]] double horizon() const noexcept { return t0 + n_steps * dt; }
    [[nodiscard]] double time(int j) const noexcept { return t0 + j * dt; }
};

/// Validated constructor; dt > 0, n_steps >= 0, finite values.
[[nodiscard]] TimeGrid make_time_grid(double t0, double dt, int n_steps);

/// Grid reaching `horizon` from t0 with the largest step not exceeding `max_dt`.
[[nodiscard]] TimeGrid time_grid_to(double t0, double horizon, double max_dt);

void check_shape(const SpatialGrid& grid, std::span<const double> values, const char* what);

}  // namespace nlheat
