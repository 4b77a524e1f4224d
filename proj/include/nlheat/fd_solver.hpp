#pragma once

#include "nlheat/grid.hpp"
#include "nlheat/problem.hpp"

#include <limits>
#include <span>
#include <vector>

namespace nlheat {

/// Backward Euler in time, conservative ghost-point Neumann rows in space,
/// and an inner fixed point that refreshes the lagged boundary integral.
struct StepScheme {
    double fp_tol = 1e-10;   // sup-norm change between sweeps, relative to max(1, sup|u|)
    int fp_max = 50;
    double tol_pos = 1e-10;  // admissible undershoot below the lower barrier (eps, or 0)
    double u_floor = 1e-14;  // clamp for u^(p-1) in the Newton derivative when p < 1
    double stiffness_limit = std::numeric_limits<double>::infinity();  // dt sup(c) p M^(p-1)
    int store_stride = 1;

    void validate() const;
};

struct StepDiagnostic {
    int sweeps = 0;
    double residual = 0.0;  // last sup-norm change
};

/// Time-indexed grid functions. Slices are stored every `store_stride` steps plus the final one.
struct Trajectory {
    SpatialGrid grid;
    TimeGrid times;
    double eps = 0.0;
    std::vector<int> steps;        // time index of each stored slice
    std::vector<double> values;    // stored slices back to back, each grid.size() long
    std::vector<StepDiagnostic> diagnostics;  // one per step taken

    [[nodiscard]] std::size_t n_slices() const noexcept { return steps.size(); }
    [[nodiscard]] double time(std::size_t slice) const noexcept { return times.time(steps[slice]); }
    [[nodiscard]] std::span<const double> slice(std::size_t s) const noexcept {
        return {values.data() + s * grid.size(), grid.size()};
    }
    [[nodiscard]] std::span<const double> final_slice() const noexcept { return slice(n_slices() - 1); }
    [[nodiscard]] double min_value() const;
    [[nodiscard]] double max_value() const;
    [[nodiscard]] double sup_at(std::size_t s) const;

    void push(int step, std::span<const double> u);
};

/// One backward-Euler step of
///   u_t = u_xx - c u^p + c eps^p,   du/dnu = int k u^l dy
/// from `state` at t_next - dt to t_next. Throws NonconvergenceError when fp_max sweeps do not
/// settle and PositivityError when the converged iterate dips below eps - tol_pos; if both
/// happen the positivity error is raised.
[[nodiscard]] std::vector<double> step(std::span<const double> state, double t_next, double dt,
                                       const ProblemSpec& spec, const SpatialGrid& grid, double eps,
                                       const StepScheme& scheme, StepDiagnostic* diag = nullptr);

/// March the regularized problem over `times` from regularize_initial(spec, eps) (or u0 when eps == 0).
[[nodiscard]] Trajectory solve(const ProblemSpec& spec, const SpatialGrid& grid, const TimeGrid& times, double eps,
                               const StepScheme& scheme);

/// Same, from an explicit initial grid function.
[[nodiscard]] Trajectory solve_from(std::span<const double> initial, const ProblemSpec& spec, const SpatialGrid& grid,
                                    const TimeGrid& times, double eps, const StepScheme& scheme);

/// Trapezoid mass of stored slice `j`. Throws ConfigError on an invalid index.
[[nodiscard]] double mass(const Trajectory& traj, std::size_t j);

}  // namespace nlheat
