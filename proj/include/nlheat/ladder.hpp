#pragma once

#include "nlheat/fd_solver.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace nlheat {

enum class LadderVerdict { nontrivial, trivial, inconclusive };

[[nodiscard]] std::string_view verdict_name(LadderVerdict v) noexcept;

struct LadderOptions {
    double eps0 = 0.01;
    int rungs = 6;
    double tol_cmp = 1e-6;
    double tol_trivial = 1e-3;
    double stabilize_rel = 0.2;  // relative spread allowed across the last three rungs
    double decay_ratio = 0.7;    // per-rung sup ratio required for a trivial verdict
    bool check_ordering = true;  // throw OrderingError on a monotonicity breach

    void validate() const;
};

/// Decreasing-eps family of regularized solves on a shared grid and time grid.
struct LadderReport {
    std::vector<double> eps;
    std::vector<Trajectory> trajectories;
    std::vector<double> sup_gaps;          // sup |u_{eps_m} - u_{eps_{m+1}}| over stored slices
    std::vector<double> final_sup_norms;   // sup_x u_eps(x, T)
    std::vector<double> min_values;        // min over Q_T of each rung
    std::vector<std::array<double, 2>> compatibility_defects;  // of u0 + eps at t0
    double extrapolated_final_sup = 0.0;
    double floor = 0.0;                    // stabilization floor used by the verdict
    double worst_violation = 0.0;          // max over rungs of u_{m+1} - u_m
    LadderVerdict verdict = LadderVerdict::inconclusive;
};

/// Runs eps_m = eps0 2^-m, m = 0..rungs-1, sequentially and classifies the limit.
/// Throws LadderError when a rung fails and OrderingError on a monotonicity breach.
[[nodiscard]] LadderReport run_ladder(const ProblemSpec& spec, const SpatialGrid& grid, const TimeGrid& times,
                                      const LadderOptions& options, const StepScheme& scheme);

struct OrderingResult {
    bool ordered = true;
    double worst_violation = 0.0;  // max over adjacent rungs of u_{m+1} - u_m (0 if none positive)
    int worst_rung = -1;
};

/// Pointwise check u_{eps_{m+1}} <= u_{eps_m} + tol_cmp over every stored slice.
[[nodiscard]] OrderingResult ordering_check(const LadderReport& report, double tol_cmp);

/// Aitken delta-squared limit of the last three entries, clamped at 0. Falls back to the last
/// entry when the sequence is not geometrically contracting.
[[nodiscard]] double aitken_limit(std::span<const double> seq);

}  // namespace nlheat
