#include "nlheat/ladder.hpp"

#include "nlheat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace nlheat {

std::string_view verdict_name(LadderVerdict v) noexcept {
    switch (v) {
        case LadderVerdict::nontrivial: return "nontrivial";
        case LadderVerdict::trivial: return "trivial";
        case LadderVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

void LadderOptions::validate() const {
    if (!(eps0 > 0.0 && eps0 < 1.0)) throw ConfigError("ladder.eps0 must lie in (0,1)");
    if (rungs < 3) throw ConfigError("ladder.rungs must be >= 3");
    if (!(tol_cmp > 0.0)) throw ConfigError("ladder.tol_cmp must be > 0");
    if (!(tol_trivial > 0.0)) throw ConfigError("ladder.tol_trivial must be > 0");
    if (!(stabilize_rel > 0.0 && stabilize_rel < 1.0)) throw ConfigError("ladder.stabilize_rel must lie in (0,1)");
    if (!(decay_ratio > 0.0 && decay_ratio < 1.0)) throw ConfigError("ladder.decay_ratio must lie in (0,1)");
}

double aitken_limit(std::span<const double> seq) {
    if (seq.empty()) return 0.0;
    const double last = seq.back();
    if (seq.size() < 3) return std::max(last, 0.0);
    const double s0 = seq[seq.size() - 3];
    const double s1 = seq[seq.size() - 2];
    const double d1 = s1 - s0;
    const double d2 = last - s1;
    const double denom = d2 - d1;
    const double ratio = d1 != 0.0 ? d2 / d1 : 0.0;
    if (d1 == 0.0 || !(ratio > 0.0 && ratio < 1.0) || denom == 0.0) return std::max(last, 0.0);
    return std::max(last - d2 * d2 / denom, 0.0);
}

namespace {

double slice_gap(std::span<const double> upper, std::span<const double> lower, double& violation) {
    double gap = 0.0;
    for (std::size_t i = 0; i < upper.size(); ++i) {
        const double d = lower[i] - upper[i];
        gap = std::max(gap, std::fabs(d));
        violation = std::max(violation, d);
    }
    return gap;
}

}  // namespace

OrderingResult ordering_check(const LadderReport& report, double tol_cmp) {
    OrderingResult out;
    for (std::size_t m = 0; m + 1 < report.trajectories.size(); ++m) {
        const auto& a = report.trajectories[m];
        const auto& b = report.trajectories[m + 1];
        const std::size_t slices = std::min(a.n_slices(), b.n_slices());
        double violation = 0.0;
        for (std::size_t s = 0; s < slices; ++s) (void)slice_gap(a.slice(s), b.slice(s), violation);
        if (violation > out.worst_violation) {
            out.worst_violation = violation;
            out.worst_rung = static_cast<int>(m);
        }
    }
    out.ordered = out.worst_violation <= tol_cmp;
    return out;
}

LadderReport run_ladder(const ProblemSpec& spec, const SpatialGrid& grid, const TimeGrid& times,
                        const LadderOptions& options, const StepScheme& scheme) {
    options.validate();
    scheme.validate();
    spec.validate(grid);

    LadderReport report;
    for (int m = 0; m < options.rungs; ++m) {
        const double eps = std::ldexp(options.eps0, -m);
        report.eps.push_back(eps);
        const auto initial = regularize_initial(spec, grid, eps);
        std::array<double, 2> defect{};
        for (const Boundary end : {Boundary::left, Boundary::right}) {
            defect[end == Boundary::left ? 0 : 1] =
                normal_derivative(grid, initial, end) - boundary_integral(spec, grid, initial, end, times.t0);
        }
        report.compatibility_defects.push_back(defect);
        try {
            report.trajectories.push_back(solve_from(initial, spec, grid, times, eps, scheme));
        } catch (const Error& e) {
            throw LadderError(fmt::format("rung {} (eps = {}): {}", m, eps, e.what()), m, e.kind());
        }
        const auto& traj = report.trajectories.back();
        report.final_sup_norms.push_back(traj.sup_at(traj.n_slices() - 1));
        report.min_values.push_back(traj.min_value());
    }

    for (std::size_t m = 0; m + 1 < report.trajectories.size(); ++m) {
        const auto& a = report.trajectories[m];
        const auto& b = report.trajectories[m + 1];
        double gap = 0.0, violation = 0.0;
        for (std::size_t s = 0; s < a.n_slices(); ++s) gap = std::max(gap, slice_gap(a.slice(s), b.slice(s), violation));
        report.sup_gaps.push_back(gap);
        report.worst_violation = std::max(report.worst_violation, violation);
    }
    if (options.check_ordering && report.worst_violation > options.tol_cmp) {
        throw OrderingError(fmt::format("ladder rungs out of order by {} (tolerance {})", report.worst_violation,
                                        options.tol_cmp),
                            report.worst_violation);
    }

    const auto& s = report.final_sup_norms;
    const std::size_t n = s.size();
    report.extrapolated_final_sup = aitken_limit(s);
    report.floor = std::max(options.tol_trivial, 10.0 * report.eps.back());

    const double hi = std::max({s[n - 1], s[n - 2], s[n - 3]});
    const double lo = std::min({s[n - 1], s[n - 2], s[n - 3]});
    const bool stabilized = lo > report.floor && (hi - lo) / hi < options.stabilize_rel;
    const bool decaying = s[n - 2] <= options.decay_ratio * s[n - 3] && s[n - 1] <= options.decay_ratio * s[n - 2];
    if (stabilized) {
        report.verdict = LadderVerdict::nontrivial;
    } else if (decaying && report.extrapolated_final_sup < options.tol_trivial) {
        report.verdict = LadderVerdict::trivial;
    } else {
        report.verdict = LadderVerdict::inconclusive;
    }
    return report;
}

}  // namespace nlheat
