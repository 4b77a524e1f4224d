#include "nlheat/experiments.hpp"

#include "nlheat/error.hpp"
#include "nlheat/io.hpp"
#include "nlheat/simd.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nlheat {

namespace {

constexpr double pi = std::numbers::pi;

Check make_check(std::string id, std::string description, double measured, double threshold, std::string relation,
                 bool pass) {
    return Check{std::move(id), std::move(description), measured, threshold, std::move(relation), pass};
}

void require(ExperimentOutcome& out, std::string id, std::string description, bool ok) {
    out.hypotheses.push_back(check_true(std::move(id), description, ok));
    if (!ok) throw HypothesisError(out.name + ": hypothesis fails: " + description);
}

FieldRange range_of(const Profile& f, const SpatialGrid& grid) {
    FieldRange r{f(0.0), f(0.0)};
    for (const double x : grid.nodes()) {
        r.min = std::min(r.min, f(x));
        r.max = std::max(r.max, f(x));
    }
    return r;
}

bool zero_data(const ProblemSpec& spec, const SpatialGrid& grid) {
    const auto r = range_of(spec.u0, grid);
    return r.min == 0.0 && r.max == 0.0;
}

StepScheme scheme_for(const ExperimentContext& ctx, int stride) {
    auto s = ctx.scheme;
    s.store_stride = stride;
    return s;
}

/// Relative path of an artifact under out_dir/<name>/; empty when artifacts are disabled.
std::filesystem::path artifact(ExperimentOutcome& out, const ExperimentContext& ctx, const std::string& file) {
    if (ctx.out_dir.empty()) return {};
    out.artifacts.push_back(file);
    return ctx.out_dir / out.name / file;
}

/// Every `stride`-th stored slice plus the last.
Trajectory thin(const Trajectory& traj, int stride) {
    Trajectory t{traj.grid, traj.times, traj.eps, {}, {}, {}};
    for (std::size_t s = 0; s < traj.n_slices(); ++s) {
        if (traj.steps[s] % stride == 0 || s + 1 == traj.n_slices()) t.push(traj.steps[s], traj.slice(s));
    }
    return t;
}

void write_thinned(ExperimentOutcome& out, const ExperimentContext& ctx, const std::string& file,
                   const Trajectory& traj) {
    const auto path = artifact(out, ctx, file);
    if (!path.empty()) write_trajectory_csv(path, thin(traj, ctx.disc.store_stride));
}

double sup_difference(const Trajectory& a, const Trajectory& b) {
    double d = 0.0;
    const std::size_t slices = std::min(a.n_slices(), b.n_slices());
    for (std::size_t s = 0; s < slices; ++s) d = std::max(d, simd::max_abs_diff(a.slice(s), b.slice(s)));
    return d;
}

/// max over stored slices and nodes of lower - upper.
double ordering_violation(const Trajectory& lower, const Trajectory& upper) {
    double v = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < std::min(lower.n_slices(), upper.n_slices()); ++s) {
        const auto a = lower.slice(s);
        const auto b = upper.slice(s);
        for (std::size_t i = 0; i < a.size(); ++i) v = std::max(v, a[i] - b[i]);
    }
    return v;
}

/// max of barrier(x,t) - u (sign = +1, barrier below) or u - barrier (sign = -1) over stored
/// slices with t in [t_lo, t_hi].
double barrier_violation(const Trajectory& traj, const BarrierCandidate& barrier, double sign, double t_lo,
                         double t_hi) {
    double v = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < traj.n_slices(); ++s) {
        const double t = traj.time(s);
        if (t < t_lo || t > t_hi) continue;
        const auto u = traj.slice(s);
        for (std::size_t i = 0; i < u.size(); ++i) {
            v = std::max(v, sign * (barrier.value(traj.grid.node(i), t) - u[i]));
        }
    }
    return v;
}

struct LadderChecks {
    double worst_violation = 0.0;
    double floor_slack = std::numeric_limits<double>::infinity();  // min over rungs of min u - eps
};

void accumulate(LadderChecks& acc, const LadderReport& r) {
    acc.worst_violation = std::max(acc.worst_violation, r.worst_violation);
    for (std::size_t m = 0; m < r.eps.size(); ++m) acc.floor_slack = std::min(acc.floor_slack, r.min_values[m] - r.eps[m]);
}

void push_ladder_checks(ExperimentOutcome& out, const LadderChecks& acc, double tol_cmp) {
    out.checks.push_back(check_le("ladder_ordering", "adjacent ladder rungs ordered (max of u_{m+1} - u_m)",
                                  acc.worst_violation, tol_cmp));
    out.checks.push_back(check_ge("ladder_floor", "every rung stays above its eps floor (min of u_eps - eps)",
                                  acc.floor_slack, -1e-10));
}

LadderOptions unchecked(LadderOptions o) {
    o.check_ordering = false;
    return o;
}

LadderReport ladder_for(const ProblemSpec& spec, const ExperimentContext& ctx, int rungs, int refine, int stride) {
    const auto grid = build_grid(ctx.disc.n_cells * refine);
    const auto times = time_grid_to(0.0, spec.T, ctx.disc.dt / (refine * refine));
    auto options = unchecked(ctx.ladder);
    options.rungs = rungs;
    return run_ladder(spec, grid, times, options, scheme_for(ctx, stride));
}

double spread_of_last_three(const std::vector<double>& s) {
    const std::size_t n = s.size();
    const double hi = std::max({s[n - 1], s[n - 2], s[n - 3]});
    const double lo = std::min({s[n - 1], s[n - 2], s[n - 3]});
    return hi > 0.0 ? (hi - lo) / hi : 0.0;
}

/// Verdict stability under two more rungs, and optionally under h/2, dt/4.
void push_stability_checks(ExperimentOutcome& out, const ProblemSpec& spec, const ExperimentContext& ctx,
                           const LadderReport& base, LadderChecks& acc) {
    const auto more = ladder_for(spec, ctx, ctx.ladder.rungs + 2, 1, ctx.disc.store_stride);
    accumulate(acc, more);
    out.checks.push_back(check_true("ladder_rungs_stable", "verdict unchanged with two more rungs",
                                    more.verdict == base.verdict));
    out.details["ladder_more_rungs_verdict"] = verdict_name(more.verdict);
    if (ctx.check_refinement) {
        const auto fine = ladder_for(spec, ctx, ctx.ladder.rungs, 2, ctx.disc.store_stride * 4);
        accumulate(acc, fine);
        out.checks.push_back(check_true("ladder_refinement_stable", "verdict unchanged under h/2, dt/4",
                                        fine.verdict == base.verdict));
        out.details["ladder_refined_verdict"] = verdict_name(fine.verdict);
    }
}

nlohmann::json vector_json(const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const double x : v) a.push_back(x);
    return a;
}

}  // namespace

Check check_le(std::string id, std::string description, double measured, double threshold) {
    return make_check(std::move(id), std::move(description), measured, threshold, "<=", measured <= threshold);
}
Check check_lt(std::string id, std::string description, double measured, double threshold) {
    return make_check(std::move(id), std::move(description), measured, threshold, "<", measured < threshold);
}
Check check_ge(std::string id, std::string description, double measured, double threshold) {
    return make_check(std::move(id), std::move(description), measured, threshold, ">=", measured >= threshold);
}
Check check_gt(std::string id, std::string description, double measured, double threshold) {
    return make_check(std::move(id), std::move(description), measured, threshold, ">", measured > threshold);
}
Check check_true(std::string id, std::string description, bool value) {
    return make_check(std::move(id), std::move(description), value ? 1.0 : 0.0, 1.0, "==", value);
}

bool ExperimentOutcome::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check& ExperimentOutcome::check(std::string_view id) const {
    for (const auto& c : checks) {
        if (c.id == id) return c;
    }
    throw std::out_of_range("no check '" + std::string(id) + "' in " + name);
}

void Discretization::validate() const {
    if (n_cells < 4) throw ConfigError("grid.n_cells must be >= 4");
    if (!(dt > 0.0)) throw ConfigError("grid.dt must be > 0");
    if (store_stride < 1) throw ConfigError("grid.store_stride must be >= 1");
}

void write_outcome(ExperimentOutcome& outcome, const ExperimentContext& ctx) {
    const auto path = artifact(outcome, ctx, "outcome.json");
    if (!path.empty()) write_json(path, to_json(outcome));
}

ExperimentOutcome run_comparison(const ProblemSpec& a, const ProblemSpec& b, const ExperimentContext& ctx,
                                 const std::string& name) {
    ctx.disc.validate();
    ExperimentOutcome out;
    out.name = name;
    out.spec_summary = a.summary() + " | " + b.summary();
    const auto grid = build_grid(ctx.disc.n_cells);
    a.validate(grid);
    b.validate(grid);
    require(out, "same_data", "specs agree except for the initial datum",
            a.p == b.p && a.l == b.l && a.T == b.T && a.c.describe() == b.c.describe() &&
                a.k.describe() == b.k.describe());

    const auto ua = initial_values(a, grid);
    const auto ub = initial_values(b, grid);
    const bool a_below = std::equal(ua.begin(), ua.end(), ub.begin(), [](double x, double y) { return x <= y; });
    const bool b_below = std::equal(ua.begin(), ua.end(), ub.begin(), [](double x, double y) { return x >= y; });
    require(out, "ordered_data", "initial data are pointwise ordered", a_below || b_below);
    const bool swapped = !a_below;
    const auto& lower = swapped ? b : a;
    const auto& upper = swapped ? a : b;
    const auto& ul = swapped ? ub : ua;
    const auto& uu = swapped ? ua : ub;
    const double min_data = std::min(*std::min_element(ul.begin(), ul.end()), *std::min_element(uu.begin(), uu.end()));
    require(out, "positivity_if_sublinear", "l >= 1, or both data strictly positive", a.l >= 1.0 || min_data > 0.0);

    const auto times = time_grid_to(0.0, a.T, ctx.disc.dt);
    const auto scheme = scheme_for(ctx, ctx.disc.store_stride);
    const auto lo = solve(lower, grid, times, 0.0, scheme);
    const auto hi = solve(upper, grid, times, 0.0, scheme);
    const double violation = ordering_violation(lo, hi);
    out.checks.push_back(check_le("ordering", "lower solution stays below the upper one (max of u_lo - u_hi)",
                                  violation, ctx.ladder.tol_cmp));
    out.details["swapped"] = swapped;
    out.details["max_lower_minus_upper"] = violation;
    if (auto p = artifact(out, ctx, "lower.csv"); !p.empty()) write_trajectory_csv(p, lo);
    if (auto p = artifact(out, ctx, "upper.csv"); !p.empty()) write_trajectory_csv(p, hi);
    write_outcome(out, ctx);
    return out;
}

std::vector<std::pair<ProblemSpec, ProblemSpec>> comparison_suite() {
    auto spec = [](double p, double l, const char* c, const char* k, const char* u0, double T) {
        ProblemSpec s;
        s.p = p;
        s.l = l;
        s.c = parse_coefficient(c);
        s.k = parse_kernel(k);
        s.u0 = parse_profile(u0);
        s.T = T;
        return s;
    };
    auto pair = [&](double p, double l, const char* c, const char* k, const char* ua, const char* ub) {
        return std::make_pair(spec(p, l, c, k, ua, 0.2), spec(p, l, c, k, ub, 0.2));
    };
    return {
        pair(2, 2, "const(1)", "const(1)", "0.5", "1"),
        pair(1, 1, "const(1)", "const(1)", "0", "bump(0.5, 0.25, 1)"),
        pair(2, 1.5, "const(2)", "const(0.5)", "cos(0.5, 0.3)", "cos(1, 0.3)"),
        pair(1, 2, "const(1)", "const(1)", "poly(0, 1)", "poly(0.2, 1)"),
        pair(3, 1, "sep(poly(1, 1), const(1))", "sep(1, 1, poly(1, -0.5), const(1))", "0.2",
             "poly(0.2, 0, 0.5)"),
        pair(2, 2, "const(1)", "const(1)", "cos(1, 0.5)", "cos(1, 0.5)"),
        pair(2, 1, "const(1)", "const(1)", "poly(0.3, 0, 0.2)", "0.3"),
        pair(2, 0.5, "const(1)", "const(1)", "0.2", "0.4"),
        pair(0.5, 0.75, "const(1)", "const(1)", "0.5", "1"),
        pair(1, 0.5, "const(1)", "sep(1, 2, const(1), poly(1, 1))", "pwl(0, 0.1, 1, 0.3)", "pwl(0, 0.2, 1, 0.5)"),
    };
}

ExperimentOutcome run_positivity(const ProblemSpec& spec, const ExperimentContext& ctx) {
    ctx.disc.validate();
    ExperimentOutcome out;
    out.name = "positivity";
    out.spec_summary = spec.summary();
    const auto grid = build_grid(ctx.disc.n_cells);
    spec.validate(grid);
    require(out, "nontrivial_data", "u0 is a nontrivial function", range_of(spec.u0, grid).max > 0.0);
    const auto times = time_grid_to(0.0, spec.T, ctx.disc.dt);
    require(out, "absorption", "p >= 1 or c == 0",
            spec.p >= 1.0 || sample_range(spec.c, grid, 0.0, spec.T).max == 0.0);

    const auto traj = solve(spec, grid, times, 0.0, scheme_for(ctx, 1));
    double min_after = std::numeric_limits<double>::infinity();
    double min_endpoints = std::numeric_limits<double>::infinity();
    for (std::size_t s = 1; s < traj.n_slices(); ++s) {
        const auto u = traj.slice(s);
        min_after = std::min(min_after, *std::min_element(u.begin(), u.end()));
        min_endpoints = std::min({min_endpoints, u.front(), u.back()});
    }
    const auto u0 = traj.slice(0);
    out.details["initial_min"] = *std::min_element(u0.begin(), u0.end());
    out.details["min_endpoints_after_first_step"] = min_endpoints;
    out.checks.push_back(check_gt("positivity", "min over all nodes for t >= dt", min_after, 0.0));
    write_thinned(out, ctx, "trajectory.csv", traj);
    write_outcome(out, ctx);
    return out;
}

ExperimentOutcome run_nonuniqueness(const ProblemSpec& spec, const ExperimentContext& ctx,
                                    const LayerSubParams& start) {
    ctx.disc.validate();
    ExperimentOutcome out;
    out.name = "nonuniqueness";
    out.spec_summary = spec.summary();
    const auto grid = build_grid(ctx.disc.n_cells);
    spec.validate(grid);
    require(out, "zero_data", "u0 == 0", zero_data(spec, grid));
    require(out, "exponents", "l < min(1, p)", spec.l < std::min(1.0, spec.p));
    require(out, "kernel_positive", "k > 0 at every sampled point", sample_range(spec.k, grid, 0.0, spec.T).min > 0.0);

    const auto times = time_grid_to(0.0, spec.T, ctx.disc.dt);
    const auto report = run_ladder(spec, grid, times, unchecked(ctx.ladder), scheme_for(ctx, 1));
    LadderChecks acc;
    accumulate(acc, report);

    out.checks.push_back(check_true("ladder_nontrivial", "ladder verdict is nontrivial",
                                    report.verdict == LadderVerdict::nontrivial));
    out.checks.push_back(check_lt("ladder_spread", "relative spread of the last three final sup norms",
                                  spread_of_last_three(report.final_sup_norms), ctx.ladder.stabilize_rel));
    push_stability_checks(out, spec, ctx, report, acc);

    const auto shrink = shrink_to_admissible(build_layer_sub(spec, start), spec, grid, times, ctx.classify);
    out.checks.push_back(check_true("barrier_certified", "layer_sub certified by shrink_to_admissible", shrink.certified));
    out.checks.push_back(check_gt("barrier_margin", "margin of the certified layer_sub", shrink.report.sub_margin, 0.0));

    double domination = std::numeric_limits<double>::infinity();
    std::vector<std::string> certs;
    if (shrink.certified) {
        const auto& sub = *shrink.candidate;
        domination = -std::numeric_limits<double>::infinity();
        for (const auto& traj : report.trajectories) {
            domination = std::max(domination, barrier_violation(traj, sub, +1.0, sub.t_begin(), sub.t_end()));
        }
        if (auto p = artifact(out, ctx, "layer_sub.json"); !p.empty()) {
            write_json(p, to_json(sub, shrink.report));
            certs.push_back("layer_sub.json");
        }
        // The boundary ratio flux / integral must shrink toward the start of the layer.
        double last = -std::numeric_limits<double>::infinity();
        bool monotone = true;
        for (const auto& pt : shrink.report.boundary_trace) {
            if (!(pt.integral > 0.0)) continue;
            const double ratio = pt.flux / pt.integral;
            if (ratio < last * (1.0 - 1e-12)) monotone = false;
            last = ratio;
        }
        out.details["boundary_ratio_monotone"] = monotone;
        out.details["barrier"] = to_json(sub);
    }
    out.checks.push_back(check_le("rungs_dominate_barrier", "max of subsolution - u_eps over rungs and its time range",
                                  domination, ctx.ladder.tol_cmp));
    push_ladder_checks(out, acc, ctx.ladder.tol_cmp);

    out.details["ladder"] = to_json(report, certs);
    if (auto p = artifact(out, ctx, "ladder.json"); !p.empty()) write_json(p, to_json(report, certs));
    write_thinned(out, ctx, "last_rung.csv", report.trajectories.back());
    write_outcome(out, ctx);
    return out;
}

ExperimentOutcome run_trivial_uniqueness(const ProblemSpec& spec, const ExperimentContext& ctx,
                                         const StrictSuperParams& start, const std::vector<double>& eps_list) {
    ctx.disc.validate();
    ExperimentOutcome out;
    out.name = "trivial-uniqueness";
    out.spec_summary = spec.summary();
    const auto grid = build_grid(ctx.disc.n_cells);
    spec.validate(grid);
    require(out, "zero_data", "u0 == 0", zero_data(spec, grid));
    require(out, "exponents", "p < l < 1", spec.p < spec.l && spec.l < 1.0);
    require(out, "absorption_positive", "inf c > 0", sample_range(spec.c, grid, 0.0, spec.T).min > 0.0);
    if (eps_list.empty()) throw ConfigError("trivial.eps_list must not be empty");

    const auto times = time_grid_to(0.0, spec.T, ctx.disc.dt);
    const auto stride = ctx.disc.store_stride;
    const auto report = run_ladder(spec, grid, times, unchecked(ctx.ladder), scheme_for(ctx, stride));
    LadderChecks acc;
    accumulate(acc, report);
    out.checks.push_back(
        check_true("ladder_trivial", "ladder verdict is trivial", report.verdict == LadderVerdict::trivial));
    out.checks.push_back(check_le("ladder_limit", "extrapolated final sup norm", report.extrapolated_final_sup,
                                  ctx.ladder.tol_trivial));
    push_stability_checks(out, spec, ctx, report, acc);

    const auto direct = solve(spec, grid, times, 0.0, scheme_for(ctx, stride));
    auto params = start;
    std::vector<double> sups;
    std::vector<std::string> certs;
    bool all_certified = true;
    double below = -std::numeric_limits<double>::infinity();
    nlohmann::json barriers = nlohmann::json::array();
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        params.eps = eps_list[i];
        const auto shrink = shrink_to_admissible(build_strict_super(spec, params), spec, grid, times, ctx.classify);
        if (!shrink.certified) {
            all_certified = false;
            sups.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const auto& bar = *shrink.candidate;
        // Later rungs reuse the first certified support so the family scales exactly with eps.
        params = std::get<StrictSuperParams>(bar.params());
        sups.push_back(bar.sup_value());
        below = std::max(below, barrier_violation(direct, bar, -1.0, 0.0, spec.T));
        barriers.push_back(to_json(bar));
        const auto file = fmt::format("strict_super_{}.json", i);
        if (auto p = artifact(out, ctx, file); !p.empty()) {
            write_json(p, to_json(bar, shrink.report));
            certs.push_back(file);
        }
    }
    out.checks.push_back(check_true("barriers_certified", "strict_super certified at every eps", all_certified));
    double proportional = 0.0;
    for (std::size_t i = 1; i < sups.size(); ++i) {
        const double expect = sups[i - 1] * eps_list[i] / eps_list[i - 1];
        proportional = std::max(proportional, std::fabs(sups[i] - expect) / expect);
    }
    if (!all_certified) proportional = std::numeric_limits<double>::infinity();
    out.checks.push_back(check_le("barrier_sup_proportional", "relative deviation of sup barrier from eps scaling",
                                  proportional, 1e-9));
    out.checks.push_back(check_le("direct_below_barriers", "max of u_direct - barrier over every barrier", below,
                                  ctx.ladder.tol_cmp));
    push_ladder_checks(out, acc, ctx.ladder.tol_cmp);

    out.details["barrier_sups"] = vector_json(sups);
    out.details["barriers"] = barriers;
    out.details["ladder"] = to_json(report, certs);
    out.details["direct_sup"] = direct.max_value();
    if (auto p = artifact(out, ctx, "ladder.json"); !p.empty()) write_json(p, to_json(report, certs));
    write_thinned(out, ctx, "direct.csv", direct);
    write_outcome(out, ctx);
    return out;
}

ExperimentOutcome run_threshold_scan(const ProblemSpec& base, double c0, std::vector<double> ratios,
                                     const ExperimentContext& ctx) {
    ctx.disc.validate();
    ExperimentOutcome out;
    out.name = "threshold-scan";
    out.spec_summary = base.summary();
    const auto grid = build_grid(ctx.disc.n_cells);
    require(out, "critical_exponents", "l = p in (0, 1)", base.l == base.p && base.p > 0.0 && base.p < 1.0);
    require(out, "absorption_positive", "c0 > 0", c0 > 0.0);
    require(out, "zero_data", "u0 == 0", zero_data(base, grid));
    require(out, "ratios_positive", "every ratio k0/c0 is positive",
            !ratios.empty() && std::all_of(ratios.begin(), ratios.end(), [](double r) { return r > 0.0; }));
    std::sort(ratios.begin(), ratios.end());

    const double l = base.l;
    const auto times = time_grid_to(0.0, base.T, ctx.disc.dt);
    const LayerSubParams layer{1.0, 1.0 / (1.0 - l), 2.0 / (1.0 - l), 0.5, 0.0, std::min(0.1, base.T / 2.0)};
    const StrictSuperParams strict{1.0, (1.0 - l) / 2.0, 0.1, 0.5};

    std::vector<ScanRow> rows;
    LadderChecks acc;
    nlohmann::json per_ratio = nlohmann::json::array();
    for (const double ratio : ratios) {
        auto spec = base;
        spec.c = CoefficientField::constant(c0);
        spec.k = KernelField::constant(ratio * c0);
        spec.validate(grid);
        const auto report = run_ladder(spec, grid, times, unchecked(ctx.ladder), scheme_for(ctx, ctx.disc.store_stride));
        accumulate(acc, report);
        const auto a = search_amplitude(build_layer_sub(spec, layer), spec, grid, times, 1e-6, 1e2, 41, ctx.classify);
        const auto b = search_amplitude(build_strict_super(spec, strict), spec, grid, times, 1e-8, 1e2, 51, ctx.classify);
        ScanRow row{ratio, report.verdict, report.final_sup_norms.back(), a.found, b.found, false};
        row.barrier_ok = (row.verdict == LadderVerdict::nontrivial && a.found) ||
                         (row.verdict == LadderVerdict::trivial && b.found);
        rows.push_back(row);
        per_ratio.push_back({{"ratio", ratio},
                             {"verdict", verdict_name(report.verdict)},
                             {"final_sup_norms", vector_json(report.final_sup_norms)},
                             {"extrapolated_final_sup", report.extrapolated_final_sup},
                             {"layer_sub_amplitudes", a.found ? nlohmann::json{a.lo, a.hi} : nlohmann::json(nullptr)},
                             {"strict_super_amplitudes", b.found ? nlohmann::json{b.lo, b.hi} : nlohmann::json(nullptr)}});
    }

    auto rank = [](LadderVerdict v) {
        return v == LadderVerdict::trivial ? 0 : v == LadderVerdict::inconclusive ? 1 : 2;
    };
    bool monotone = true;
    int windows = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rank(rows[i].verdict) < rank(rows[i - 1].verdict)) monotone = false;
        if (rows[i].verdict == LadderVerdict::inconclusive &&
            (i == 0 || rows[i - 1].verdict != LadderVerdict::inconclusive)) {
            ++windows;
        }
    }
    const int unbacked = static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) {
        return r.verdict != LadderVerdict::inconclusive && !r.barrier_ok;
    }));
    out.checks.push_back(check_true("monotone", "verdicts nondecreasing from trivial to nontrivial in k0/c0", monotone));
    out.checks.push_back(check_le("inconclusive_windows", "number of inconclusive windows", windows, 1.0));
    out.checks.push_back(check_true("small_ratio_trivial", "smallest ratio is trivial",
                                    rows.front().verdict == LadderVerdict::trivial));
    out.checks.push_back(check_true("large_ratio_nontrivial", "largest ratio is nontrivial",
                                    rows.back().verdict == LadderVerdict::nontrivial));
    out.checks.push_back(check_le("barriers_back_verdicts", "decisive verdicts without a matching certified barrier",
                                  unbacked, 0.0));
    push_ladder_checks(out, acc, ctx.ladder.tol_cmp);
    out.details["rows"] = per_ratio;
    if (auto p = artifact(out, ctx, "scan.csv"); !p.empty()) write_scan_csv(p, rows);
    write_outcome(out, ctx);
    return out;
}

ExperimentOutcome run_extinction(const ProblemSpec& spec, const ExperimentContext& ctx, ExtinctionParams start,
                                 double margin, double mu_max) {
    ctx.disc.validate();
    ExperimentOutcome out;
    out.name = "extinction";
    out.spec_summary = spec.summary();
    const auto grid = build_grid(ctx.disc.n_cells);
    spec.validate(grid);
    require(out, "exponents", "p <= l < 1", spec.p <= spec.l && spec.l < 1.0);
    require(out, "absorption_positive", "inf c > 0", sample_range(spec.c, grid, 0.0, spec.T).min > 0.0);

    if (!(start.mu > 0.0)) start.mu = search_decay_rate(start, spec, grid, mu_max, ctx.classify);
    const auto barrier = build_extinction_barrier(spec, start);
    const double t_ext = barrier.t_end();
    if (!(spec.T >= t_ext + margin)) {
        throw ConfigError(fmt::format("problem.T = {} must reach the extinction time {} plus margin {}", spec.T, t_ext,
                                      margin));
    }
    const auto cert_times = make_time_grid(0.0, t_ext / 256.0, 256);
    const auto rep = classify_candidate(barrier, spec, grid, cert_times, ctx.classify);
    out.checks.push_back(check_true("barrier_certified", "extinction barrier is a strict supersolution", rep.strict));

    const auto times = time_grid_to(0.0, spec.T, ctx.disc.dt);
    const auto initial = grid.sample([&](double x) { return barrier.value(x, 0.0); });
    const auto traj = solve_from(initial, spec, grid, times, 0.0, scheme_for(ctx, 1));
    const double sup0 = *std::max_element(initial.begin(), initial.end());
    double late = 0.0;
    for (std::size_t s = 0; s < traj.n_slices(); ++s) {
        if (traj.time(s) >= t_ext + margin) late = std::max(late, traj.sup_at(s));
    }
    const double dominated = barrier_violation(traj, barrier, -1.0, 0.0, spec.T);
    out.checks.push_back(check_le("extinct", "sup u for t >= xi0/mu + margin", late, ctx.ladder.tol_trivial));
    out.checks.push_back(check_le("extinct_relative", "sup u / sup u0 for t >= xi0/mu + margin", late / sup0, 1e-6));
    out.checks.push_back(check_le("below_barrier", "max of u - barrier over the run", dominated, ctx.ladder.tol_cmp));
    out.details["mu"] = start.mu;
    out.details["extinction_time"] = t_ext;
    out.details["initial_sup"] = sup0;
    out.details["barrier"] = to_json(barrier);
    if (auto p = artifact(out, ctx, "extinction_barrier.json"); !p.empty()) write_json(p, to_json(barrier, rep));
    write_thinned(out, ctx, "trajectory.csv", traj);
    write_outcome(out, ctx);
    return out;
}

ExperimentOutcome run_uniqueness_probe(const ProblemSpec& spec, const ExperimentContext& ctx, double tol) {
    ctx.disc.validate();
    ExperimentOutcome out;
    out.name = "uniqueness-probe";
    out.spec_summary = spec.summary();
    const auto grid = build_grid(ctx.disc.n_cells);
    spec.validate(grid);
    const double min_data = range_of(spec.u0, grid).min;
    const bool case_linear_boundary = spec.l >= 1.0;
    const bool case_superlinear_absorption = spec.l < 1.0 && spec.p >= 1.0 && min_data > 0.0;
    const bool case_sublinear = std::max(spec.p, spec.l) < 1.0 && min_data > 0.0;
    require(out, "uniqueness_case",
            "l >= 1; or l < 1 <= p with positive data; or max(p, l) < 1 with positive solution",
            case_linear_boundary || case_superlinear_absorption || case_sublinear);

    const auto times = time_grid_to(0.0, spec.T, ctx.disc.dt);
    const int stride = ctx.disc.store_stride;
    const auto direct = solve(spec, grid, times, 0.0, scheme_for(ctx, stride));
    if (case_sublinear) {
        out.checks.push_back(check_gt("solution_positive", "min of the direct solution", direct.min_value(), 0.0));
    }

    const double eps1 = 1e-3;
    auto picard = ctx.picard;
    picard.store_stride = stride;
    const auto coarse = picard_solve(spec, grid, times, eps1, picard).trajectory;
    const auto fine = picard_solve(spec, grid, times, eps1 / 2.0, picard).trajectory;
    Trajectory extrapolated = fine;
    for (std::size_t i = 0; i < extrapolated.values.size(); ++i) {
        extrapolated.values[i] = 2.0 * fine.values[i] - coarse.values[i];
    }
    extrapolated.eps = 0.0;

    auto options = unchecked(ctx.ladder);
    options.eps0 = eps1;
    options.rungs = 3;
    const auto ladder = run_ladder(spec, grid, times, options, scheme_for(ctx, stride));
    const auto& limit = ladder.trajectories.back();

    out.checks.push_back(check_le("direct_vs_picard", "sup |u_direct - u_picard(eps -> 0)|",
                                  sup_difference(direct, extrapolated), tol));
    out.checks.push_back(check_le("direct_vs_ladder", "sup |u_direct - u_ladder|", sup_difference(direct, limit), tol));
    out.checks.push_back(check_le("picard_vs_ladder", "sup |u_picard(eps -> 0) - u_ladder|",
                                  sup_difference(extrapolated, limit), tol));
    out.checks.push_back(check_le("ladder_ordering", "adjacent ladder rungs ordered", ladder.worst_violation,
                                  ctx.ladder.tol_cmp));
    if (auto p = artifact(out, ctx, "direct.csv"); !p.empty()) write_trajectory_csv(p, direct);
    if (auto p = artifact(out, ctx, "picard.csv"); !p.empty()) write_trajectory_csv(p, extrapolated);
    write_outcome(out, ctx);
    return out;
}

ExperimentOutcome oracle_heat(const ExperimentContext& ctx, double T) {
    ExperimentOutcome out;
    out.name = "oracle-heat";
    ProblemSpec spec;
    spec.c = CoefficientField::constant(0.0);
    spec.k = KernelField::constant(0.0);
    spec.u0 = Profile::cosine({1.0, 1.0});
    spec.T = T;
    out.spec_summary = spec.summary();
    const double decay = std::exp(-pi * pi * T);

    auto run = [&](int n, double dt) {
        const auto grid = build_grid(n);
        const auto traj = solve(spec, grid, time_grid_to(0.0, T, dt), 0.0, scheme_for(ctx, 1 << 30));
        const auto u = traj.final_slice();
        double err = 0.0, err_semi = 0.0;
        const double lambda_h = 2.0 * (1.0 - std::cos(pi * grid.h())) / (grid.h() * grid.h());
        const double semi = std::exp(-lambda_h * T);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double mode = std::cos(pi * grid.node(i));
            err = std::max(err, std::fabs(u[i] - 1.0 - decay * mode));
            err_semi = std::max(err_semi, std::fabs((semi - decay) * mode));
        }
        return std::make_pair(ConvergenceRow{grid.h(), dt, err, 0.0}, err_semi);
    };
    auto table = [&](std::vector<std::pair<int, double>> cases, std::vector<double>* semi) {
        std::vector<ConvergenceRow> rows;
        for (const auto& [n, dt] : cases) {
            auto [row, s] = run(n, dt);
            if (!rows.empty()) {
                const auto& prev = rows.back();
                const double ratio = prev.h != row.h ? prev.h / row.h : prev.dt / row.dt;
                row.order = std::log(prev.sup_error / row.sup_error) / std::log(ratio);
            }
            rows.push_back(row);
            if (semi != nullptr) semi->push_back(s);
        }
        return rows;
    };
    std::vector<double> semi;
    const auto space = table({{50, 1e-5}, {100, 1e-5}, {200, 1e-5}}, &semi);
    const auto time = table({{400, 4e-3}, {400, 2e-3}, {400, 1e-3}}, nullptr);
    out.checks.push_back(check_ge("spatial_order", "min observed order under h-refinement (n = 50, 100, 200)",
                                  std::min(space[1].order, space[2].order), 1.8));
    out.checks.push_back(check_ge("temporal_order", "min observed order under dt-refinement (dt = 4e-3, 2e-3, 1e-3)",
                                  std::min(time[1].order, time[2].order), 0.9));
    out.details["spatial_orders"] = {space[1].order, space[2].order};
    out.details["temporal_orders"] = {time[1].order, time[2].order};
    out.details["semidiscrete_errors"] = vector_json(semi);
    out.details["semidiscrete_orders"] = {std::log2(semi[0] / semi[1]), std::log2(semi[1] / semi[2])};
    std::vector<ConvergenceRow> all = space;
    all.insert(all.end(), time.begin(), time.end());
    if (auto p = artifact(out, ctx, "convergence.csv"); !p.empty()) write_convergence_csv(p, all);
    write_outcome(out, ctx);
    return out;
}

ExperimentOutcome oracle_absorption(const ExperimentContext& ctx, double dt) {
    ExperimentOutcome out;
    out.name = "oracle-absorption";
    ProblemSpec spec;
    spec.p = 0.5;
    spec.c = CoefficientField::constant(1.0);
    spec.k = KernelField::constant(0.0);
    spec.u0 = Profile::constant(1.0);
    spec.T = 1.5;
    out.spec_summary = spec.summary();
    const auto grid = build_grid(16);
    const auto traj = solve(spec, grid, time_grid_to(0.0, spec.T, dt), 0.0, scheme_for(ctx, 1));
    double rel = 0.0;
    for (std::size_t s = 0; s < traj.n_slices(); ++s) {
        const double t = traj.time(s);
        const double exact = (1.0 - t / 2.0) * (1.0 - t / 2.0);
        for (const double v : traj.slice(s)) rel = std::max(rel, std::fabs(v - exact) / exact);
    }
    out.checks.push_back(check_le("relative_error", "max relative error vs (1 - t/2)^2 on [0, 1.5]", rel, 1e-3));
    out.details["dt"] = dt;
    write_outcome(out, ctx);
    return out;
}

ExperimentOutcome oracle_kernel(const ExperimentContext& ctx) {
    ExperimentOutcome out;
    out.name = "oracle-kernel";
    const NeumannKernel kernel;
    out.spec_summary = fmt::format("n_modes = {}, t_min = {}", kernel.n_modes(), kernel.t_min());
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    double asym = 0.0, norm = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = std::fmod(0.5 + i * golden, 1.0);
        const double y = std::fmod(0.25 + i * std::numbers::sqrt2, 1.0);
        const double t = kernel.t_min() * std::pow(1.0 / kernel.t_min(), std::fmod(i * 0.7548776662466927, 1.0));
        asym = std::max(asym, std::fabs(kernel_eval(kernel, x, y, t) - kernel_eval(kernel, y, x, t)));
        const double mass = integrate_pieces([&](double z) { return kernel_eval(kernel, x, z, t); }, 0.0, 1.0, {},
                                             4 * kernel.n_modes());
        norm = std::max(norm, std::fabs(mass - 1.0));
    }
    out.checks.push_back(check_le("symmetry", "max |G(x,y;t) - G(y,x;t)| over 100 samples", asym, 0.0));
    out.checks.push_back(check_le("normalization", "max |int G(x,y;t) dy - 1| over 100 samples", norm, 1e-10));
    out.details["t_min"] = kernel.t_min();
    write_outcome(out, ctx);
    return out;
}

ExperimentOutcome oracle_crossval(const ExperimentContext& ctx) {
    ExperimentOutcome out;
    out.name = "oracle-crossval";
    ProblemSpec spec;
    spec.p = 2.0;
    spec.l = 2.0;
    spec.c = CoefficientField::constant(1.0);
    spec.k = KernelField::constant(1.0);
    spec.u0 = Profile::cosine({1.0, 0.5});
    spec.T = 0.05;
    out.spec_summary = spec.summary();
    const double eps = 1e-3;

    auto run = [&](int n, double dt, const std::string& tag) {
        const auto grid = build_grid(n);
        const auto times = time_grid_to(0.0, spec.T, dt);
        auto picard = ctx.picard;
        if (picard.M_bound <= 0.0) {
            try {
                const auto u = regularize_initial(spec, grid, eps);
                const auto w = build_exp_super(spec, grid, *std::max_element(u.begin(), u.end()), eps);
                picard.M_bound = w.sup_value();
                out.details["M_bound_source_" + tag] = "exp_super";
            } catch (const ConstructionError&) {
                out.details["M_bound_source_" + tag] = "2 sup u0_eps";
            }
        }
        const auto fd = solve(spec, grid, times, eps, scheme_for(ctx, 1));
        const auto pr = picard_solve(spec, grid, times, eps, picard);
        out.details["picard_bound_respected_" + tag] = pr.bound_respected;
        out.details["picard_iterations_" + tag] = pr.history.size();
        if (auto p = artifact(out, ctx, "fd_" + tag + ".csv"); !p.empty()) write_trajectory_csv(p, thin(fd, 10));
        if (auto p = artifact(out, ctx, "picard_" + tag + ".csv"); !p.empty()) {
            write_trajectory_csv(p, thin(pr.trajectory, 10));
        }
        return sup_difference(fd, pr.trajectory);
    };
    const double reference = run(100, 1e-4, "reference");
    const double refined = run(200, 2.5e-5, "refined");
    out.checks.push_back(check_le("reference_discrepancy", "sup |fd - picard| at n = 100, dt = 1e-4", reference, 5e-3));
    out.checks.push_back(check_lt("refined_discrepancy", "sup |fd - picard| at n = 200, dt = 2.5e-5 (vs reference)",
                                  refined, reference));
    write_outcome(out, ctx);
    return out;
}

}  // namespace nlheat
