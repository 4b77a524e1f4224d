#include "nlheat/cli.hpp"

#include "nlheat/config.hpp"
#include "nlheat/error.hpp"
#include "nlheat/io.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace nlheat {

namespace {

// Preset used by `experiment NAME` when neither a config nor a preset is given.
const std::map<std::string, std::string, std::less<>> default_presets = {
    {"comparison", "comparison"},
    {"positivity", "positivity"},
    {"nonuniqueness", "nonuniqueness-a"},
    {"trivial-uniqueness", "trivial-uniqueness-a"},
    {"threshold-scan", "threshold-scan"},
    {"extinction", "extinction"},
    {"uniqueness-probe", "uniqueness-probe-a"},
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunConfig load(const Request& r, bool needs_problem) {
    RunConfig base;
    auto preset = r.preset;
    if (!preset && !r.config && r.command == "experiment") {
        if (const auto it = default_presets.find(r.subject); it != default_presets.end()) preset = it->second;
    }
    if (preset) base = parse_config(preset_text(*preset));
    if (r.config) base = parse_config(read_file(*r.config), std::move(base));
    if (needs_problem) {
        base.validate();
    } else {
        base.given.insert({"problem.p", "problem.l", "problem.c", "problem.k", "problem.u0", "problem.T"});
        base.validate();
    }
    return base;
}

int report(const ExperimentOutcome& o, std::ostream& log) {
    for (const auto& c : o.checks) {
        log << fmt::format("{} {}: {} {} {} ({})\n", c.pass ? "PASS" : "FAIL", c.id, c.measured, c.relation,
                           c.threshold, c.description);
    }
    log << fmt::format("{}: {}\n", o.name, o.pass() ? "pass" : "fail");
    return o.pass() ? exit_pass : exit_fail;
}

int run_solve(const RunConfig& cfg, const Request& r, std::ostream& log) {
    const auto grid = build_grid(cfg.ctx.disc.n_cells);
    const auto times = time_grid_to(0.0, cfg.problem.T, cfg.ctx.disc.dt);
    auto scheme = cfg.ctx.scheme;
    scheme.store_stride = cfg.ctx.disc.store_stride;
    const auto traj = solve(cfg.problem, grid, times, cfg.solve_eps, scheme);
    const auto dir = r.out_dir / "solve";
    write_trajectory_csv(dir / "trajectory.csv", traj);
    write_json(dir / "summary.json", {{"spec", cfg.problem.summary()},
                                      {"eps", cfg.solve_eps},
                                      {"steps", times.n_steps},
                                      {"min", traj.min_value()},
                                      {"max", traj.max_value()},
                                      {"final_mass", mass(traj, traj.n_slices() - 1)}});
    log << fmt::format("solve: {} steps, u in [{}, {}]\n", times.n_steps, traj.min_value(), traj.max_value());
    return exit_pass;
}

int run_ladder_command(const RunConfig& cfg, const Request& r, std::ostream& log) {
    const auto grid = build_grid(cfg.ctx.disc.n_cells);
    const auto times = time_grid_to(0.0, cfg.problem.T, cfg.ctx.disc.dt);
    auto scheme = cfg.ctx.scheme;
    scheme.store_stride = cfg.ctx.disc.store_stride;
    auto options = cfg.ctx.ladder;
    options.check_ordering = false;
    const auto report = run_ladder(cfg.problem, grid, times, options, scheme);
    const auto dir = r.out_dir / "ladder";
    write_json(dir / "ladder.json", to_json(report));
    for (std::size_t m = 0; m < report.trajectories.size(); ++m) {
        write_trajectory_csv(dir / fmt::format("rung_{}.csv", m), report.trajectories[m]);
    }
    log << fmt::format("ladder: final sup norms [{}], verdict {}\n", fmt::join(report.final_sup_norms, ", "),
                       verdict_name(report.verdict));
    return report.worst_violation <= options.tol_cmp ? exit_pass : exit_fail;
}

int run_certify(const RunConfig& cfg, const Request& r, std::ostream& log) {
    const auto family = parse_family(r.subject);
    const auto grid = build_grid(cfg.ctx.disc.n_cells);
    auto times = time_grid_to(0.0, cfg.problem.T, cfg.ctx.disc.dt);
    const auto& spec = cfg.problem;
    std::optional<BarrierCandidate> candidate;
    switch (family) {
        case BarrierFamily::exp_super: {
            double M = cfg.exp_super_M();
            if (!(M > 0.0)) {
                const auto u0 = initial_values(spec, grid);
                M = std::max(1.0, 2.0 * (*std::max_element(u0.begin(), u0.end()) + cfg.solve_eps));
            }
            candidate = build_exp_super(spec, grid, M, cfg.solve_eps);
            break;
        }
        case BarrierFamily::layer_sub: candidate = build_layer_sub(spec, cfg.layer_params()); break;
        case BarrierFamily::strict_super: candidate = build_strict_super(spec, cfg.strict_params()); break;
        case BarrierFamily::extinction: {
            auto p = cfg.extinction_params();
            if (!(p.mu > 0.0)) p.mu = search_decay_rate(p, spec, grid, cfg.extinction_mu_max, cfg.ctx.classify);
            candidate = build_extinction_barrier(spec, p);
            times = make_time_grid(0.0, candidate->t_end() / 256.0, 256);
            break;
        }
    }
    auto options = cfg.ctx.classify;
    options.regularization = family == BarrierFamily::exp_super ? cfg.solve_eps : 0.0;
    bool certified = false;
    ResidualReport rep;
    if (cfg.shrink && family != BarrierFamily::exp_super) {
        auto s = shrink_to_admissible(*candidate, spec, grid, times, options);
        certified = s.certified;
        rep = s.report;
        if (s.candidate) candidate = *s.candidate;
    } else {
        rep = classify_candidate(*candidate, spec, grid, times, options);
        certified = family == BarrierFamily::layer_sub  ? rep.subsolution
                    : family == BarrierFamily::exp_super ? rep.supersolution
                                                         : rep.strict;
    }
    const auto dir = r.out_dir / fmt::format("certify-{}", family_name(family));
    write_json(dir / "certificate.json", to_json(*candidate, rep));
    log << fmt::format("certify {}: {} ({}), margin {}\n", family_name(family), certified ? "certified" : "not certified",
                       certification_name(rep.verdict), rep.margin);
    return certified ? exit_pass : exit_fail;
}

int run_experiment(const RunConfig& cfg, const Request& r, std::ostream& log) {
    auto ctx = cfg.ctx;
    ctx.out_dir = r.out_dir;
    const auto& s = r.subject;
    if (s == "comparison") {
        if (!cfg.comparison_u0_b) throw ConfigError("comparison.u0_b is required by the comparison experiment");
        auto b = cfg.problem;
        b.u0 = *cfg.comparison_u0_b;
        return report(run_comparison(cfg.problem, b, ctx), log);
    }
    if (s == "comparison-suite") {
        int status = exit_pass;
        int i = 0;
        for (const auto& [a, b] : comparison_suite()) {
            if (report(run_comparison(a, b, ctx, fmt::format("comparison-{}", i++)), log) != exit_pass) status = exit_fail;
        }
        return status;
    }
    if (s == "positivity") return report(run_positivity(cfg.problem, ctx), log);
    if (s == "nonuniqueness") return report(run_nonuniqueness(cfg.problem, ctx, cfg.layer_params()), log);
    if (s == "trivial-uniqueness") {
        return report(run_trivial_uniqueness(cfg.problem, ctx, cfg.strict_params(), cfg.trivial_eps), log);
    }
    if (s == "threshold-scan") return report(run_threshold_scan(cfg.problem, cfg.scan_c0, cfg.scan_ratios, ctx), log);
    if (s == "extinction") {
        return report(run_extinction(cfg.problem, ctx, cfg.extinction_params(), cfg.extinction_margin,
                                     cfg.extinction_mu_max),
                      log);
    }
    if (s == "uniqueness-probe") return report(run_uniqueness_probe(cfg.problem, ctx, cfg.probe_tol), log);
    throw ConfigError(fmt::format("unknown experiment '{}' (known: {})", s, fmt::join(experiment_names(), ", ")));
}

int run_oracle(const RunConfig& cfg, const Request& r, std::ostream& log) {
    auto ctx = cfg.ctx;
    ctx.out_dir = r.out_dir;
    if (r.subject == "heat") return report(oracle_heat(ctx), log);
    if (r.subject == "absorption") return report(oracle_absorption(ctx), log);
    if (r.subject == "kernel") return report(oracle_kernel(ctx), log);
    if (r.subject == "crossval") return report(oracle_crossval(ctx), log);
    throw ConfigError("unknown oracle '" + r.subject + "' (known: heat, absorption, kernel, crossval)");
}

void write_error(const Request& r, const Error& e, std::ostream& log) {
    nlohmann::json j = {{"kind", e.kind()}, {"message", e.what()}};
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) j["line"] = p->line();
    if (const auto* p = dynamic_cast<const LadderError*>(&e)) {
        j["rung"] = p->rung();
        j["cause"] = p->cause();
    }
    if (const auto* p = dynamic_cast<const NonconvergenceError*>(&e)) j["time_index"] = p->time_index();
    if (const auto* p = dynamic_cast<const PositivityError*>(&e)) j["time_index"] = p->time_index();
    log << fmt::format("error ({}): {}\n", e.kind(), e.what());
    try {
        write_json(r.out_dir / "error.json", j);
    } catch (const Error& inner) {
        log << "cannot write error.json: " << inner.what() << '\n';
    }
}

}  // namespace

std::vector<std::string> experiment_names() {
    return {"comparison",    "comparison-suite", "positivity", "nonuniqueness", "trivial-uniqueness",
            "threshold-scan", "extinction",      "uniqueness-probe"};
}

int dispatch(const Request& r, std::ostream& log) {
    try {
        if (r.command == "presets") {
            for (const auto& name : preset_names()) log << name << '\n';
            return exit_pass;
        }
        if (r.command == "solve") return run_solve(load(r, true), r, log);
        if (r.command == "ladder") return run_ladder_command(load(r, true), r, log);
        if (r.command == "certify") return run_certify(load(r, true), r, log);
        if (r.command == "experiment") {
            return run_experiment(load(r, r.subject != "comparison-suite"), r, log);
        }
        if (r.command == "oracle") return run_oracle(load(r, false), r, log);
        throw ConfigError("unknown command '" + r.command +
                          "' (known: solve, ladder, certify, experiment, oracle, presets)");
    } catch (const Error& e) {
        write_error(r, e, log);
        return exit_error;
    } catch (const std::exception& e) {
        write_error(r, Error(e.what()), log);
        return exit_error;
    }
}

}  // namespace nlheat
