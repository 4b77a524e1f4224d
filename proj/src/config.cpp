#include "nlheat/config.hpp"

#include "nlheat/error.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <charconv>
#include <functional>

namespace nlheat {

namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

int parse_int(std::string_view text) {
    int v = 0;
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError("expected an integer, got '" + std::string(t) + "'");
    }
    return v;
}

bool parse_bool(std::string_view text) {
    const auto t = trim(text);
    if (t == "true") return true;
    if (t == "false") return false;
    throw ConfigError("expected true or false, got '" + std::string(t) + "'");
}

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> v;
    auto t = trim(text);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
    while (!t.empty()) {
        const auto comma = t.find(',');
        v.push_back(parse_number(t.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        t = t.substr(comma + 1);
    }
    if (v.empty()) throw ConfigError("expected a comma-separated list of numbers");
    return v;
}

std::string unquote(std::string_view text) {
    auto t = trim(text);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
    return std::string(t);
}

Setter number(double RunConfig::*field) {
    return [field](RunConfig& c, std::string_view v) { c.*field = parse_number(v); };
}

template <typename S, typename T>
Setter member(S ExperimentContext::*section, T S::*field) {
    return [section, field](RunConfig& c, std::string_view v) {
        if constexpr (std::is_same_v<T, int>) {
            c.ctx.*section.*field = parse_int(v);
        } else if constexpr (std::is_same_v<T, bool>) {
            c.ctx.*section.*field = parse_bool(v);
        } else {
            c.ctx.*section.*field = parse_number(v);
        }
    };
}

Setter barrier_key(std::string name) {
    return [name](RunConfig& c, std::string_view v) { c.barrier[name] = parse_number(v); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        t["problem.p"] = [](RunConfig& c, std::string_view v) { c.problem.p = parse_number(v); };
        t["problem.l"] = [](RunConfig& c, std::string_view v) { c.problem.l = parse_number(v); };
        t["problem.T"] = [](RunConfig& c, std::string_view v) { c.problem.T = parse_number(v); };
        t["problem.c"] = [](RunConfig& c, std::string_view v) { c.problem.c = parse_coefficient(unquote(v)); };
        t["problem.k"] = [](RunConfig& c, std::string_view v) { c.problem.k = parse_kernel(unquote(v)); };
        t["problem.u0"] = [](RunConfig& c, std::string_view v) { c.problem.u0 = parse_profile(unquote(v)); };

        t["grid.n_cells"] = member(&ExperimentContext::disc, &Discretization::n_cells);
        t["grid.dt"] = member(&ExperimentContext::disc, &Discretization::dt);
        t["grid.store_stride"] = member(&ExperimentContext::disc, &Discretization::store_stride);

        t["solver.fp_tol"] = member(&ExperimentContext::scheme, &StepScheme::fp_tol);
        t["solver.fp_max"] = member(&ExperimentContext::scheme, &StepScheme::fp_max);
        t["solver.tol_pos"] = member(&ExperimentContext::scheme, &StepScheme::tol_pos);
        t["solver.u_floor"] = member(&ExperimentContext::scheme, &StepScheme::u_floor);
        t["solver.stiffness_limit"] = member(&ExperimentContext::scheme, &StepScheme::stiffness_limit);
        t["solver.eps"] = number(&RunConfig::solve_eps);

        t["ladder.eps0"] = member(&ExperimentContext::ladder, &LadderOptions::eps0);
        t["ladder.rungs"] = member(&ExperimentContext::ladder, &LadderOptions::rungs);
        t["ladder.tol_cmp"] = member(&ExperimentContext::ladder, &LadderOptions::tol_cmp);
        t["ladder.tol_trivial"] = member(&ExperimentContext::ladder, &LadderOptions::tol_trivial);
        t["ladder.stabilize_rel"] = member(&ExperimentContext::ladder, &LadderOptions::stabilize_rel);
        t["ladder.decay_ratio"] = member(&ExperimentContext::ladder, &LadderOptions::decay_ratio);

        t["picard.max_iter"] = member(&ExperimentContext::picard, &PicardOptions::max_iter);
        t["picard.tol"] = member(&ExperimentContext::picard, &PicardOptions::tol);
        t["picard.n_modes"] = member(&ExperimentContext::picard, &PicardOptions::n_modes);
        t["picard.slab_length"] = member(&ExperimentContext::picard, &PicardOptions::slab_length);
        t["picard.M_bound"] = member(&ExperimentContext::picard, &PicardOptions::M_bound);

        t["classify.tol"] = member(&ExperimentContext::classify, &ClassifyOptions::tol);
        t["classify.refine"] = member(&ExperimentContext::classify, &ClassifyOptions::refine);
        t["classify.extra_times"] = member(&ExperimentContext::classify, &ClassifyOptions::extra_times);

        for (const char* k : {"A", "alpha", "beta", "xi0", "t0", "T0", "gamma", "eps", "mu", "M"}) {
            t[std::string("barrier.") + k] = barrier_key(k);
        }
        t["barrier.shrink"] = [](RunConfig& c, std::string_view v) { c.shrink = parse_bool(v); };

        t["comparison.u0_b"] = [](RunConfig& c, std::string_view v) { c.comparison_u0_b = parse_profile(unquote(v)); };
        t["scan.ratios"] = [](RunConfig& c, std::string_view v) { c.scan_ratios = parse_list(v); };
        t["scan.c0"] = number(&RunConfig::scan_c0);
        t["trivial.eps_list"] = [](RunConfig& c, std::string_view v) { c.trivial_eps = parse_list(v); };
        t["extinction.margin"] = number(&RunConfig::extinction_margin);
        t["extinction.mu_max"] = number(&RunConfig::extinction_mu_max);
        t["probe.tol"] = number(&RunConfig::probe_tol);
        t["experiment.check_refinement"] = [](RunConfig& c, std::string_view v) {
            c.ctx.check_refinement = parse_bool(v);
        };
        return t;
    }();
    return table;
}

double get(const std::map<std::string, double>& m, const char* key, double fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

const std::map<std::string, std::string, std::less<>>& presets() {
    static const std::map<std::string, std::string, std::less<>> table = {
        {"nonuniqueness-a", R"(# zero data, l < min(1, p): a nontrivial solution besides u = 0
problem.p = 1
problem.l = 0.5
problem.c = const(1)
problem.k = const(1)
problem.u0 = 0
problem.T = 0.5
barrier.A = 1
barrier.alpha = 3
barrier.beta = 3
barrier.xi0 = 1
barrier.t0 = 0
barrier.T0 = 0.2
)"},
        {"nonuniqueness-b", R"(problem.p = 2
problem.l = 0.75
problem.c = const(1)
problem.k = const(1)
problem.u0 = 0
problem.T = 2
barrier.A = 1
barrier.alpha = 5
barrier.beta = 3
barrier.xi0 = 1
barrier.t0 = 0
barrier.T0 = 0.2
)"},
        {"trivial-uniqueness-a", R"(# zero data, p < l < 1: only the trivial solution
problem.p = 0.5
problem.l = 0.75
problem.c = const(1)
problem.k = const(1)
problem.u0 = 0
problem.T = 0.5
barrier.A = 1
barrier.gamma = 0.2
barrier.xi0 = 0.5
trivial.eps_list = 0.1, 0.05, 0.025
)"},
        {"trivial-uniqueness-b", R"(problem.p = 0.25
problem.l = 0.5
problem.c = const(2)
problem.k = const(1)
problem.u0 = 0
problem.T = 0.5
barrier.A = 1
barrier.gamma = 0.3
barrier.xi0 = 0.5
trivial.eps_list = 0.1, 0.05, 0.025
)"},
        {"threshold-scan", R"(# l = p: the verdict depends on k0 / c0
problem.p = 0.5
problem.l = 0.5
problem.c = const(1)
problem.k = const(1)
problem.u0 = 0
problem.T = 0.5
scan.c0 = 1
scan.ratios = 0.01, 0.1, 1, 10, 100
)"},
        {"extinction", R"(# p < l < 1, positive data: extinction in finite time
problem.p = 0.5
problem.l = 0.75
problem.c = const(1)
problem.k = const(1)
problem.u0 = 0
problem.T = 0.6
barrier.A = 0.003
barrier.gamma = 0.2
barrier.eps = 0.1
barrier.xi0 = 0.75
extinction.margin = 0.1
extinction.mu_max = 16
)"},
        {"positivity", R"(# superlinear absorption, data vanishing near x = 1
problem.p = 2
problem.l = 1
problem.c = const(1)
problem.k = const(1)
problem.u0 = bump(0.3, 0.3, 1)
problem.T = 0.2
)"},
        {"positivity-heat", R"(problem.p = 0.5
problem.l = 0.5
problem.c = const(0)
problem.k = const(1)
problem.u0 = bump(0.3, 0.3, 1)
problem.T = 0.2
)"},
        {"comparison", R"(problem.p = 2
problem.l = 2
problem.c = const(1)
problem.k = const(1)
problem.u0 = 0.5
problem.T = 0.2
comparison.u0_b = 1
)"},
        {"uniqueness-probe-a", R"(problem.p = 2
problem.l = 2
problem.c = const(1)
problem.k = const(1)
problem.u0 = cos(1, 0.5)
problem.T = 0.05
grid.dt = 1e-4
)"},
        {"uniqueness-probe-b", R"(problem.p = 2
problem.l = 0.5
problem.c = const(1)
problem.k = const(1)
problem.u0 = 1
problem.T = 0.05
grid.dt = 1e-4
)"},
        {"layer-sub-out-of-range", R"(# l >= min(1, p): outside the range of the layer subsolution
problem.p = 0.5
problem.l = 0.75
problem.c = const(1)
problem.k = const(1)
problem.u0 = 0
problem.T = 0.5
)"},
    };
    return table;
}

}  // namespace

LayerSubParams RunConfig::layer_params() const {
    const LayerSubParams d{};
    return LayerSubParams{get(barrier, "A", d.A),   get(barrier, "alpha", d.alpha), get(barrier, "beta", d.beta),
                          get(barrier, "xi0", d.xi0), get(barrier, "t0", d.t0),       get(barrier, "T0", d.T0)};
}

StrictSuperParams RunConfig::strict_params() const {
    const StrictSuperParams d{};
    return StrictSuperParams{get(barrier, "A", d.A), get(barrier, "gamma", d.gamma), get(barrier, "eps", d.eps),
                             get(barrier, "xi0", d.xi0)};
}

ExtinctionParams RunConfig::extinction_params() const {
    const ExtinctionParams d{};
    return ExtinctionParams{get(barrier, "A", d.A), get(barrier, "gamma", d.gamma), get(barrier, "eps", d.eps),
                            get(barrier, "xi0", d.xi0), get(barrier, "mu", 0.0)};
}

double RunConfig::exp_super_M() const { return get(barrier, "M", 0.0); }

void RunConfig::validate() const {
    for (const char* key : {"problem.p", "problem.l", "problem.c", "problem.k", "problem.u0", "problem.T"}) {
        if (!given.contains(key)) throw ConfigError(std::string("missing required key ") + key);
    }
    ctx.disc.validate();
    problem.validate(build_grid(ctx.disc.n_cells));
    ctx.scheme.validate();
    ctx.ladder.validate();
    ctx.picard.validate();
    if (!(ctx.classify.tol > 0.0)) throw ConfigError("classify.tol must be > 0");
    if (ctx.classify.refine < 1) throw ConfigError("classify.refine must be >= 1");
    if (ctx.classify.extra_times < 0) throw ConfigError("classify.extra_times must be >= 0");
    if (!(solve_eps >= 0.0 && solve_eps < 1.0)) throw ConfigError("solver.eps must lie in [0,1)");
    if (!(scan_c0 > 0.0)) throw ConfigError("scan.c0 must be > 0");
    for (const double r : scan_ratios) {
        if (!(r > 0.0)) throw ConfigError("scan.ratios must be > 0");
    }
    for (const double e : trivial_eps) {
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("trivial.eps_list entries must lie in (0,1)");
    }
    if (!(extinction_margin > 0.0)) throw ConfigError("extinction.margin must be > 0");
    if (!(extinction_mu_max > 0.0)) throw ConfigError("extinction.mu_max must be > 0");
    if (!(probe_tol > 0.0)) throw ConfigError("probe.tol must be > 0");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    auto config = std::move(base);
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'section.key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
        if (value.empty()) throw ParseError(line_no, std::string(key) + ": missing value");
        try {
            it->second(config, value);
        } catch (const ParseError&) {
            throw;
        } catch (const ConfigError& e) {
            throw ParseError(line_no, std::string(key) + ": " + e.what());
        }
        config.given.insert(std::string(key));
    }
    return config;
}

RunConfig load_config(std::string_view text, RunConfig base) {
    auto config = parse_config(text, std::move(base));
    config.validate();
    return config;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : presets()) names.push_back(name);
    return names;
}

std::string preset_text(std::string_view name) {
    const auto it = presets().find(name);
    if (it == presets().end()) {
        throw ConfigError(fmt::format("unknown preset '{}' (known: {})", name, fmt::join(preset_names(), ", ")));
    }
    return it->second;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [key, setter] : setters()) keys.push_back(key);
    return keys;
}

}  // namespace nlheat
