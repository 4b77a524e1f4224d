#pragma once

#include "nlheat/experiments.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace nlheat {

/// Everything a CLI run needs. Text format (one entry per line, `#` starts a comment):
///
///   section.key = value
///
/// Values are numbers, `true`/`false`, comma-separated number lists, or function
/// descriptors such as `cos(1, 0.5)` or `sep(1, 1, const(1), poly(1, 1))`.
struct RunConfig {
    ProblemSpec problem;
    ExperimentContext ctx;
    double solve_eps = 0.0;  // solver.eps: regularization level of `solve`

    std::map<std::string, double> barrier;  // barrier.* overrides, applied on the family defaults
    bool shrink = true;                     // barrier.shrink

    std::optional<Profile> comparison_u0_b;
    std::vector<double> scan_ratios{0.01, 0.1, 1.0, 10.0, 100.0};
    double scan_c0 = 1.0;
    std::vector<double> trivial_eps{0.1, 0.05, 0.025};
    double extinction_margin = 0.1;
    double extinction_mu_max = 16.0;
    double probe_tol = 5e-3;

    std::set<std::string> given;  // keys set so far, across layered texts

    [[nodiscard]] LayerSubParams layer_params() const;
    [[nodiscard]] StrictSuperParams strict_params() const;
    /// mu defaults to 0, which asks run_extinction to search it.
    [[nodiscard]] ExtinctionParams extinction_params() const;
    /// barrier.M, or 0 when unset.
    [[nodiscard]] double exp_super_M() const;

    /// Throws ConfigError naming the first missing problem key or invalid value.
    void validate() const;
};

/// Parses `text` on top of `base`. Throws ParseError (with line) for malformed lines and
/// unknown keys, ConfigError for bad values. The result is not validated.
[[nodiscard]] RunConfig parse_config(std::string_view text, RunConfig base = {});

/// parse_config followed by validate().
[[nodiscard]] RunConfig load_config(std::string_view text, RunConfig base = {});

[[nodiscard]] std::vector<std::string> preset_names();
/// Config text of a named preset. Throws ConfigError for an unknown name.
[[nodiscard]] std::string preset_text(std::string_view name);

/// Every recognised key, sorted.
[[nodiscard]] std::vector<std::string> config_keys();

}  // namespace nlheat
