#pragma once

#include "nlheat/barriers.hpp"
#include "nlheat/fd_solver.hpp"
#include "nlheat/green.hpp"
#include "nlheat/ladder.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace nlheat {

/// One pass/fail line of an experiment. `relation` reads "measured <relation> threshold".
struct Check {
    std::string id;
    std::string description;
    double measured = 0.0;
    double threshold = 0.0;
    std::string relation;
    bool pass = false;
};

[[nodiscard]] Check check_le(std::string id, std::string description, double measured, double threshold);
[[nodiscard]] Check check_lt(std::string id, std::string description, double measured, double threshold);
[[nodiscard]] Check check_ge(std::string id, std::string description, double measured, double threshold);
[[nodiscard]] Check check_gt(std::string id, std::string description, double measured, double threshold);
[[nodiscard]] Check check_true(std::string id, std::string description, bool value);

struct ExperimentOutcome {
    std::string name;
    std::string spec_summary;
    std::vector<Check> hypotheses;  // recorded separately; a failed hypothesis raises HypothesisError
    std::vector<Check> checks;
    std::vector<std::string> artifacts;
    nlohmann::json details = nlohmann::json::object();

    [[nodiscard]] bool pass() const;
    /// Throws std::out_of_range for an unknown id.
    [[nodiscard]] const Check& check(std::string_view id) const;
};

struct Discretization {
    int n_cells = 100;
    double dt = 1e-3;
    int store_stride = 10;

    void validate() const;
};

/// Shared settings of every experiment. Artifacts are written under out_dir/<name>/ when
/// out_dir is non-empty.
struct ExperimentContext {
    Discretization disc;
    StepScheme scheme;
    LadderOptions ladder;
    PicardOptions picard;
    ClassifyOptions classify;
    std::filesystem::path out_dir;
    bool check_refinement = false;  // rerun ladders at h/2, dt/4 and compare verdicts
};

/// Ordered initial data u0_a <= u0_b (roles are swapped when u0_a >= u0_b) on otherwise
/// identical specs; checks u_a <= u_b + tol_cmp at every stored slice.
[[nodiscard]] ExperimentOutcome run_comparison(const ProblemSpec& a, const ProblemSpec& b,
                                               const ExperimentContext& ctx, const std::string& name = "comparison");

/// Nontrivial u0 and p >= 1 or c == 0; checks min u > 0 over every node for t >= dt.
[[nodiscard]] ExperimentOutcome run_positivity(const ProblemSpec& spec, const ExperimentContext& ctx);

/// u0 == 0, l < min(1,p), k > 0: nontrivial ladder, certified layer_sub, rungs above it.
[[nodiscard]] ExperimentOutcome run_nonuniqueness(const ProblemSpec& spec, const ExperimentContext& ctx,
                                                  const LayerSubParams& start);

/// u0 == 0, p < l < 1, inf c > 0: trivial ladder, strict_super family with sup ~ eps,
/// direct solve below every barrier.
[[nodiscard]] ExperimentOutcome run_trivial_uniqueness(const ProblemSpec& spec, const ExperimentContext& ctx,
                                                       const StrictSuperParams& start,
                                                       const std::vector<double>& eps_list);

struct ScanRow {
    double ratio = 0.0;
    LadderVerdict verdict = LadderVerdict::inconclusive;
    double ladder_floor = 0.0;  // final sup norm of the last rung
    bool layer_found = false;
    bool strict_found = false;
    bool barrier_ok = false;    // the barrier matching the verdict certified
};

/// l = p < 1, c = c0, k = ratio c0 for each ratio: ladder verdicts and both critical barrier
/// searches; checks the verdict sequence is monotone with at most one inconclusive window.
[[nodiscard]] ExperimentOutcome run_threshold_scan(const ProblemSpec& base, double c0, std::vector<double> ratios,
                                                   const ExperimentContext& ctx);

/// Starts from the extinction barrier at t = 0 (mu searched when start.mu <= 0) and checks
/// extinction after xi0/mu + margin and domination by the barrier.
[[nodiscard]] ExperimentOutcome run_extinction(const ProblemSpec& spec, const ExperimentContext& ctx,
                                               ExtinctionParams start, double margin = 0.1, double mu_max = 16.0);

/// Direct solve, eps-extrapolated Picard and the ladder agree within `tol`.
[[nodiscard]] ExperimentOutcome run_uniqueness_probe(const ProblemSpec& spec, const ExperimentContext& ctx,
                                                     double tol = 5e-3);

struct ConvergenceRow {
    double h = 0.0;
    double dt = 0.0;
    double sup_error = 0.0;
    double order = 0.0;  // against the previous row (0 for the first)
};

/// c = k = 0, u0 = 1 + cos(pi x) against 1 + exp(-pi^2 t) cos(pi x) at t = T.
[[nodiscard]] ExperimentOutcome oracle_heat(const ExperimentContext& ctx, double T = 0.1);
/// k = 0, c = 1, p = 1/2, u0 = 1 against (1 - t/2)^2 on [0, 1.5].
[[nodiscard]] ExperimentOutcome oracle_absorption(const ExperimentContext& ctx, double dt = 1e-4);
/// Symmetry and normalization of the truncated kernel at 100 sampled (x, t), t >= t_min.
[[nodiscard]] ExperimentOutcome oracle_kernel(const ExperimentContext& ctx);
/// fd_solver vs picard_solve on p = l = 2, c = k = 1, u0 = 1 + cos(pi x)/2, T = 0.05.
[[nodiscard]] ExperimentOutcome oracle_crossval(const ExperimentContext& ctx);

/// Ten ordered spec pairs mixing l >= 1 with positive-data l < 1 cases.
[[nodiscard]] std::vector<std::pair<ProblemSpec, ProblemSpec>> comparison_suite();

/// Writes outcome.json under out_dir/<name>/ (when out_dir is set) and records it as an artifact.
void write_outcome(ExperimentOutcome& outcome, const ExperimentContext& ctx);

}  // namespace nlheat
