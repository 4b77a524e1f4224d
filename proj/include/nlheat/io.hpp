#pragma once

#include "nlheat/barriers.hpp"
#include "nlheat/fd_solver.hpp"
#include "nlheat/ladder.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace nlheat {

struct ConvergenceRow;
struct ScanRow;
struct ExperimentOutcome;

/// Shortest round-trip decimal form; identical across runs.
[[nodiscard]] std::string format_number(double v);

/// Header `t,x,u`, one row per node per stored slice.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
/// Header `h,dt,sup_error,order`.
void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows);
/// Header `ratio,verdict,ladder_floor,barrier_ok`.
void write_scan_csv(const std::filesystem::path& path, const std::vector<ScanRow>& rows);

[[nodiscard]] nlohmann::json to_json(const BarrierCandidate& candidate);
[[nodiscard]] nlohmann::json to_json(const BarrierCandidate& candidate, const ResidualReport& report);
/// eps, sup norms, gaps, verdict; `certificates` lists certificate files cross-referenced by the report.
[[nodiscard]] nlohmann::json to_json(const LadderReport& report, const std::vector<std::string>& certificates = {});
[[nodiscard]] nlohmann::json to_json(const ExperimentOutcome& outcome);

/// Pretty-printed with a trailing newline; creates parent directories.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace nlheat
