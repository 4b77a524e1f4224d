#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nlheat {

/// Parsed command line. `subject` is the family, experiment or oracle name for commands that take one.
struct Request {
    std::string command;  // solve | ladder | certify | experiment | oracle | presets
    std::string subject;
    std::optional<std::filesystem::path> config;
    std::optional<std::string> preset;
    std::filesystem::path out_dir = "out";
};

/// Exit statuses of dispatch.
inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_error = 2;

/// Runs one request. Errors are reported on `log` and written to out_dir/error.json.
[[nodiscard]] int dispatch(const Request& request, std::ostream& log);

/// Experiment names accepted by `experiment`.
[[nodiscard]] std::vector<std::string> experiment_names();

}  // namespace nlheat
