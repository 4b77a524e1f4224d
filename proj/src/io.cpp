#include "nlheat/io.hpp"

#include "nlheat/error.hpp"
#include "nlheat/experiments.hpp"

#include <fmt/format.h>

#include <fstream>

namespace nlheat {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

// Non-finite values are not representable in JSON; they are written as null.
nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_for_write(path);
    std::string buf = "t,x,u\n";
    for (std::size_t s = 0; s < traj.n_slices(); ++s) {
        const double t = traj.time(s);
        const auto u = traj.slice(s);
        for (std::size_t i = 0; i < u.size(); ++i) {
            buf += fmt::format("{},{},{}\n", t, traj.grid.node(i), u[i]);
        }
    }
    out << buf;
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
    auto out = open_for_write(path);
    out << "h,dt,sup_error,order\n";
    for (const auto& r : rows) out << fmt::format("{},{},{},{}\n", r.h, r.dt, r.sup_error, r.order);
}

void write_scan_csv(const std::filesystem::path& path, const std::vector<ScanRow>& rows) {
    auto out = open_for_write(path);
    out << "ratio,verdict,ladder_floor,barrier_ok\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{}\n", r.ratio, verdict_name(r.verdict), r.ladder_floor,
                           r.barrier_ok ? "true" : "false");
    }
}

nlohmann::json to_json(const BarrierCandidate& candidate) {
    nlohmann::json params;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ExpSuperParams>) {
                params = {{"M", p.M}, {"B", p.B}, {"K", p.K}, {"alpha", 2.0 * p.B}, {"horizon", p.horizon}};
            } else if constexpr (std::is_same_v<T, LayerSubParams>) {
                params = {{"A", p.A}, {"alpha", p.alpha}, {"beta", p.beta},
                          {"xi0", p.xi0}, {"t0", p.t0}, {"T0", p.T0}};
            } else if constexpr (std::is_same_v<T, StrictSuperParams>) {
                params = {{"A", p.A}, {"gamma", p.gamma}, {"eps", p.eps}, {"xi0", p.xi0}};
            } else {
                params = {{"A", p.A}, {"gamma", p.gamma}, {"eps", p.eps}, {"xi0", p.xi0}, {"mu", p.mu}};
            }
        },
        candidate.params());
    return {{"family", family_name(candidate.family())}, {"parameters", params},
            {"sup_value", number(candidate.sup_value())}};
}

nlohmann::json to_json(const BarrierCandidate& candidate, const ResidualReport& r) {
    auto j = to_json(candidate);
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& p : r.boundary_trace) trace.push_back({number(p.t), number(p.flux), number(p.integral)});
    j["report"] = {
        {"verdict", certification_name(r.verdict)},
        {"subsolution", r.subsolution},
        {"supersolution", r.supersolution},
        {"strict", r.strict},
        {"margin", number(r.margin)},
        {"sub_margin", number(r.sub_margin)},
        {"super_margin", number(r.super_margin)},
        {"boundary_super_margin", number(r.boundary_super_margin)},
        {"interior_min", number(r.interior_min)},
        {"interior_max", number(r.interior_max)},
        {"boundary_gap_0", {number(r.boundary_gap_0), number(r.boundary_gap_0_max)}},
        {"boundary_gap_1", {number(r.boundary_gap_1), number(r.boundary_gap_1_max)}},
        {"initial_gap", {number(r.initial_min), number(r.initial_max)}},
        {"samples", r.n_samples},
        {"boundary_trace_columns", {"t", "flux", "integral"}},
        {"boundary_trace", trace},
    };
    return j;
}

nlohmann::json to_json(const LadderReport& report, const std::vector<std::string>& certificates) {
    nlohmann::json defects = nlohmann::json::array();
    for (const auto& d : report.compatibility_defects) defects.push_back({number(d[0]), number(d[1])});
    nlohmann::json eps = nlohmann::json::array(), sups = nlohmann::json::array(), gaps = nlohmann::json::array(),
                   mins = nlohmann::json::array();
    for (const double v : report.eps) eps.push_back(number(v));
    for (const double v : report.final_sup_norms) sups.push_back(number(v));
    for (const double v : report.sup_gaps) gaps.push_back(number(v));
    for (const double v : report.min_values) mins.push_back(number(v));
    return {
        {"eps", eps},
        {"final_sup_norms", sups},
        {"sup_gaps", gaps},
        {"min_values", mins},
        {"extrapolated_final_sup", number(report.extrapolated_final_sup)},
        {"floor", number(report.floor)},
        {"worst_violation", number(report.worst_violation)},
        {"verdict", verdict_name(report.verdict)},
        {"compatibility_defects", defects},
        {"compatibility_note", "initial data u0 + eps is not compatible with the boundary condition; "
                               "the listed defects are du/dnu - int k u^l at x = 0 and x = 1"},
        {"certificates", certificates},
    };
}

nlohmann::json to_json(const ExperimentOutcome& o) {
    auto checks = [](const std::vector<Check>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& c : v) {
            a.push_back({{"id", c.id},
                         {"description", c.description},
                         {"measured", number(c.measured)},
                         {"threshold", number(c.threshold)},
                         {"relation", c.relation},
                         {"pass", c.pass}});
        }
        return a;
    };
    return {{"name", o.name},           {"spec", o.spec_summary},     {"hypotheses", checks(o.hypotheses)},
            {"checks", checks(o.checks)}, {"artifacts", o.artifacts}, {"details", o.details},
            {"overall", o.pass() ? "pass" : "fail"}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
    auto out = open_for_write(path);
    out << value.dump(2) << '\n';
}

}  // namespace nlheat
