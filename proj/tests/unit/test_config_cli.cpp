#include "nlheat/cli.hpp"
#include "nlheat/config.hpp"
#include "nlheat/error.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nlheat;

namespace {

const char* minimal = R"(problem.p = 2
problem.l = 1   # trailing comment
problem.c = const(1)
problem.k = const(1)
problem.u0 = 1
problem.T = 0.1
)";

std::filesystem::path scratch_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("nlheat_test_" + name);
    std::filesystem::remove_all(d);
    return d;
}

nlohmann::json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Config, MinimalFillsDefaults) {
    const auto c = load_config(minimal);
    EXPECT_EQ(c.problem.p, 2.0);
    EXPECT_EQ(c.ctx.disc.n_cells, 100);
    EXPECT_EQ(c.ctx.disc.dt, 1e-3);
    EXPECT_EQ(c.ctx.scheme.fp_max, 50);
    EXPECT_EQ(c.ctx.scheme.fp_tol, 1e-10);
    EXPECT_EQ(c.ctx.ladder.rungs, 6);
    EXPECT_EQ(c.ctx.ladder.tol_cmp, 1e-6);
    EXPECT_EQ(c.scan_ratios.size(), 5u);
}

TEST(Config, NegativeExponentNamesKey) {
    try {
        (void)load_config(std::string(minimal) + "problem.p = -1\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_STREQ(e.what(), "problem.p must be > 0");
    }
}

TEST(Config, UnknownKeyIsParseErrorWithLine) {
    try {
        (void)parse_config("problem.p = 1\n\nproblem.q = 2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
        EXPECT_NE(std::string(e.what()).find("problem.q"), std::string::npos);
    }
}

TEST(Config, MalformedLinesAndValues) {
    EXPECT_THROW((void)parse_config("problem.p 1\n"), ParseError);
    EXPECT_THROW((void)parse_config("problem.p = abc\n"), ParseError);
    EXPECT_THROW((void)parse_config("grid.n_cells = 1.5\n"), ParseError);
    EXPECT_THROW((void)parse_config("barrier.shrink = maybe\n"), ParseError);
    EXPECT_THROW((void)parse_config("problem.c = wobble(1)\n"), ParseError);
    EXPECT_THROW((void)load_config("problem.p = 1\n"), ConfigError);
}

TEST(Config, ListsAndLayering) {
    auto c = parse_config("scan.ratios = 1, 2, 3\ntrivial.eps_list = [0.1, 0.01]\n");
    EXPECT_EQ(c.scan_ratios, (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(c.trivial_eps, (std::vector<double>{0.1, 0.01}));
    const auto layered = load_config("problem.T = 0.3\n", parse_config(preset_text("nonuniqueness-a")));
    EXPECT_EQ(layered.problem.T, 0.3);
    EXPECT_EQ(layered.layer_params().T0, 0.2);
}

TEST(Config, EveryPresetLoads) {
    for (const auto& name : preset_names()) EXPECT_NO_THROW((void)load_config(preset_text(name))) << name;
    EXPECT_THROW((void)preset_text("nope"), ConfigError);
}

TEST(Cli, CertifyOutOfRangeExitsTwoWithNamedConstraint) {
    const auto out = scratch_dir("certify");
    std::ostringstream log;
    Request r{"certify", "layer_sub", std::nullopt, "layer-sub-out-of-range", out};
    EXPECT_EQ(dispatch(r, log), exit_error);
    const auto err = read_json(out / "error.json");
    EXPECT_EQ(err["kind"], "configuration");
    EXPECT_NE(err["message"].get<std::string>().find("min(1, p)"), std::string::npos) << err.dump();
}

TEST(Cli, ParseErrorReportsLine) {
    const auto out = scratch_dir("parse");
    std::filesystem::create_directories(out);
    const auto cfg = out / "bad.cfg";
    std::ofstream(cfg) << "problem.p = 1\nproblem.zzz = 1\n";
    std::ostringstream log;
    EXPECT_EQ(dispatch(Request{"solve", "", cfg, std::nullopt, out}, log), exit_error);
    const auto err = read_json(out / "error.json");
    EXPECT_EQ(err["kind"], "parse");
    EXPECT_EQ(err["line"], 2);
}

TEST(Cli, HypothesisRejectionExitsTwo) {
    const auto out = scratch_dir("hyp");
    std::ostringstream log;
    Request r{"experiment", "nonuniqueness", std::nullopt, "trivial-uniqueness-a", out};
    EXPECT_EQ(dispatch(r, log), exit_error);
    EXPECT_EQ(read_json(out / "error.json")["kind"], "hypothesis");
}

TEST(Cli, UnknownCommandAndSubject) {
    const auto out = scratch_dir("unknown");
    std::ostringstream log;
    EXPECT_EQ(dispatch(Request{"frobnicate", "", std::nullopt, std::nullopt, out}, log), exit_error);
    EXPECT_EQ(dispatch(Request{"oracle", "nope", std::nullopt, std::nullopt, out}, log), exit_error);
}

TEST(Cli, SolveWritesArtifactsDeterministically) {
    const auto out = scratch_dir("solve");
    std::filesystem::create_directories(out);
    const auto cfg = out / "run.cfg";
    std::ofstream(cfg) << minimal << "grid.n_cells = 20\ngrid.dt = 0.01\n";
    std::ostringstream log;
    ASSERT_EQ(dispatch(Request{"solve", "", cfg, std::nullopt, out / "a"}, log), exit_pass);
    ASSERT_EQ(dispatch(Request{"solve", "", cfg, std::nullopt, out / "b"}, log), exit_pass);
    const auto a = read_text(out / "a" / "solve" / "trajectory.csv");
    EXPECT_EQ(a.substr(0, 6), "t,x,u\n");
    EXPECT_EQ(a, read_text(out / "b" / "solve" / "trajectory.csv"));
    EXPECT_EQ(read_text(out / "a" / "solve" / "summary.json"), read_text(out / "b" / "solve" / "summary.json"));
}

TEST(Cli, OracleHeatWritesConvergenceTable) {
    const auto out = scratch_dir("heat");
    std::ostringstream log;
    (void)dispatch(Request{"oracle", "heat", std::nullopt, std::nullopt, out}, log);
    const auto csv = read_text(out / "oracle-heat" / "convergence.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "h,dt,sup_error,order");
    const auto outcome = read_json(out / "oracle-heat" / "outcome.json");
    EXPECT_EQ(outcome["checks"].size(), 2u);
}

TEST(Cli, CertifyStrictSuperPreset) {
    const auto out = scratch_dir("strict");
    std::ostringstream log;
    Request r{"certify", "strict_super", std::nullopt, "trivial-uniqueness-a", out};
    EXPECT_EQ(dispatch(r, log), exit_pass) << log.str();
    const auto cert = read_json(out / "certify-strict_super" / "certificate.json");
    EXPECT_EQ(cert["family"], "strict_super");
    EXPECT_TRUE(cert["report"]["strict"].get<bool>());
}
