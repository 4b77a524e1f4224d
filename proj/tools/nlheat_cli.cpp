#include "nlheat/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal-Neumann semilinear heat lab"};
    app.require_subcommand(1, 1);

    nlheat::Request request;
    std::string config;
    std::string preset;
    std::string out = "out";

    auto common = [&](CLI::App* sub) {
        sub->add_option("config", config, "Config file (section.key = value)");
        sub->add_option("--preset", preset, "Named preset applied before the config file");
        sub->add_option("--out", out, "Artifact root directory");
    };

    auto* solve = app.add_subcommand("solve", "Solve one problem and write its trajectory");
    common(solve);
    auto* ladder = app.add_subcommand("ladder", "Run the decreasing-eps ladder");
    common(ladder);
    auto* certify = app.add_subcommand("certify", "Build and classify a barrier");
    certify->add_option("family", request.subject, "exp_super | layer_sub | strict_super | extinction")->required();
    common(certify);
    auto* experiment = app.add_subcommand("experiment", "Run a named experiment");
    experiment->add_option("name", request.subject, "Experiment name")->required();
    common(experiment);
    auto* oracle = app.add_subcommand("oracle", "Run a closed-form oracle");
    oracle->add_option("name", request.subject, "heat | absorption | kernel | crossval")->required();
    common(oracle);
    app.add_subcommand("presets", "List the named presets");

    CLI11_PARSE(app, argc, argv);

    request.command = app.get_subcommands().front()->get_name();
    if (!config.empty()) request.config = config;
    if (!preset.empty()) request.preset = preset;
    request.out_dir = out;
    return nlheat::dispatch(request, std::cout);
}
