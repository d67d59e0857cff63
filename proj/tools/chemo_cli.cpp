#include "chemo/commands.hpp"
#include "chemo/config.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Steady states and dynamics of a chemotaxis model with crowding"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    for (const char* name : {"steady", "limit", "evolve", "sweep", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat key = value configuration file")->required();
        sub->add_option("--out-dir", out_dir, "output directory (overrides out_dir in the config)");
    }
    app.get_subcommand("steady")->description("solve the steady state and write steady.csv, steady.json");
    app.get_subcommand("limit")->description("write the large-chi limit profile to limit.csv");
    app.get_subcommand("evolve")->description("integrate in time; snapshots, diagnostics.csv, decay.json");
    app.get_subcommand("sweep")->description("chi sweep against the limit profile; sweep.csv");
    app.get_subcommand("verify")->description("run the invariant suite; verify.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : chemo::kExitValidation;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    chemo::RunConfig config;
    try {
        config = chemo::load_config(config_path);
    } catch (...) {
        return chemo::report_exception(std::cerr);
    }
    if (!out_dir.empty()) config.out_dir = out_dir;
    return chemo::dispatch(subcommand, config, std::cerr);
}
