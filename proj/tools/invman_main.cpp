#include "invman/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Invariant manifolds of implicit difference equations"};
    app.set_version_flag("--version", std::string(invman::cli::kVersion));
    app.require_subcommand(1, 1);

    std::string config;
    std::string out_dir;
    for (const char* name : {"spectrum", "solve", "residual", "continue", "verify"}) {
        auto* sub = app.add_subcommand(name);
        auto* opt = sub->add_option("--config", config, "INI configuration file");
        if (std::string_view(name) != "verify") opt->required();
        sub->add_option("--out", out_dir, "output directory (overrides [output] directory)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : invman::cli::kExitConfig;
    }

    const auto* sub = app.get_subcommands().front();
    std::optional<std::filesystem::path> cfg_path;
    std::optional<std::filesystem::path> out_path;
    if (!config.empty()) cfg_path = config;
    if (!out_dir.empty()) out_path = out_dir;
    return invman::cli::run(sub->get_name(), cfg_path, out_path, std::cout, std::cerr);
}
