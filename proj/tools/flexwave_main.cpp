#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flexwave/cli_runner.hpp"

int main(int argc, char** argv) {
    using namespace flexwave;

    CLI::App app{"Periodic flexural-gravity waves: branches, stability and envelope asymptotics"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", kVersion);

    std::string command;
    std::string config_path;
    std::vector<std::string> sets;
    std::string g, h, D, model, a1_max, modes, mu_count, out;

    app.add_option("command", command, "dispersion | nls | resonance | collisions | branch | stability | compare");
    app.add_option("--config", config_path, "key = value file; flags below take precedence");
    app.add_option("--g", g, "gravity");
    app.add_option("--h", h, "depth, or inf");
    app.add_option("--D", D, "flexural rigidity");
    app.add_option("--model", model, "linear, nonlinear or both");
    app.add_option("--a1-max", a1_max, "largest first cosine amplitude on the branch");
    app.add_option("--modes", modes, "initial number of cosine modes");
    app.add_option("--mu-count", mu_count, "Floquet exponents in the sweep");
    app.add_option("--out", out, "output directory");
    app.add_option("--set", sets, "any config key, as key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) {
            for (const auto& [key, value] : read_key_values(config_path)) apply_setting(config, key, value);
        }
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
            apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        const std::pair<const char*, const std::string*> flags[] = {
            {"g", &g},           {"h", &h},           {"D", &D},
            {"model", &model},   {"a1_max", &a1_max}, {"modes", &modes},
            {"mu_count", &mu_count}, {"out", &out},
        };
        for (const auto& [key, value] : flags) {
            if (!value->empty()) apply_setting(config, key, *value);
        }
        if (!command.empty()) config.command = parse_command(command);
    } catch (const Error& e) {
        std::cerr << "error [" << e.kind() << "]: " << e.what() << '\n';
        return 2;
    }
    return run(config, std::cerr);
}
