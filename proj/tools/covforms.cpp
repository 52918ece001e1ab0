// covforms command-line runner: flows, structure checks, and spectrum
// estimates for bundle-valued cochains on flat tori.

#include <CLI11.hpp>
#include <iostream>

#include "covforms/config.hpp"
#include "covforms/scenario.hpp"
#include "covforms/version.hpp"

namespace {

covforms::ScenarioConfig load(const std::string& path, const std::string& out_override,
                              long long seed_override) {
    covforms::ScenarioConfig cfg = covforms::parse_config_file(path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"covforms: variational flows for bundle-valued cochains on flat tori"};
    app.set_version_flag("--version", covforms::kVersion);
    app.require_subcommand(1);

    std::string config_path, out_dir, check_scenario_name;
    long long seed = -1;

    auto* run = app.add_subcommand("run", "run the configured flow and write artifacts");
    run->add_option("config", config_path, "configuration file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--seed", seed, "seed (overrides config)");

    auto* check = app.add_subcommand("check", "structure checks of the initial state, no flow");
    check->add_option("scenario", check_scenario_name, "scenario name, must match the config")
        ->required();
    check->add_option("config", config_path, "configuration file")->required();
    check->add_option("--out", out_dir, "output directory (overrides config)");
    check->add_option("--seed", seed, "seed (overrides config)");

    auto* spectrum = app.add_subcommand("spectrum", "power-iteration estimate of ||d[k]+delta[k]||");
    spectrum->add_option("config", config_path, "configuration file")->required();
    spectrum->add_option("--seed", seed, "seed (overrides config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return covforms::run_scenario(load(config_path, out_dir, seed));
        }
        if (check->parsed()) {
            covforms::ScenarioConfig cfg = load(config_path, out_dir, seed);
            if (covforms::to_string(cfg.scenario) != check_scenario_name)
                throw covforms::ConfigError("scenario argument '" + check_scenario_name +
                                            "' does not match config scenario '" +
                                            covforms::to_string(cfg.scenario) + "'");
            std::cout << covforms::check_scenario(cfg).dump(2) << '\n';
            return 0;
        }
        if (spectrum->parsed()) {
            std::cout << covforms::spectrum_scenario(load(config_path, "", seed)).dump(2) << '\n';
            return 0;
        }
    } catch (const covforms::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
