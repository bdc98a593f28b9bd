// Copyright 2026 The pnrd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pnrd run <config> [--out DIR] [--validate] [--seed U64] [--threads K]
// pnrd preset list

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "pnrd/config.hpp"
#include "pnrd/csv.hpp"
#include "pnrd/runner.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Simulate and design multiplexed photon-number-resolving detectors"};
    app.require_subcommand(1);

    std::string config_path;
    pnrd::RunOptions options;
    std::uint64_t seed = 0;
    auto *run = app.add_subcommand("run", "Run the task described by a config file");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
    run->add_flag("--validate", options.validate_only, "Check the config and exit");
    auto *seed_opt = run->add_option("--seed", seed, "Seed for Monte Carlo tasks (overrides task.seed)");
    run->add_option("--threads", options.threads, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();

    auto *preset = app.add_subcommand("preset", "Built-in component presets");
    preset->require_subcommand(1);
    auto *list = preset->add_subcommand("list", "Print every preset as config lines");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto &p : pnrd::builtin_presets()) {
                std::cout << "# " << p.name << "\n" << pnrd::preset_text(p) << "\n";
            }
            return 0;
        }
        if (*seed_opt) {
            options.seed = seed;
        }
        const pnrd::ExperimentConfig config = pnrd::load_config(config_path);
        const pnrd::RunOutcome outcome = pnrd::run_experiment(config, options);
        for (const auto &w : outcome.warnings) {
            std::cerr << "warning: " << w << "\n";
        }
        for (const auto &line : outcome.summary) {
            std::cout << line << "\n";
        }
        for (const auto &file : outcome.files) {
            std::cout << "wrote " << file << "\n";
        }
        return outcome.exit_code;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
