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

#ifndef PNRD_RUNNER_HPP
#define PNRD_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnrd/config.hpp"

namespace pnrd {

struct RunOptions {
    std::string out_dir = ".";
    bool validate_only = false;         // check the config, compute nothing
    std::optional<std::uint64_t> seed;  // overrides task.seed
    int threads = 1;
};

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::string> summary;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

/// Default CSV file name for a task, e.g. "fidelity_sweep.csv".
std::string default_output_name(TaskKind kind);

/// The CSV a task produces. Exposed so tests can compare bytes without
/// touching the file system.
std::string render_task(const ExperimentConfig &config, const RunOptions &options, RunOutcome &outcome);

/// Runs the task and writes its CSV under options.out_dir.
RunOutcome run_experiment(const ExperimentConfig &config, const RunOptions &options);

}  // namespace pnrd

#endif  // PNRD_RUNNER_HPP
