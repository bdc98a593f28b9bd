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

// Experiment configuration files. The grammar is documented in
// docs/config-format.md: one `section.key = value` per line, `#` comments.

#ifndef PNRD_CONFIG_HPP
#define PNRD_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pnrd/design_optimizer.hpp"
#include "pnrd/detector_model.hpp"

namespace pnrd {

/// Parse or validation failure. what() reads "<origin>:<line>: <key>: <reason>".
class ConfigError : public std::runtime_error {
   public:
    ConfigError(const std::string &origin, int line, const std::string &key, const std::string &reason);

    int line() const { return line_; }
    const std::string &key() const { return key_; }

   private:
    int line_;
    std::string key_;
};

/// A named set of component figures. The fiber geometry and gate window do
/// not enter any probability; they are kept for reference.
struct Preset {
    std::string name;
    ComponentParams params;
    double fiber_length_m;
    double fiber_delay_ns;
    double gate_window_ns;
    std::string detector;
};

/// `780nm` (silicon) and `1550nm` (InGaAs).
const std::vector<Preset> &builtin_presets();

const Preset &find_preset(std::string_view name);

enum class TaskKind { Matrix, FidelitySweep, SignatureFidelity, Optimize, Boundary, Compare, Validate };

std::string_view task_name(TaskKind kind);

struct ArchitectureBlock {
    std::optional<ArchitectureFamily> kind;
    std::optional<std::string> preset;
    ComponentParams params;
    std::optional<int> n_outputs;
    std::optional<double> coupling_ratio;
    std::optional<int> stages;
    std::optional<double> path_loss;
    std::map<std::string, std::string> metadata;

    bool operator==(const ArchitectureBlock &) const = default;
};

struct SourceBlock {
    std::optional<double> chi;
    std::optional<int> n_max;

    bool operator==(const SourceBlock &) const = default;
};

struct TaskBlock {
    TaskKind kind = TaskKind::Matrix;
    int target_m = 1;
    std::optional<std::vector<double>> chi_grid;
    std::optional<std::string> signature;
    std::optional<int> search_min;
    std::optional<int> search_max;
    double epsilon = kDefaultTruncationBudget;
    std::optional<std::vector<double>> coupling_grid;
    std::vector<double> dc_grid;
    std::vector<double> eta_grid;
    std::vector<int> targets;
    std::vector<ArchitectureFamily> architectures;
    std::optional<std::string> output;
    std::optional<std::uint64_t> seed;
    std::uint64_t trials = 1'000'000;
    int oracle_specs = 200;
    int monte_carlo_specs = 20;

    bool operator==(const TaskBlock &) const = default;
};

struct ExperimentConfig {
    ArchitectureBlock architecture;
    SourceBlock source;
    TaskBlock task;

    bool operator==(const ExperimentConfig &) const = default;
};

/// Parses and validates a configuration. Throws ConfigError.
ExperimentConfig parse_config(std::string_view text, const std::string &origin = "<config>");

ExperimentConfig load_config(const std::string &path);

/// Writes a configuration that parse_config() reads back to an equal value.
/// Presets are expanded into explicit component keys.
std::string to_text(const ExperimentConfig &config);

/// `architecture.*` lines describing one preset.
std::string preset_text(const Preset &preset);

/// The concrete device described by the architecture block.
ArchitectureKind architecture_of(const ArchitectureBlock &block);

/// Source with source.n_max, or the default cutoff raised to at least
/// min_n_max.
PdcSource source_of(const SourceBlock &block, int min_n_max = 0);

/// "a:b:step" (inclusive) or a comma separated list.
std::vector<double> parse_grid(std::string_view text);

}  // namespace pnrd

#endif  // PNRD_CONFIG_HPP
