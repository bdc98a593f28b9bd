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

#include "pnrd/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "pnrd/csv.hpp"
#include "pnrd/design_optimizer.hpp"
#include "pnrd/probability_engine.hpp"
#include "pnrd/state_prep.hpp"
#include "pnrd/validation_oracles.hpp"

namespace pnrd {

namespace {

std::string fmt(double v) { return csv::format(v); }

std::string fmt(const std::optional<double> &v) { return v ? csv::format(*v) : std::string("n/a"); }

DesignQuery query_from(const ExperimentConfig &config, ArchitectureFamily family) {
    const TaskBlock &t = config.task;
    DesignQuery q;
    q.target_m = t.target_m;
    q.source = source_of(config.source, t.target_m);
    q.family = family;
    q.params = config.architecture.params;
    q.nport_path_loss = config.architecture.path_loss;
    q.truncation_error_budget = t.epsilon;
    q.search_min = t.search_min;
    q.search_max = t.search_max;
    q.coupling_grid = t.coupling_grid;
    return q;
}

std::string device_label(const ArchitectureKind &arch) {
    return std::string(architecture_name(arch)) + " N=" + std::to_string(n_outputs(arch));
}

std::vector<double> chi_grid(const ExperimentConfig &config) {
    if (config.task.chi_grid) {
        return *config.task.chi_grid;
    }
    if (config.source.chi) {
        return {*config.source.chi};
    }
    return default_chi_grid();
}

void warn_impossible(const std::vector<SweepRow> &rows, RunOutcome &outcome) {
    const auto missing = std::count_if(rows.begin(), rows.end(), [](const SweepRow &r) { return !r.fidelity; });
    if (missing > 0) {
        outcome.warnings.push_back(std::to_string(missing) +
                                   " grid point(s) cannot produce the herald; fidelity left empty");
    }
}

std::string best_point(const std::vector<SweepRow> &rows) {
    const SweepRow *best = nullptr;
    for (const auto &r : rows) {
        if (r.fidelity && (!best || *r.fidelity > *best->fidelity)) {
            best = &r;
        }
    }
    return best ? "max F=" + fmt(*best->fidelity) + " at chi=" + fmt(best->chi) : std::string("no heralded points");
}

std::string render_matrix(const ExperimentConfig &config, RunOutcome &outcome) {
    const ArchitectureKind arch = architecture_of(config.architecture);
    const int n = n_outputs(arch);
    int n_max = n;
    if (config.source.n_max) {
        n_max = *config.source.n_max;
    } else if (config.source.chi) {
        n_max = default_n_max(n, *config.source.chi);
    }
    const ConditionalMatrix cm = conditional_matrix(build(arch), n_max);
    outcome.summary.push_back("matrix: " + device_label(arch) + " n_max=" + std::to_string(n_max) +
                              " P(n|n) at n=1: " + fmt(n >= 1 && n_max >= 1 ? cm(1, 1) : 1.0));
    return to_csv(cm);
}

std::string render_fidelity_sweep(const ExperimentConfig &config, RunOutcome &outcome) {
    const ArchitectureKind arch = architecture_of(config.architecture);
    const auto grid = chi_grid(config);
    const auto rows = fidelity_sweep(arch, config.task.target_m, grid, config.source.n_max);
    warn_impossible(rows, outcome);
    outcome.summary.push_back("fidelity-sweep: " + device_label(arch) + " m=" + std::to_string(config.task.target_m) +
                              " points=" + std::to_string(rows.size()) + " " + best_point(rows));
    return to_csv(rows, "m=" + std::to_string(config.task.target_m));
}

std::string render_signature(const ExperimentConfig &config, RunOutcome &outcome) {
    const ArchitectureKind arch = architecture_of(config.architecture);
    const Signature sig = Signature::parse(*config.task.signature);
    const auto grid = chi_grid(config);
    const auto rows = signature_fidelity_sweep(build(arch), sig, grid, config.source.n_max);
    warn_impossible(rows, outcome);
    outcome.summary.push_back("signature-fidelity: " + device_label(arch) + " signature=" + sig.str() +
                              " points=" + std::to_string(rows.size()) + " " + best_point(rows));
    return to_csv(rows, "signature=" + sig.str());
}

std::string render_optimize(const ExperimentConfig &config, const RunOptions &options, RunOutcome &outcome) {
    const ArchitectureFamily family = *config.architecture.kind;
    const DesignResult result = optimize(query_from(config, family), options.threads);
    const Candidate &best = result.chosen();
    std::string line = "optimize: " + std::string(family_name(family)) + " target=" + std::to_string(result.target_m);
    if (family == ArchitectureFamily::BalancedTdm) {
        line += " m_min=" + std::to_string(result.minimum) + " m_opt=" + std::to_string(*best.stages);
    } else {
        line += " N_min=" + std::to_string(result.minimum) + " N_opt=" + std::to_string(best.n_outputs);
        if (best.coupling_ratio) {
            line += " p_c=" + fmt(*best.coupling_ratio);
        }
    }
    line += " F=" + fmt(best.fidelity) + " p_det=" + fmt(best.detection_probability);
    outcome.summary.push_back(line);
    return to_csv(result);
}

std::string render_boundary(const ExperimentConfig &config, const RunOptions &options, RunOutcome &outcome) {
    std::vector<int> targets = config.task.targets;
    if (targets.empty()) {
        targets.push_back(config.task.target_m);
    }
    std::vector<BoundaryRow> rows;
    for (int target : targets) {
        ExperimentConfig c = config;
        c.task.target_m = target;
        auto part = benefit_boundary(query_from(c, ArchitectureFamily::BalancedTdm), config.task.dc_grid,
                                     config.task.eta_grid, options.threads);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const auto inside = std::count_if(rows.begin(), rows.end(), [](const BoundaryRow &r) { return r.benefits; });
    outcome.summary.push_back("boundary: " + std::to_string(rows.size()) + " points, " + std::to_string(inside) +
                              " with m_opt > m_min");
    return to_csv(rows);
}

std::string render_compare(const ExperimentConfig &config, const RunOptions &options, RunOutcome &outcome) {
    std::vector<ArchitectureFamily> families = config.task.architectures;
    if (families.empty()) {
        families = {ArchitectureFamily::LoopTdm, ArchitectureFamily::BalancedTdm};
    }
    std::vector<DesignQuery> queries;
    for (auto family : families) {
        queries.push_back(query_from(config, family));
    }
    const auto rows = compare_architectures(queries, options.threads);
    std::string line = "compare: target=" + std::to_string(config.task.target_m);
    for (const auto &r : rows) {
        line += " " + r.architecture + " F=" + fmt(r.fidelity);
    }
    outcome.summary.push_back(line);
    return to_csv(rows);
}

std::string render_validate(const ExperimentConfig &config, const RunOptions &options, RunOutcome &outcome) {
    const auto seed = options.seed ? options.seed : config.task.seed;
    if (!seed) {
        throw ConfigError("<config>", 0, "task.seed", "the validate task needs a seed (task.seed or --seed)");
    }
    ValidationOptions v;
    v.oracle_specs = config.task.oracle_specs;
    v.monte_carlo_specs = config.task.monte_carlo_specs;
    v.trials = config.task.trials;
    v.seed = *seed;
    v.threads = options.threads;
    const auto checks = run_validation_suite(v);
    const auto passed = std::count_if(checks.begin(), checks.end(), [](const ValidationCheck &c) { return c.passed; });
    outcome.summary.push_back("validate: " + std::to_string(passed) + "/" + std::to_string(checks.size()) +
                              " checks passed (seed " + std::to_string(*seed) + ")");
    if (passed != static_cast<long>(checks.size())) {
        outcome.exit_code = 1;
    }
    return to_csv(checks);
}

}  // namespace

std::string default_output_name(TaskKind kind) {
    std::string name(task_name(kind));
    std::replace(name.begin(), name.end(), '-', '_');
    return name + ".csv";
}

std::string render_task(const ExperimentConfig &config, const RunOptions &options, RunOutcome &outcome) {
    switch (config.task.kind) {
        case TaskKind::Matrix:
            return render_matrix(config, outcome);
        case TaskKind::FidelitySweep:
            return render_fidelity_sweep(config, outcome);
        case TaskKind::SignatureFidelity:
            return render_signature(config, outcome);
        case TaskKind::Optimize:
            return render_optimize(config, options, outcome);
        case TaskKind::Boundary:
            return render_boundary(config, options, outcome);
        case TaskKind::Compare:
            return render_compare(config, options, outcome);
        case TaskKind::Validate:
            return render_validate(config, options, outcome);
    }
    throw std::logic_error("unknown task kind");
}

RunOutcome run_experiment(const ExperimentConfig &config, const RunOptions &options) {
    RunOutcome outcome;
    if (options.threads < 1) {
        throw std::domain_error("--threads must be >= 1");
    }
    if (options.validate_only) {
        outcome.summary.push_back("config ok: task " + std::string(task_name(config.task.kind)));
        return outcome;
    }
    const std::string contents = render_task(config, options, outcome);
    std::filesystem::path path = config.task.output.value_or(default_output_name(config.task.kind));
    if (path.is_relative()) {
        path = std::filesystem::path(options.out_dir) / path;
    }
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    csv::write_file(path.string(), contents);
    outcome.files.push_back(path.string());
    return outcome;
}

}  // namespace pnrd
