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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pnrd/runner.hpp"

namespace pnrd {
namespace {

std::string render(const std::string &text, RunOptions options = {}) {
    RunOutcome outcome;
    return render_task(parse_config(text), options, outcome);
}

const char *kLoopMatrix =
    "architecture.kind = loop_tdm\n"
    "architecture.preset = 780nm\n"
    "architecture.n_outputs = 5\n"
    "architecture.p_c = 0.60\n"
    "source.chi = 0.3\n"
    "task.kind = matrix\n";

TEST(Runner, DefaultNames) {
    EXPECT_EQ(default_output_name(TaskKind::FidelitySweep), "fidelity_sweep.csv");
    EXPECT_EQ(default_output_name(TaskKind::Matrix), "matrix.csv");
}

TEST(Runner, MatrixRowsSumToOne) {
    std::istringstream in(render(kLoopMatrix));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "n\\m,0,1,2,3,4,5");
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string field;
        std::getline(fields, field, ',');
        EXPECT_EQ(std::stoi(field), rows);
        double total = 0.0;
        int count = 0;
        while (std::getline(fields, field, ',')) {
            total += std::stod(field);
            ++count;
        }
        EXPECT_EQ(count, 6);
        EXPECT_NEAR(total, 1.0, 1e-10);
        ++rows;
    }
    EXPECT_EQ(rows, default_n_max(5, 0.3) + 1);
}

TEST(Runner, IdenticalConfigsGiveIdenticalBytes) {
    const std::string validate = "task.kind = validate\ntask.seed = 4\ntask.oracle_specs = 5\n"
                                 "task.monte_carlo_specs = 3\ntask.trials = 50000\n";
    RunOptions one;
    RunOptions four;
    four.threads = 4;
    EXPECT_EQ(render(validate, one), render(validate, four));
    EXPECT_EQ(render(kLoopMatrix), render(kLoopMatrix));
}

TEST(Runner, SeedFlagOverridesConfig) {
    const std::string validate = "task.kind = validate\ntask.seed = 4\ntask.oracle_specs = 1\n"
                                 "task.monte_carlo_specs = 2\ntask.trials = 20000\n";
    RunOptions seeded;
    seeded.seed = 5;
    EXPECT_NE(render(validate), render(validate, seeded));
}

TEST(Runner, ValidateNeedsSeed) {
    EXPECT_THROW(render("task.kind = validate\ntask.oracle_specs = 1\n"), ConfigError);
    RunOptions seeded;
    seeded.seed = 1;
    EXPECT_NO_THROW(render("task.kind = validate\ntask.oracle_specs = 1\ntask.monte_carlo_specs = 0\n", seeded));
}

TEST(Runner, OptimizeSummary) {
    RunOutcome outcome;
    render_task(parse_config("architecture.kind = balanced_tdm\narchitecture.preset = 1550nm\n"
                             "source.chi = 0.3\ntask.kind = optimize\ntask.target_m = 3\n"),
                {}, outcome);
    ASSERT_EQ(outcome.summary.size(), 1u);
    EXPECT_NE(outcome.summary[0].find("m_min=2 m_opt=2"), std::string::npos) << outcome.summary[0];
}

TEST(Runner, ImpossibleOutcomeWarns) {
    RunOutcome outcome;
    const std::string csv = render_task(parse_config("architecture.kind = balanced_nport\narchitecture.n_outputs = 2\n"
                                                     "architecture.p_loss = 0\ntask.kind = fidelity-sweep\n"
                                                     "task.chi_grid = 0, 0.1\n"),
                                        {}, outcome);
    EXPECT_EQ(outcome.warnings.size(), 1u);
    EXPECT_NE(csv.find("\n0,,0,m=1\n"), std::string::npos);
}

TEST(Runner, WritesFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "pnrd_runner_test";
    std::filesystem::remove_all(dir);
    RunOptions options;
    options.out_dir = dir.string();
    RunOutcome outcome = run_experiment(parse_config(kLoopMatrix), options);
    ASSERT_EQ(outcome.files.size(), 1u);
    EXPECT_EQ(outcome.files[0], (dir / "matrix.csv").string());
    std::ifstream in(outcome.files[0]);
    std::stringstream contents;
    contents << in.rdbuf();
    EXPECT_EQ(contents.str(), render(kLoopMatrix));

    options.validate_only = true;
    std::filesystem::remove_all(dir);
    outcome = run_experiment(parse_config(kLoopMatrix), options);
    EXPECT_TRUE(outcome.files.empty());
    EXPECT_FALSE(std::filesystem::exists(dir));
}

TEST(Runner, CompareDefaultsToTdmFamilies) {
    RunOutcome outcome;
    const std::string csv = render_task(parse_config("architecture.preset = 780nm\nsource.chi = 0.3\n"
                                                     "task.kind = compare\ntask.target_m = 1\n"
                                                     "task.search_max = 4\n"),
                                        {}, outcome);
    EXPECT_NE(csv.find("\nloop_tdm,"), std::string::npos);
    EXPECT_NE(csv.find("\nbalanced_tdm,"), std::string::npos);
    EXPECT_NE(csv.find("\nideal,,,,1,"), std::string::npos);
}

}  // namespace
}  // namespace pnrd
