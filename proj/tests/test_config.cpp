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

#include "pnrd/config.hpp"

namespace pnrd {
namespace {

int error_line(const std::string &text, std::string *key = nullptr) {
    try {
        parse_config(text);
    } catch (const ConfigError &e) {
        if (key) {
            *key = e.key();
        }
        return e.line();
    }
    return -1;
}

TEST(Presets, TableValues) {
    const Preset &si = find_preset("780nm");
    EXPECT_EQ(si.params.detector_efficiency, 0.60);
    EXPECT_EQ(si.params.switch_loss_db, 2.0);
    EXPECT_EQ(si.params.coupler_loss_db, 0.4);
    EXPECT_EQ(si.params.fiber_loss_db, 0.2);
    EXPECT_EQ(si.params.dark_count, 5e-6);
    const Preset &ingaas = find_preset("1550nm");
    EXPECT_EQ(ingaas.params.dark_count, 9.6e-4);
    EXPECT_EQ(ingaas.params.detector_efficiency, 0.10);
    EXPECT_EQ(ingaas.fiber_length_m, 2000.0);
    EXPECT_THROW(find_preset("900nm"), std::domain_error);
}

TEST(Presets, RoundTrip) {
    for (const auto &p : builtin_presets()) {
        ExperimentConfig c = parse_config(preset_text(p) + "architecture.kind = balanced_tdm\narchitecture.stages = 2\n"
                                          "task.kind = matrix\n");
        EXPECT_EQ(c.architecture.params, p.params);
        ExperimentConfig again = parse_config(to_text(c));
        EXPECT_EQ(again, c) << to_text(c);
    }
}

TEST(Parse, PresetWithOverride) {
    ExperimentConfig c = parse_config(
        "# comment\n"
        "architecture.kind = loop_tdm   # trailing\n"
        "architecture.eta_det = 0.9\n"
        "architecture.preset = 780nm\n"
        "architecture.n_outputs = 5\n"
        "architecture.p_c = 0.6\n"
        "\n"
        "task.kind = matrix\n");
    EXPECT_EQ(c.architecture.params.detector_efficiency, 0.9);
    EXPECT_EQ(c.architecture.params.switch_loss_db, 2.0);
    EXPECT_EQ(c.architecture.metadata.at("gate_window_ns"), "20");
    EXPECT_EQ(n_outputs(architecture_of(c.architecture)), 5);
    EXPECT_EQ(parse_config(to_text(c)), c);
}

TEST(Parse, FullTaskRoundTrip) {
    ExperimentConfig c = parse_config(
        "architecture.kind = balanced_tdm\n"
        "architecture.preset = 780nm\n"
        "source.chi = 0.3\n"
        "source.n_max = 40\n"
        "task.kind = boundary\n"
        "task.target_m = 2\n"
        "task.targets = 1, 2, 3\n"
        "task.dc_grid = 1e-6, 1e-3\n"
        "task.eta_grid = 0.1:0.5:0.2\n"
        "task.output = out/b.csv\n");
    EXPECT_EQ(c.task.eta_grid.size(), 3u);
    EXPECT_EQ(c.task.targets, (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(parse_config(to_text(c)), c);
}

TEST(Parse, LinePreciseErrors) {
    std::string key;
    EXPECT_EQ(error_line("task.kind = matrix\narchitecture.kind = loop_tdm\narchitecture.p_dc = 1.5\n", &key), 3);
    EXPECT_EQ(key, "architecture.p_dc");
    EXPECT_EQ(error_line("task.kind = matrix\n\narchitecture.coupler_loss_db = -1\n", &key), 3);
    EXPECT_EQ(error_line("task.kind = validate\ntask.bogus = 1\n", &key), 2);
    EXPECT_EQ(key, "task.bogus");
    EXPECT_EQ(error_line("task.kind = validate\ntask.kind = matrix\n"), 2);
    EXPECT_EQ(error_line("task.kind = validate\nthis line is wrong\n"), 2);
    EXPECT_EQ(error_line("task.kind = dance\n"), 1);
    EXPECT_EQ(error_line("task.kind = validate\ntask.trials = many\n"), 2);
    EXPECT_EQ(error_line("task.kind = validate\nsource.chi = 1.0\n"), 2);
    EXPECT_EQ(error_line("architecture.preset = 900nm\ntask.kind = validate\n"), 1);
    EXPECT_EQ(error_line("task.kind = fidelity-sweep\ntask.chi_grid = 0:1:0\narchitecture.kind = balanced_tdm\n"), 2);
}

TEST(Parse, CrossFieldChecks) {
    std::string key;
    error_line("task.kind = matrix\narchitecture.kind = loop_tdm\narchitecture.n_outputs = 3\n", &key);
    EXPECT_EQ(key, "architecture.kind");
    EXPECT_EQ(error_line("architecture.kind = balanced_nport\narchitecture.n_outputs = 3\n"
                         "task.kind = signature-fidelity\ntask.signature = 10\n",
                         &key),
              4);
    EXPECT_EQ(key, "task.signature");
    error_line("task.kind = optimize\narchitecture.kind = balanced_tdm\n", &key);
    EXPECT_EQ(key, "source.chi");
    error_line("task.kind = boundary\narchitecture.kind = balanced_tdm\nsource.chi = 0.3\ntask.eta_grid = 0.5\n", &key);
    EXPECT_EQ(key, "task.dc_grid");
    EXPECT_EQ(error_line("task.kind = validate\nsource.chi = 0.3\nsource.n_max = 2\n", &key), 3);
}

TEST(Parse, MissingTask) {
    EXPECT_THROW(parse_config("architecture.kind = loop_tdm\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/file.conf"), ConfigError);
}

TEST(Parse, ErrorMessageFormat) {
    try {
        parse_config("task.kind = validate\ntask.seed = -3\n", "x.conf");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(std::string(e.what()).rfind("x.conf:2: task.seed: ", 0), 0u) << e.what();
    }
}

TEST(Grid, Forms) {
    EXPECT_EQ(parse_grid("0.1, 0.2,0.3"), (std::vector<double>{0.1, 0.2, 0.3}));
    auto g = parse_grid("0:0.9:0.01");
    EXPECT_EQ(g.size(), 91u);
    EXPECT_EQ(g[50], 0.5);
    EXPECT_THROW(parse_grid("1:0:0.1"), std::domain_error);
    EXPECT_THROW(parse_grid("0:1"), std::domain_error);
    EXPECT_THROW(parse_grid("a,b"), std::domain_error);
}

TEST(Source, Defaults) {
    SourceBlock s;
    s.chi = 0.3;
    EXPECT_EQ(source_of(s).n_max(), pdc_photon_cutoff(0.3));
    EXPECT_EQ(source_of(s, 50).n_max(), 50);
    s.n_max = 30;
    EXPECT_EQ(source_of(s).n_max(), 30);
    EXPECT_THROW(source_of(SourceBlock{}), std::domain_error);
}

TEST(TaskNames, AllDistinct) {
    EXPECT_EQ(task_name(TaskKind::FidelitySweep), "fidelity-sweep");
    EXPECT_EQ(task_name(TaskKind::SignatureFidelity), "signature-fidelity");
}

}  // namespace
}  // namespace pnrd
