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

#include "pnrd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pnrd/csv.hpp"
#include "pnrd/probability_engine.hpp"

namespace pnrd {

namespace {

const std::set<std::string> kMetadataKeys{"fiber_length_m", "fiber_delay_ns", "gate_window_ns", "detector"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> items;
    while (true) {
        const auto comma = text.find(',');
        auto item = trim(text.substr(0, comma));
        if (!item.empty()) {
            items.push_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return items;
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

template <typename Int>
std::optional<Int> to_integer(std::string_view s) {
    s = trim(s);
    Int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

std::optional<TaskKind> to_task(std::string_view name) {
    for (auto kind : {TaskKind::Matrix, TaskKind::FidelitySweep, TaskKind::SignatureFidelity, TaskKind::Optimize,
                      TaskKind::Boundary, TaskKind::Compare, TaskKind::Validate}) {
        if (task_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

struct Entry {
    std::string value;
    int line;
};

// Key/value store that remembers line numbers and which keys were read.
class Entries {
   public:
    Entries(std::string_view text, std::string origin) : origin_(std::move(origin)) {
        int line_no = 0;
        std::istringstream in{std::string(text)};
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string_view line = raw;
            line = trim(line.substr(0, line.find('#')));
            if (line.empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ConfigError(origin_, line_no, std::string(line), "expected 'section.key = value'");
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (!valid_key(key)) {
                throw ConfigError(origin_, line_no, key, "keys look like 'section.name' using [a-z0-9_]");
            }
            if (entries_.contains(key)) {
                throw ConfigError(origin_, line_no, key,
                                  "duplicate key (first set on line " + std::to_string(entries_[key].line) + ")");
            }
            entries_[key] = {value, line_no};
        }
    }

    bool has(const std::string &key) const { return entries_.contains(key); }

    int line(const std::string &key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    [[noreturn]] void fail(const std::string &key, const std::string &reason) const {
        throw ConfigError(origin_, line(key), key, reason);
    }

    std::optional<std::string> text(const std::string &key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        used_.insert(key);
        if (it->second.value.empty()) {
            fail(key, "empty value");
        }
        return it->second.value;
    }

    std::optional<double> real(const std::string &key) {
        auto s = text(key);
        if (!s) {
            return std::nullopt;
        }
        auto v = to_double(*s);
        if (!v) {
            fail(key, "'" + *s + "' is not a number");
        }
        return v;
    }

    std::optional<double> probability(const std::string &key) {
        auto v = real(key);
        if (v && !(*v >= 0.0 && *v <= 1.0)) {
            fail(key, "must be a probability in [0, 1], got " + csv::format(*v));
        }
        return v;
    }

    std::optional<double> decibels(const std::string &key) {
        auto v = real(key);
        if (v && *v < 0.0) {
            fail(key, "dB loss must be >= 0, got " + csv::format(*v));
        }
        return v;
    }

    template <typename Int>
    std::optional<Int> integer(const std::string &key, Int min_value) {
        auto s = text(key);
        if (!s) {
            return std::nullopt;
        }
        auto v = to_integer<Int>(*s);
        if (!v) {
            fail(key, "'" + *s + "' is not an integer");
        }
        if (*v < min_value) {
            fail(key, "must be >= " + std::to_string(min_value));
        }
        return v;
    }

    std::optional<std::vector<double>> grid(const std::string &key) {
        auto s = text(key);
        if (!s) {
            return std::nullopt;
        }
        try {
            return parse_grid(*s);
        } catch (const std::domain_error &e) {
            fail(key, e.what());
        }
    }

    std::vector<int> integer_list(const std::string &key, int min_value) {
        std::vector<int> values;
        auto s = text(key);
        if (!s) {
            return values;
        }
        for (auto item : split_list(*s)) {
            auto v = to_integer<int>(item);
            if (!v || *v < min_value) {
                fail(key, "'" + std::string(item) + "' is not an integer >= " + std::to_string(min_value));
            }
            values.push_back(*v);
        }
        return values;
    }

    /// Keys under `architecture.` that were not consumed; used for metadata.
    std::vector<std::string> unused() const {
        std::vector<std::string> keys;
        for (const auto &[key, entry] : entries_) {
            if (!used_.contains(key)) {
                keys.push_back(key);
            }
        }
        return keys;
    }

    const std::string &origin() const { return origin_; }

   private:
    static bool valid_key(const std::string &key) {
        const auto dot = key.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos) {
            return false;
        }
        for (char c : key) {
            if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_' ||
                  c == '.')) {
                return false;
            }
        }
        return true;
    }

    std::string origin_;
    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

void parse_architecture(Entries &e, ArchitectureBlock &a) {
    if (auto kind = e.text("architecture.kind")) {
        try {
            a.kind = parse_family(*kind);
        } catch (const std::domain_error &err) {
            e.fail("architecture.kind", err.what());
        }
    }
    if (auto name = e.text("architecture.preset")) {
        try {
            const Preset &p = find_preset(*name);
            a.preset = p.name;
            a.params = p.params;
            a.metadata["fiber_length_m"] = csv::format(p.fiber_length_m);
            a.metadata["fiber_delay_ns"] = csv::format(p.fiber_delay_ns);
            a.metadata["gate_window_ns"] = csv::format(p.gate_window_ns);
            a.metadata["detector"] = p.detector;
        } catch (const std::domain_error &err) {
            e.fail("architecture.preset", err.what());
        }
    }
    if (auto v = e.decibels("architecture.coupler_loss_db")) a.params.coupler_loss_db = *v;
    if (auto v = e.decibels("architecture.fiber_loss_db")) a.params.fiber_loss_db = *v;
    if (auto v = e.decibels("architecture.switch_loss_db")) a.params.switch_loss_db = *v;
    if (auto v = e.probability("architecture.eta_det")) a.params.detector_efficiency = *v;
    if (auto v = e.probability("architecture.p_dc")) a.params.dark_count = *v;
    a.n_outputs = e.integer<int>("architecture.n_outputs", 1);
    a.coupling_ratio = e.probability("architecture.p_c");
    if (a.coupling_ratio && (*a.coupling_ratio <= 0.0 || *a.coupling_ratio >= 1.0)) {
        e.fail("architecture.p_c", "loop coupling ratio must lie strictly between 0 and 1");
    }
    a.stages = e.integer<int>("architecture.stages", 0);
    if (a.stages && *a.stages > 20) {
        e.fail("architecture.stages", "at most 20 stages are supported");
    }
    a.path_loss = e.probability("architecture.p_loss");
    for (const auto &key : kMetadataKeys) {
        if (auto v = e.text("architecture." + key)) {
            a.metadata[key] = *v;
        }
    }
}

void parse_source(Entries &e, SourceBlock &s) {
    s.chi = e.real("source.chi");
    if (s.chi && !(*s.chi >= 0.0 && *s.chi < 1.0)) {
        e.fail("source.chi", "down-conversion strength must lie in [0, 1)");
    }
    s.n_max = e.integer<int>("source.n_max", 0);
}

void parse_task(Entries &e, TaskBlock &t) {
    auto kind = e.text("task.kind");
    if (!kind) {
        throw ConfigError(e.origin(), 0, "task.kind", "missing; one of matrix, fidelity-sweep, signature-fidelity, "
                                                      "optimize, boundary, compare, validate");
    }
    auto task = to_task(*kind);
    if (!task) {
        e.fail("task.kind", "unknown task '" + *kind + "'");
    }
    t.kind = *task;
    if (auto v = e.integer<int>("task.target_m", 0)) t.target_m = *v;
    t.chi_grid = e.grid("task.chi_grid");
    if (t.chi_grid) {
        for (double chi : *t.chi_grid) {
            if (!(chi >= 0.0 && chi < 1.0)) {
                e.fail("task.chi_grid", "every chi must lie in [0, 1)");
            }
        }
    }
    if (auto v = e.text("task.signature")) {
        try {
            t.signature = Signature::parse(*v).str();
        } catch (const std::domain_error &err) {
            e.fail("task.signature", err.what());
        }
    }
    t.search_min = e.integer<int>("task.search_min", 0);
    t.search_max = e.integer<int>("task.search_max", 0);
    if (auto v = e.real("task.epsilon")) {
        if (!(*v > 0.0 && *v < 1.0)) {
            e.fail("task.epsilon", "truncation budget must lie strictly between 0 and 1");
        }
        t.epsilon = *v;
    }
    t.coupling_grid = e.grid("task.coupling_grid");
    if (t.coupling_grid) {
        for (double p : *t.coupling_grid) {
            if (!(p > 0.0 && p < 1.0)) {
                e.fail("task.coupling_grid", "coupling ratios must lie strictly between 0 and 1");
            }
        }
    }
    if (auto v = e.grid("task.dc_grid")) t.dc_grid = *v;
    if (auto v = e.grid("task.eta_grid")) t.eta_grid = *v;
    for (const auto *key : {"task.dc_grid", "task.eta_grid"}) {
        const auto &grid = std::string(key) == "task.dc_grid" ? t.dc_grid : t.eta_grid;
        for (double p : grid) {
            if (!(p >= 0.0 && p <= 1.0)) {
                e.fail(key, "grid values must be probabilities");
            }
        }
    }
    t.targets = e.integer_list("task.targets", 1);
    if (auto list = e.text("task.architectures")) {
        for (auto item : split_list(*list)) {
            try {
                t.architectures.push_back(parse_family(item));
            } catch (const std::domain_error &err) {
                e.fail("task.architectures", err.what());
            }
        }
    }
    t.output = e.text("task.output");
    t.seed = e.integer<std::uint64_t>("task.seed", 0);
    if (auto v = e.integer<std::uint64_t>("task.trials", 1)) t.trials = *v;
    if (auto v = e.integer<int>("task.oracle_specs", 0)) t.oracle_specs = *v;
    if (auto v = e.integer<int>("task.monte_carlo_specs", 0)) t.monte_carlo_specs = *v;
}

// Checks that need several keys at once.
void cross_validate(const Entries &e, const ExperimentConfig &c) {
    const TaskKind kind = c.task.kind;
    const bool needs_device =
        kind == TaskKind::Matrix || kind == TaskKind::FidelitySweep || kind == TaskKind::SignatureFidelity;
    if ((needs_device || kind == TaskKind::Optimize) && !c.architecture.kind) {
        e.fail("architecture.kind", "required for task " + std::string(task_name(kind)));
    }
    if (needs_device) {
        try {
            build(architecture_of(c.architecture));
        } catch (const std::domain_error &err) {
            e.fail("architecture.kind", err.what());
        }
    }
    if ((kind == TaskKind::Optimize || kind == TaskKind::Boundary || kind == TaskKind::Compare) && !c.source.chi) {
        e.fail("source.chi", "required for task " + std::string(task_name(kind)));
    }
    if ((kind == TaskKind::Optimize || kind == TaskKind::Boundary || kind == TaskKind::Compare ||
         kind == TaskKind::FidelitySweep) &&
        c.task.target_m < 1) {
        e.fail("task.target_m", "must be >= 1 for this task");
    }
    if (kind == TaskKind::Boundary) {
        if (c.architecture.kind && *c.architecture.kind != ArchitectureFamily::BalancedTdm) {
            e.fail("architecture.kind", "boundary maps apply to balanced_tdm only");
        }
        if (c.task.dc_grid.empty()) e.fail("task.dc_grid", "required for task boundary");
        if (c.task.eta_grid.empty()) e.fail("task.eta_grid", "required for task boundary");
    }
    if (kind == TaskKind::SignatureFidelity) {
        if (!c.task.signature) {
            e.fail("task.signature", "required for task signature-fidelity");
        }
        const int n = n_outputs(architecture_of(c.architecture));
        if (static_cast<int>(c.task.signature->size()) != n) {
            e.fail("task.signature", "has " + std::to_string(c.task.signature->size()) + " bits but the detector has " +
                                         std::to_string(n) + " outputs");
        }
    }
    if (kind == TaskKind::FidelitySweep && c.architecture.kind) {
        const int n = n_outputs(architecture_of(c.architecture));
        if (c.task.target_m > n) {
            e.fail("task.target_m", "exceeds the detector's " + std::to_string(n) + " outputs");
        }
    }
    if (c.source.chi && c.source.n_max) {
        try {
            PdcSource(*c.source.chi, *c.source.n_max);
        } catch (const std::domain_error &err) {
            e.fail("source.n_max", err.what());
        }
    }
}

}  // namespace

ConfigError::ConfigError(const std::string &origin, int line, const std::string &key, const std::string &reason)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " + key + ": " + reason), line_(line), key_(key) {}

const std::vector<Preset> &builtin_presets() {
    static const std::vector<Preset> presets{
        {"780nm", ComponentParams{0.4, 0.2, 2.0, 0.60, 5e-6}, 10.0, 50.0, 20.0, "silicon SPCM-AQR-13-FC"},
        {"1550nm", ComponentParams{0.5, 0.8, 1.2, 0.10, 9.6e-4}, 2000.0, 10000.0, 20.0, "InGaAs id200"},
    };
    return presets;
}

const Preset &find_preset(std::string_view name) {
    for (const auto &p : builtin_presets()) {
        if (p.name == name) {
            return p;
        }
    }
    throw std::domain_error("unknown preset '" + std::string(name) + "' (available: 780nm, 1550nm)");
}

std::string_view task_name(TaskKind kind) {
    switch (kind) {
        case TaskKind::Matrix:
            return "matrix";
        case TaskKind::FidelitySweep:
            return "fidelity-sweep";
        case TaskKind::SignatureFidelity:
            return "signature-fidelity";
        case TaskKind::Optimize:
            return "optimize";
        case TaskKind::Boundary:
            return "boundary";
        case TaskKind::Compare:
            return "compare";
        case TaskKind::Validate:
            return "validate";
    }
    throw std::logic_error("unknown task kind");
}

std::vector<double> parse_grid(std::string_view text) {
    std::vector<double> values;
    if (text.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::string_view rest = text;
        while (true) {
            const auto colon = rest.find(':');
            auto v = to_double(rest.substr(0, colon));
            if (!v) {
                throw std::domain_error("range must be 'start:stop:step'");
            }
            parts.push_back(*v);
            if (colon == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(colon + 1);
        }
        if (parts.size() != 3 || parts[2] <= 0.0 || parts[1] < parts[0]) {
            throw std::domain_error("range must be 'start:stop:step' with step > 0 and stop >= start");
        }
        const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
        for (long i = 0; i <= count; ++i) {
            values.push_back(parts[0] + static_cast<double>(i) * parts[2]);
        }
        return values;
    }
    for (auto item : split_list(text)) {
        auto v = to_double(item);
        if (!v) {
            throw std::domain_error("'" + std::string(item) + "' is not a number");
        }
        values.push_back(*v);
    }
    if (values.empty()) {
        throw std::domain_error("empty grid");
    }
    return values;
}

ExperimentConfig parse_config(std::string_view text, const std::string &origin) {
    Entries entries(text, origin);
    ExperimentConfig config;
    parse_architecture(entries, config.architecture);
    parse_source(entries, config.source);
    parse_task(entries, config.task);
    for (const auto &key : entries.unused()) {
        entries.fail(key, "unknown key");
    }
    cross_validate(entries, config);
    return config;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "-", "cannot open file");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

namespace {

void line(std::string &out, const std::string &key, const std::string &value) { out += key + " = " + value + "\n"; }

std::string list_text(const std::vector<double> &values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        s += (i ? ", " : "") + csv::format(values[i]);
    }
    return s;
}

}  // namespace

std::string preset_text(const Preset &preset) {
    std::string out;
    line(out, "architecture.preset", preset.name);
    line(out, "architecture.coupler_loss_db", csv::format(preset.params.coupler_loss_db));
    line(out, "architecture.fiber_loss_db", csv::format(preset.params.fiber_loss_db));
    line(out, "architecture.switch_loss_db", csv::format(preset.params.switch_loss_db));
    line(out, "architecture.eta_det", csv::format(preset.params.detector_efficiency));
    line(out, "architecture.p_dc", csv::format(preset.params.dark_count));
    line(out, "architecture.fiber_length_m", csv::format(preset.fiber_length_m));
    line(out, "architecture.fiber_delay_ns", csv::format(preset.fiber_delay_ns));
    line(out, "architecture.gate_window_ns", csv::format(preset.gate_window_ns));
    line(out, "architecture.detector", preset.detector);
    return out;
}

std::string to_text(const ExperimentConfig &config) {
    std::string out;
    const ArchitectureBlock &a = config.architecture;
    if (a.kind) line(out, "architecture.kind", std::string(family_name(*a.kind)));
    if (a.preset) line(out, "architecture.preset", *a.preset);
    line(out, "architecture.coupler_loss_db", csv::format(a.params.coupler_loss_db));
    line(out, "architecture.fiber_loss_db", csv::format(a.params.fiber_loss_db));
    line(out, "architecture.switch_loss_db", csv::format(a.params.switch_loss_db));
    line(out, "architecture.eta_det", csv::format(a.params.detector_efficiency));
    line(out, "architecture.p_dc", csv::format(a.params.dark_count));
    if (a.n_outputs) line(out, "architecture.n_outputs", std::to_string(*a.n_outputs));
    if (a.coupling_ratio) line(out, "architecture.p_c", csv::format(*a.coupling_ratio));
    if (a.stages) line(out, "architecture.stages", std::to_string(*a.stages));
    if (a.path_loss) line(out, "architecture.p_loss", csv::format(*a.path_loss));
    for (const auto &[key, value] : a.metadata) {
        line(out, "architecture." + key, value);
    }

    const SourceBlock &s = config.source;
    if (s.chi) line(out, "source.chi", csv::format(*s.chi));
    if (s.n_max) line(out, "source.n_max", std::to_string(*s.n_max));

    const TaskBlock &t = config.task;
    line(out, "task.kind", std::string(task_name(t.kind)));
    line(out, "task.target_m", std::to_string(t.target_m));
    if (t.chi_grid) line(out, "task.chi_grid", list_text(*t.chi_grid));
    if (t.signature) line(out, "task.signature", *t.signature);
    if (t.search_min) line(out, "task.search_min", std::to_string(*t.search_min));
    if (t.search_max) line(out, "task.search_max", std::to_string(*t.search_max));
    line(out, "task.epsilon", csv::format(t.epsilon));
    if (t.coupling_grid) line(out, "task.coupling_grid", list_text(*t.coupling_grid));
    if (!t.dc_grid.empty()) line(out, "task.dc_grid", list_text(t.dc_grid));
    if (!t.eta_grid.empty()) line(out, "task.eta_grid", list_text(t.eta_grid));
    if (!t.targets.empty()) {
        std::string s2;
        for (std::size_t i = 0; i < t.targets.size(); ++i) {
            s2 += (i ? ", " : "") + std::to_string(t.targets[i]);
        }
        line(out, "task.targets", s2);
    }
    if (!t.architectures.empty()) {
        std::string s2;
        for (std::size_t i = 0; i < t.architectures.size(); ++i) {
            s2 += (i ? ", " : "") + std::string(family_name(t.architectures[i]));
        }
        line(out, "task.architectures", s2);
    }
    if (t.output) line(out, "task.output", *t.output);
    if (t.seed) line(out, "task.seed", std::to_string(*t.seed));
    line(out, "task.trials", std::to_string(t.trials));
    line(out, "task.oracle_specs", std::to_string(t.oracle_specs));
    line(out, "task.monte_carlo_specs", std::to_string(t.monte_carlo_specs));
    return out;
}

ArchitectureKind architecture_of(const ArchitectureBlock &block) {
    if (!block.kind) {
        throw std::domain_error("architecture.kind is not set");
    }
    auto need = [&](const auto &field, const char *key) {
        if (!field) {
            throw std::domain_error(std::string(key) + " is required for " + std::string(family_name(*block.kind)));
        }
        return *field;
    };
    switch (*block.kind) {
        case ArchitectureFamily::BalancedNPort:
            return BalancedNPort{need(block.n_outputs, "architecture.n_outputs"),
                                 block.path_loss.value_or(1.0 - block.params.detector_efficiency),
                                 block.params.dark_count};
        case ArchitectureFamily::LoopTdm:
            return LoopTdm{need(block.n_outputs, "architecture.n_outputs"), need(block.coupling_ratio, "architecture.p_c"),
                           block.params};
        case ArchitectureFamily::BalancedTdm:
            return BalancedTdm{need(block.stages, "architecture.stages"), block.params};
    }
    throw std::logic_error("unknown architecture family");
}

PdcSource source_of(const SourceBlock &block, int min_n_max) {
    if (!block.chi) {
        throw std::domain_error("source.chi is not set");
    }
    if (block.n_max) {
        return PdcSource(*block.chi, std::max(*block.n_max, min_n_max));
    }
    return PdcSource::with_default_cutoff(*block.chi, min_n_max);
}

}  // namespace pnrd
