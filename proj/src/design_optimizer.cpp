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

#include "pnrd/design_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pnrd/csv.hpp"
#include "pnrd/parallel.hpp"

namespace pnrd {

namespace {

constexpr double kGridStep = 0.01;
constexpr double kMaxCoupling = 0.99;

void check_target(const DesignQuery &query) {
    if (query.target_m < 1) {
        throw std::domain_error("target photon number must be >= 1");
    }
}

std::vector<double> coupling_candidates(const DesignQuery &query, double floor) {
    std::vector<double> ratios{floor};
    if (query.coupling_grid) {
        for (double p : *query.coupling_grid) {
            if (p > floor && p < 1.0) {
                ratios.push_back(p);
            }
        }
        std::sort(ratios.begin() + 1, ratios.end());
        ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());
        return ratios;
    }
    const int first = static_cast<int>(std::floor(floor / kGridStep)) + 1;
    const int last = static_cast<int>(std::lround(kMaxCoupling / kGridStep));
    for (int k = first; k <= last; ++k) {
        double p = k * kGridStep;
        if (p > floor) {
            ratios.push_back(p);
        }
    }
    return ratios;
}

// Candidate geometry before evaluation.
struct Layout {
    ArchitectureKind arch;
    Candidate candidate;
};

void evaluate(std::vector<Layout> &layouts, const DesignQuery &query, int threads) {
    parallel_for(layouts.size(), threads, [&](std::size_t i) {
        Layout &layout = layouts[i];
        const Eigen::VectorXd row = click_row(build(layout.arch), query.target_m, query.source.n_max());
        auto report = condition_on_outcome(row, query.target_m, query.source);
        if (report) {
            layout.candidate.fidelity = report->fidelity;
            layout.candidate.detection_probability = report->detection_probability;
        }
    });
}

bool better(const Candidate &a, const Candidate &b) {
    if (!b.fidelity) {
        return a.fidelity.has_value();
    }
    if (!a.fidelity) {
        return false;
    }
    if (*a.fidelity != *b.fidelity) {
        return *a.fidelity > *b.fidelity;
    }
    if (a.n_outputs != b.n_outputs) {
        return a.n_outputs < b.n_outputs;
    }
    return a.detection_probability > b.detection_probability;
}

DesignResult assemble(const DesignQuery &query, int minimum, std::vector<Layout> layouts) {
    DesignResult result{query.family, query.target_m, minimum, 0, {}};
    result.trace.reserve(layouts.size());
    for (auto &layout : layouts) {
        result.trace.push_back(std::move(layout.candidate));
    }
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
        if (better(result.trace[i], result.trace[result.chosen_index])) {
            result.chosen_index = i;
        }
    }
    const Candidate &best = result.chosen();
    if (!best.fidelity) {
        throw std::domain_error("no candidate in the search range can herald " + std::to_string(query.target_m) +
                                " photons");
    }
    for (auto &c : result.trace) {
        if (c.fidelity) {
            c.gap_to_max = *best.fidelity - *c.fidelity;
        }
    }
    return result;
}

std::pair<int, int> search_range(const DesignQuery &query, int minimum, int default_max) {
    const int lo = std::max(query.search_min.value_or(minimum), minimum);
    const int hi = query.search_max.value_or(default_max);
    if (lo > hi) {
        throw std::domain_error("empty search range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return {lo, hi};
}

}  // namespace

std::string_view family_name(ArchitectureFamily family) {
    switch (family) {
        case ArchitectureFamily::BalancedNPort:
            return "balanced_nport";
        case ArchitectureFamily::LoopTdm:
            return "loop_tdm";
        case ArchitectureFamily::BalancedTdm:
            return "balanced_tdm";
    }
    throw std::logic_error("unknown architecture family");
}

ArchitectureFamily parse_family(std::string_view name) {
    for (auto family : {ArchitectureFamily::BalancedNPort, ArchitectureFamily::LoopTdm, ArchitectureFamily::BalancedTdm}) {
        if (family_name(family) == name) {
            return family;
        }
    }
    throw std::domain_error("unknown architecture '" + std::string(name) +
                            "' (expected balanced_nport, loop_tdm or balanced_tdm)");
}

double truncation_error(double coupling_ratio, int n_bins) {
    if (!(coupling_ratio > 0.0 && coupling_ratio < 1.0) || n_bins < 1) {
        throw std::domain_error("truncation error needs 0 < p_c < 1 and N >= 1");
    }
    return std::pow(1.0 - coupling_ratio, n_bins);
}

double loop_coupling_for_error(int n_bins, double epsilon) {
    if (n_bins < 1 || !(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::domain_error("coupling for error needs N >= 1 and 0 < epsilon < 1");
    }
    return 1.0 - std::pow(epsilon, 1.0 / n_bins);
}

int minimum_stages(int target_m) {
    if (target_m < 1) {
        throw std::domain_error("target photon number must be >= 1");
    }
    int stages = 0;
    while ((1 << stages) < target_m) {
        ++stages;
    }
    return stages;
}

DesignResult optimize_bins(const DesignQuery &query, int threads) {
    check_target(query);
    query.params.validate();
    if (query.family == ArchitectureFamily::BalancedTdm) {
        throw std::domain_error("optimize_bins handles balanced_nport and loop_tdm; use optimize_stages");
    }
    const int n_min = query.target_m;
    const auto [lo, hi] = search_range(query, n_min, kDefaultMaxBins);

    std::vector<Layout> layouts;
    for (int n = lo; n <= hi; ++n) {
        if (query.family == ArchitectureFamily::BalancedNPort) {
            double loss = query.nport_path_loss.value_or(1.0 - query.params.detector_efficiency);
            Candidate c;
            c.n_outputs = n;
            layouts.push_back({BalancedNPort{n, loss, query.params.dark_count}, c});
            continue;
        }
        const double floor = loop_coupling_for_error(n, query.truncation_error_budget);
        for (double p : coupling_candidates(query, floor)) {
            Candidate c;
            c.n_outputs = n;
            c.coupling_ratio = p;
            layouts.push_back({LoopTdm{n, p, query.params}, c});
        }
    }
    evaluate(layouts, query, threads);
    return assemble(query, n_min, std::move(layouts));
}

DesignResult optimize_stages(const DesignQuery &query, int threads) {
    check_target(query);
    query.params.validate();
    if (query.family != ArchitectureFamily::BalancedTdm) {
        throw std::domain_error("optimize_stages handles balanced_tdm only");
    }
    const int m_min = minimum_stages(query.target_m);
    const auto [lo, hi] = search_range(query, m_min, kDefaultMaxStages);

    std::vector<Layout> layouts;
    for (int stages = lo; stages <= hi; ++stages) {
        Candidate c;
        c.n_outputs = 1 << stages;
        c.stages = stages;
        layouts.push_back({BalancedTdm{stages, query.params}, c});
    }
    evaluate(layouts, query, threads);
    return assemble(query, m_min, std::move(layouts));
}

DesignResult optimize(const DesignQuery &query, int threads) {
    return query.family == ArchitectureFamily::BalancedTdm ? optimize_stages(query, threads)
                                                           : optimize_bins(query, threads);
}

std::vector<BoundaryRow> benefit_boundary(const DesignQuery &base, std::span<const double> dark_counts,
                                          std::span<const double> efficiencies, int threads) {
    if (dark_counts.empty() || efficiencies.empty()) {
        throw std::domain_error("boundary grids must be non-empty");
    }
    std::vector<BoundaryRow> rows;
    for (double dc : dark_counts) {
        for (double eta : efficiencies) {
            rows.push_back({dc, eta, base.target_m, false});
        }
    }
    // Each point runs its own (cheap) stage search; parallelize over points.
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        DesignQuery query = base;
        query.family = ArchitectureFamily::BalancedTdm;
        query.params.dark_count = rows[i].dark_count;
        query.params.detector_efficiency = rows[i].detector_efficiency;
        DesignResult result = optimize_stages(query, 1);
        rows[i].benefits = *result.chosen().stages > result.minimum;
    });
    return rows;
}

std::vector<ComparisonRow> compare_architectures(std::span<const DesignQuery> queries, int threads) {
    if (queries.empty()) {
        throw std::domain_error("nothing to compare");
    }
    const int target = queries.front().target_m;
    const double chi = queries.front().source.chi();
    for (const auto &q : queries) {
        if (q.target_m != target || q.source.chi() != chi) {
            throw std::domain_error("compared queries must share target photon number and source strength");
        }
    }

    std::vector<ComparisonRow> rows;
    for (const auto &q : queries) {
        DesignResult result = optimize(q, threads);
        const Candidate &best = result.chosen();
        rows.push_back({std::string(family_name(q.family)), best.n_outputs, best.stages, best.coupling_ratio,
                        best.fidelity, best.detection_probability});
    }
    const double ratio = chi * chi;
    rows.push_back({"ideal", std::nullopt, std::nullopt, std::nullopt, 1.0, (1.0 - ratio) * std::pow(ratio, target)});
    return rows;
}

namespace {

std::string field(const std::optional<int> &v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace

std::string to_csv(const DesignResult &result) {
    std::string out = csv::join({"candidate", "n_outputs", "stages", "p_c", "fidelity", "p_det", "gap_to_max", "chosen"});
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        const Candidate &c = result.trace[i];
        out += csv::join({std::to_string(i), std::to_string(c.n_outputs), field(c.stages), csv::format(c.coupling_ratio),
                          csv::format(c.fidelity), csv::format(c.detection_probability), csv::format(c.gap_to_max),
                          i == result.chosen_index ? "1" : "0"});
    }
    return out;
}

std::string to_csv(const std::vector<BoundaryRow> &rows) {
    std::string out = csv::join({"p_dc", "eta_det", "target_m", "benefits"});
    for (const auto &row : rows) {
        out += csv::join({csv::format(row.dark_count), csv::format(row.detector_efficiency),
                          std::to_string(row.target_m), row.benefits ? "1" : "0"});
    }
    return out;
}

std::string to_csv(const std::vector<ComparisonRow> &rows) {
    std::string out = csv::join({"architecture", "n_outputs", "stages", "p_c", "fidelity", "p_det"});
    for (const auto &row : rows) {
        out += csv::join({row.architecture, field(row.n_outputs), field(row.stages), csv::format(row.coupling_ratio),
                          csv::format(row.fidelity), csv::format(row.detection_probability)});
    }
    return out;
}

}  // namespace pnrd
