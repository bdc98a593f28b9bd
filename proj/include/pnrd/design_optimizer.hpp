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

#ifndef PNRD_DESIGN_OPTIMIZER_HPP
#define PNRD_DESIGN_OPTIMIZER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pnrd/detector_model.hpp"
#include "pnrd/state_prep.hpp"

namespace pnrd {

enum class ArchitectureFamily { BalancedNPort, LoopTdm, BalancedTdm };

std::string_view family_name(ArchitectureFamily family);

/// Accepts the names produced by family_name().
ArchitectureFamily parse_family(std::string_view name);

inline constexpr int kDefaultMaxBins = 64;
inline constexpr int kDefaultMaxStages = 6;
inline constexpr double kDefaultTruncationBudget = 0.01;

/// A request to pick the best detector of one family for heralding |target_m>
/// from a down-conversion source.
struct DesignQuery {
    int target_m = 1;
    PdcSource source = PdcSource::with_default_cutoff(0.3);
    ArchitectureFamily family = ArchitectureFamily::BalancedTdm;
    ComponentParams params;

    /// Balanced N-port only. Defaults to 1 - eta_det (detector loss only).
    std::optional<double> nport_path_loss;

    /// Loop TDM only: largest acceptable (1 - p_c)^N.
    double truncation_error_budget = kDefaultTruncationBudget;

    /// Bin range for N-port / loop TDM, stage range for balanced TDM.
    /// The lower bound is never allowed below N_min / m_min.
    std::optional<int> search_min;
    std::optional<int> search_max;

    /// Loop TDM only: coupling ratios tried above the truncation floor.
    /// Defaults to 0.01 steps up to 0.99.
    std::optional<std::vector<double>> coupling_grid;
};

struct Candidate {
    int n_outputs = 0;
    std::optional<int> stages;
    std::optional<double> coupling_ratio;
    std::optional<double> fidelity;  // empty when the herald cannot occur
    double detection_probability = 0.0;
    std::optional<double> gap_to_max;
};

struct DesignResult {
    ArchitectureFamily family;
    int target_m;
    int minimum;  // N_min or m_min
    std::size_t chosen_index;
    std::vector<Candidate> trace;

    const Candidate &chosen() const { return trace[chosen_index]; }
};

/// (1 - p_c)^N: chance a photon is still in the loop after N bins.
double truncation_error(double coupling_ratio, int n_bins);

/// Smallest coupling ratio whose truncation error is at most epsilon.
double loop_coupling_for_error(int n_bins, double epsilon);

/// Minimum stage count able to resolve target_m photons: ceil(log2(target_m)).
int minimum_stages(int target_m);

/// Exhaustive search over N for the N-port or loop TDM families. For loop
/// TDM every N is tried at the truncation floor and at each larger coupling
/// ratio of the grid. Ties on fidelity go to smaller N, then larger p_det.
DesignResult optimize_bins(const DesignQuery &query, int threads = 1);

/// Exhaustive search over the stage count of a balanced TDM detector.
DesignResult optimize_stages(const DesignQuery &query, int threads = 1);

/// Dispatches on query.family.
DesignResult optimize(const DesignQuery &query, int threads = 1);

struct BoundaryRow {
    double dark_count;
    double detector_efficiency;
    int target_m;
    bool benefits;  // m_opt > m_min
};

/// For every (p_dc, eta_det) pair, whether a balanced TDM detector built from
/// base.params with those detector figures prefers more than m_min stages.
std::vector<BoundaryRow> benefit_boundary(const DesignQuery &base, std::span<const double> dark_counts,
                                          std::span<const double> efficiencies, int threads = 1);

struct ComparisonRow {
    std::string architecture;
    std::optional<int> n_outputs;
    std::optional<int> stages;
    std::optional<double> coupling_ratio;
    std::optional<double> fidelity;
    double detection_probability;
};

/// Optimizes every query and appends the ideal number-resolving detector
/// row. All queries must share target_m and the source strength.
std::vector<ComparisonRow> compare_architectures(std::span<const DesignQuery> queries, int threads = 1);

std::string to_csv(const DesignResult &result);
std::string to_csv(const std::vector<BoundaryRow> &rows);
std::string to_csv(const std::vector<ComparisonRow> &rows);

}  // namespace pnrd

#endif  // PNRD_DESIGN_OPTIMIZER_HPP
