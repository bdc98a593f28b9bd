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

#ifndef PNRD_STATE_PREP_HPP
#define PNRD_STATE_PREP_HPP

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnrd/detector_model.hpp"
#include "pnrd/measurement_ops.hpp"
#include "pnrd/probability_engine.hpp"

namespace pnrd {

inline constexpr double kDefaultTailMass = 1e-10;

/// Smallest n_max with sum_{n > n_max} (1 - chi^2) chi^(2n) = chi^(2(n_max+1))
/// below `tail`.
int pdc_photon_cutoff(double chi, double tail = kDefaultTailMass);

/// max(N, pdc_photon_cutoff(chi)).
int default_n_max(int n_outputs, double chi);

/// Two-mode squeezed vacuum from non-degenerate down-conversion, truncated
/// at n_max photons per arm. Both arms carry the same number distribution
/// (1 - chi^2) chi^(2n).
class PdcSource {
   public:
    /// Throws std::domain_error unless 0 <= chi < 1 and the tail beyond
    /// n_max is below 1e-10.
    PdcSource(double chi, int n_max);

    /// Smallest valid cutoff, raised to at least min_n_max.
    static PdcSource with_default_cutoff(double chi, int min_n_max = 0);

    double chi() const { return chi_; }
    int n_max() const { return n_max_; }
    double tail_mass() const;

   private:
    double chi_;
    int n_max_;
};

DiagonalOperator pdc_number_distribution(const PdcSource &source);

struct PreparationReport {
    double fidelity;
    double detection_probability;
    DiagonalOperator prepared_state;
};

/// Herald on an outcome whose likelihood given n photons is
/// outcome_given_n[n], targeting the Fock state |target>. Returns
/// std::nullopt when the outcome cannot occur for this source.
std::optional<PreparationReport> condition_on_outcome(const Eigen::VectorXd &outcome_given_n, int target,
                                                      const PdcSource &source);

/// Herald on m clicks, targeting |m>.
std::optional<PreparationReport> condition_on_clicks(const ConditionalMatrix &cm, int m, const PdcSource &source);

/// Fidelity with |sig.click_count()> after heralding on this exact pattern.
std::optional<double> signature_conditioned_fidelity(const DetectorSpec &spec, const Signature &sig,
                                                     const PdcSource &source);

struct SweepRow {
    double chi;
    std::optional<double> fidelity;  // empty when the outcome is impossible
    double detection_probability;
};

/// chi = 0, 0.01, ..., 0.90.
std::vector<double> default_chi_grid();

/// Fidelity and detection probability of heralding on m clicks across a
/// grid of source strengths. photon_cutoff overrides the matrix cutoff
/// (default: the cutoff needed by the largest chi in the grid).
std::vector<SweepRow> fidelity_sweep(const ArchitectureKind &arch, int m, std::span<const double> chi_grid,
                                     std::optional<int> photon_cutoff = std::nullopt);

std::vector<SweepRow> signature_fidelity_sweep(const DetectorSpec &spec, const Signature &sig,
                                               std::span<const double> chi_grid,
                                               std::optional<int> photon_cutoff = std::nullopt);

/// Header `chi,fidelity,p_det,n_or_m_context`.
std::string to_csv(const std::vector<SweepRow> &rows, const std::string &context);

}  // namespace pnrd

#endif  // PNRD_STATE_PREP_HPP
