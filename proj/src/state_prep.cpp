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

#include "pnrd/state_prep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pnrd/csv.hpp"

namespace pnrd {

namespace {

void check_chi(double chi) {
    if (!(chi >= 0.0 && chi < 1.0)) {
        throw std::domain_error("down-conversion strength must lie in [0, 1), got " + csv::format(chi));
    }
}

int grid_cutoff(std::span<const double> chi_grid, std::optional<int> photon_cutoff) {
    if (chi_grid.empty()) {
        throw std::domain_error("chi grid is empty");
    }
    if (photon_cutoff) {
        return *photon_cutoff;
    }
    int cutoff = 0;
    for (double chi : chi_grid) {
        cutoff = std::max(cutoff, pdc_photon_cutoff(chi));
    }
    return cutoff;
}

std::vector<SweepRow> sweep(const Eigen::VectorXd &outcome_given_n, int target, std::span<const double> chi_grid) {
    const int cutoff = static_cast<int>(outcome_given_n.size()) - 1;
    std::vector<SweepRow> rows;
    rows.reserve(chi_grid.size());
    for (double chi : chi_grid) {
        PdcSource source(chi, cutoff);
        auto report = condition_on_outcome(outcome_given_n, target, source);
        if (report) {
            rows.push_back({chi, report->fidelity, report->detection_probability});
        } else {
            rows.push_back({chi, std::nullopt, 0.0});
        }
    }
    return rows;
}

}  // namespace

int pdc_photon_cutoff(double chi, double tail) {
    check_chi(chi);
    const double ratio = chi * chi;
    int n = 0;
    while (std::pow(ratio, n + 1) >= tail) {
        ++n;
    }
    return n;
}

int default_n_max(int n_outputs, double chi) { return std::max(n_outputs, pdc_photon_cutoff(chi)); }

PdcSource::PdcSource(double chi, int n_max) : chi_(chi), n_max_(n_max) {
    check_chi(chi);
    if (n_max < 0) {
        throw std::domain_error("photon cutoff must be non-negative");
    }
    if (tail_mass() >= kDefaultTailMass) {
        throw std::domain_error("photon cutoff " + std::to_string(n_max) + " leaves tail mass " +
                                csv::format(tail_mass()) + " for chi = " + csv::format(chi));
    }
}

PdcSource PdcSource::with_default_cutoff(double chi, int min_n_max) {
    return PdcSource(chi, std::max(min_n_max, pdc_photon_cutoff(chi)));
}

double PdcSource::tail_mass() const { return std::pow(chi_ * chi_, n_max_ + 1); }

DiagonalOperator pdc_number_distribution(const PdcSource &source) {
    const double ratio = source.chi() * source.chi();
    Eigen::VectorXd d(source.n_max() + 1);
    double term = 1.0 - ratio;
    for (int n = 0; n <= source.n_max(); ++n) {
        d[n] = term;
        term *= ratio;
    }
    return DiagonalOperator(std::move(d));
}

std::optional<PreparationReport> condition_on_outcome(const Eigen::VectorXd &outcome_given_n, int target,
                                                      const PdcSource &source) {
    if (outcome_given_n.size() < source.n_max() + 1) {
        throw std::domain_error("outcome likelihoods cover n <= " + std::to_string(outcome_given_n.size() - 1) +
                                " but the source needs n <= " + std::to_string(source.n_max()));
    }
    if (target < 0) {
        throw std::domain_error("target photon number must be non-negative");
    }
    const Eigen::VectorXd photons = pdc_number_distribution(source).diag();
    const Eigen::VectorXd joint = outcome_given_n.head(photons.size()).cwiseProduct(photons);
    const double p_det = joint.sum();
    if (!(p_det > 0.0)) {
        return std::nullopt;
    }
    DiagonalOperator prepared(joint / p_det);
    const double fidelity = target <= source.n_max() ? prepared[target] : 0.0;
    return PreparationReport{fidelity, std::min(p_det, 1.0), std::move(prepared)};
}

std::optional<PreparationReport> condition_on_clicks(const ConditionalMatrix &cm, int m, const PdcSource &source) {
    if (cm.n_max() < source.n_max()) {
        throw std::domain_error("matrix cutoff " + std::to_string(cm.n_max()) + " is below the source cutoff " +
                                std::to_string(source.n_max()));
    }
    return condition_on_outcome(cm.row(m), m, source);
}

std::optional<double> signature_conditioned_fidelity(const DetectorSpec &spec, const Signature &sig,
                                                     const PdcSource &source) {
    auto report = condition_on_outcome(signature_row(spec, sig, source.n_max()), sig.click_count(), source);
    if (!report) {
        return std::nullopt;
    }
    return report->fidelity;
}

std::vector<double> default_chi_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 90; ++i) {
        grid.push_back(i / 100.0);
    }
    return grid;
}

std::vector<SweepRow> fidelity_sweep(const ArchitectureKind &arch, int m, std::span<const double> chi_grid,
                                     std::optional<int> photon_cutoff) {
    const int cutoff = grid_cutoff(chi_grid, photon_cutoff);
    return sweep(click_row(build(arch), m, cutoff), m, chi_grid);
}

std::vector<SweepRow> signature_fidelity_sweep(const DetectorSpec &spec, const Signature &sig,
                                               std::span<const double> chi_grid, std::optional<int> photon_cutoff) {
    const int cutoff = grid_cutoff(chi_grid, photon_cutoff);
    return sweep(signature_row(spec, sig, cutoff), sig.click_count(), chi_grid);
}

std::string to_csv(const std::vector<SweepRow> &rows, const std::string &context) {
    std::string out = csv::join({"chi", "fidelity", "p_det", "n_or_m_context"});
    for (const auto &row : rows) {
        out += csv::join({csv::format(row.chi), csv::format(row.fidelity), csv::format(row.detection_probability),
                          context});
    }
    return out;
}

}  // namespace pnrd
