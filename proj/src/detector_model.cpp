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

#include "pnrd/detector_model.hpp"

#include <cmath>
#include <stdexcept>

namespace pnrd {

namespace {

constexpr double kRoutingTolerance = 1e-12;
constexpr int kMaxStages = 20;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void require(bool condition, const std::string &message) {
    if (!condition) {
        throw std::domain_error(message);
    }
}

}  // namespace

void ComponentParams::validate() const {
    require(coupler_loss_db >= 0.0, "coupler loss must be >= 0 dB, got " + std::to_string(coupler_loss_db));
    require(fiber_loss_db >= 0.0, "fiber loss must be >= 0 dB, got " + std::to_string(fiber_loss_db));
    require(switch_loss_db >= 0.0, "switch loss must be >= 0 dB, got " + std::to_string(switch_loss_db));
    require(is_probability(detector_efficiency),
            "detector efficiency must be in [0, 1], got " + std::to_string(detector_efficiency));
    require(is_probability(dark_count), "dark count probability must be in [0, 1], got " + std::to_string(dark_count));
}

DetectorSpec::DetectorSpec(Eigen::VectorXd coupling, Eigen::VectorXd path_loss, double residual_loss,
                           double dark_count)
    : coupling_(std::move(coupling)),
      path_loss_(std::move(path_loss)),
      residual_loss_(residual_loss),
      dark_count_(dark_count) {
    require(coupling_.size() >= 1, "a detector needs at least one output");
    require(coupling_.size() == path_loss_.size(), "coupling and path_loss lengths differ");
    for (Eigen::Index i = 0; i < coupling_.size(); ++i) {
        require(is_probability(coupling_[i]), "coupling[" + std::to_string(i) + "] is not a probability");
        require(is_probability(path_loss_[i]), "path_loss[" + std::to_string(i) + "] is not a probability");
    }
    require(is_probability(residual_loss_), "residual_loss is not a probability");
    require(is_probability(dark_count_), "dark_count is not a probability");
    double total = coupling_.sum() + residual_loss_;
    require(std::abs(total - 1.0) <= kRoutingTolerance,
            "coupling plus residual loss must sum to 1, got " + std::to_string(total));
}

bool DetectorSpec::operator==(const DetectorSpec &other) const {
    return coupling_ == other.coupling_ && path_loss_ == other.path_loss_ &&
           residual_loss_ == other.residual_loss_ && dark_count_ == other.dark_count_;
}

double db_to_transmission(double loss_db) {
    require(loss_db >= 0.0 && std::isfinite(loss_db), "loss must be a finite non-negative dB value");
    return std::pow(10.0, -loss_db / 10.0);
}

DetectorSpec build_balanced_nport(int n_outputs, double path_loss, double dark_count) {
    require(n_outputs >= 1, "balanced N-port needs N >= 1");
    Eigen::VectorXd coupling = Eigen::VectorXd::Constant(n_outputs, 1.0 / n_outputs);
    Eigen::VectorXd loss = Eigen::VectorXd::Constant(n_outputs, path_loss);
    return DetectorSpec(std::move(coupling), std::move(loss), 0.0, dark_count);
}

DetectorSpec build_loop_tdm(int n_bins, double coupling_ratio, const ComponentParams &params) {
    require(n_bins >= 1, "loop TDM needs at least one time bin");
    require(coupling_ratio > 0.0 && coupling_ratio < 1.0, "loop coupling ratio must lie in (0, 1)");
    params.validate();

    const double t_s = db_to_transmission(params.switch_loss_db);
    const double t_c = db_to_transmission(params.coupler_loss_db);
    const double t_f = db_to_transmission(params.fiber_loss_db);

    Eigen::VectorXd coupling(n_bins);
    Eigen::VectorXd loss(n_bins);
    double in_loop = 1.0;  // (1 - p_c)^(i-1)
    for (int i = 1; i <= n_bins; ++i) {
        coupling[i - 1] = coupling_ratio * in_loop;
        in_loop *= 1.0 - coupling_ratio;
        double survive = std::pow(t_s, i) * std::pow(t_c, i) * std::pow(t_f, i - 1) * params.detector_efficiency;
        loss[i - 1] = 1.0 - survive;
    }
    return DetectorSpec(std::move(coupling), std::move(loss), in_loop, params.dark_count);
}

DetectorSpec build_balanced_tdm(int stages, const ComponentParams &params) {
    require(stages >= 0 && stages <= kMaxStages, "balanced TDM stage count must be in [0, 20]");
    params.validate();

    const int n = 1 << stages;
    const double t_c = db_to_transmission(params.coupler_loss_db);
    const double t_f = db_to_transmission(params.fiber_loss_db);
    const double coupler_survive = std::pow(t_c, stages + 1) * params.detector_efficiency;

    Eigen::VectorXd coupling = Eigen::VectorXd::Constant(n, 1.0 / n);
    Eigen::VectorXd loss(n);
    for (int i = 1; i <= n; ++i) {
        loss[i - 1] = 1.0 - std::pow(t_f, i - 1) * coupler_survive;
    }
    return DetectorSpec(std::move(coupling), std::move(loss), 0.0, params.dark_count);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

DetectorSpec build(const ArchitectureKind &arch) {
    return std::visit(
        overloaded{
            [](const BalancedNPort &a) { return build_balanced_nport(a.n_outputs, a.path_loss, a.dark_count); },
            [](const LoopTdm &a) { return build_loop_tdm(a.n_bins, a.coupling_ratio, a.params); },
            [](const BalancedTdm &a) { return build_balanced_tdm(a.stages, a.params); },
        },
        arch);
}

int n_outputs(const ArchitectureKind &arch) {
    return std::visit(overloaded{
                          [](const BalancedNPort &a) { return a.n_outputs; },
                          [](const LoopTdm &a) { return a.n_bins; },
                          [](const BalancedTdm &a) { return 1 << a.stages; },
                      },
                      arch);
}

std::string_view architecture_name(const ArchitectureKind &arch) {
    return std::visit(overloaded{
                          [](const BalancedNPort &) { return std::string_view("balanced_nport"); },
                          [](const LoopTdm &) { return std::string_view("loop_tdm"); },
                          [](const BalancedTdm &) { return std::string_view("balanced_tdm"); },
                      },
                      arch);
}

}  // namespace pnrd
