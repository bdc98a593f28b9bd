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

#ifndef PNRD_DETECTOR_MODEL_HPP
#define PNRD_DETECTOR_MODEL_HPP

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <variant>

namespace pnrd {

/// Physical component figures for a fiber-based multiplexed detector.
/// Losses are power losses in dB; fiber_loss_db is the loss of one delay
/// segment (one loop round trip for the loop detector).
struct ComponentParams {
    double coupler_loss_db = 0.0;
    double fiber_loss_db = 0.0;
    double switch_loss_db = 0.0;
    double detector_efficiency = 1.0;
    double dark_count = 0.0;

    /// Throws std::domain_error if any field is out of range.
    void validate() const;

    bool operator==(const ComponentParams &) const = default;
};

/// A lossy N-port followed by N independent bucket detectors.
///
/// Every architecture compiles into this form. A photon entering the device
/// is routed to output i with probability coupling(i), or to no output at all
/// with probability residual_loss. A photon that reaches output i survives to
/// trigger its detector with probability 1 - path_loss(i). Each detector
/// fires spuriously with probability dark_count regardless of input.
///
/// Construction validates the invariants; the object is immutable afterwards.
class DetectorSpec {
   public:
    DetectorSpec(Eigen::VectorXd coupling, Eigen::VectorXd path_loss, double residual_loss, double dark_count);

    int n_outputs() const { return static_cast<int>(coupling_.size()); }
    const Eigen::VectorXd &coupling() const { return coupling_; }
    const Eigen::VectorXd &path_loss() const { return path_loss_; }
    double residual_loss() const { return residual_loss_; }
    double dark_count() const { return dark_count_; }

    bool operator==(const DetectorSpec &other) const;

   private:
    Eigen::VectorXd coupling_;
    Eigen::VectorXd path_loss_;
    double residual_loss_;
    double dark_count_;
};

struct BalancedNPort {
    int n_outputs = 1;
    double path_loss = 0.0;
    double dark_count = 0.0;
};

struct LoopTdm {
    int n_bins = 1;
    double coupling_ratio = 0.5;
    ComponentParams params;
};

struct BalancedTdm {
    int stages = 0;
    ComponentParams params;
};

using ArchitectureKind = std::variant<BalancedNPort, LoopTdm, BalancedTdm>;

/// 10^(-loss_db / 10). Throws std::domain_error on negative input.
double db_to_transmission(double loss_db);

DetectorSpec build_balanced_nport(int n_outputs, double path_loss, double dark_count);

/// Fiber-loop time-multiplexed detector truncated after n_bins time bins.
/// Bin i (1-based) gets p_c (1 - p_c)^(i-1) of the light and suffers
/// t_s^i t_c^i t_f^(i-1) eta_det; light still in the loop after the last
/// bin goes to residual_loss.
DetectorSpec build_loop_tdm(int n_bins, double coupling_ratio, const ComponentParams &params);

/// m-stage balanced splitter network, N = 2^m equally weighted bins. Bin i
/// (1-based) passes i-1 fiber segments and m+1 couplers.
DetectorSpec build_balanced_tdm(int stages, const ComponentParams &params);

DetectorSpec build(const ArchitectureKind &arch);

/// Number of detected outputs the architecture produces.
int n_outputs(const ArchitectureKind &arch);

std::string_view architecture_name(const ArchitectureKind &arch);

}  // namespace pnrd

#endif  // PNRD_DETECTOR_MODEL_HPP
