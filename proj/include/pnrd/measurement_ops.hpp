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

#ifndef PNRD_MEASUREMENT_OPS_HPP
#define PNRD_MEASUREMENT_OPS_HPP

#include <Eigen/Dense>
#include <string>

#include "pnrd/probability_engine.hpp"

namespace pnrd {

/// An operator diagonal in the photon-number basis, entry n = <n|A|n>.
/// Used both for Fock-diagonal states and for POVM elements / process
/// matrices of the click-counting measurement.
class DiagonalOperator {
   public:
    /// Throws std::domain_error on negative or non-finite entries.
    explicit DiagonalOperator(Eigen::VectorXd diag);

    static DiagonalOperator fock(int n, int dim);

    int dim() const { return static_cast<int>(diag_.size()); }
    double operator[](int n) const { return diag_[n]; }
    const Eigen::VectorXd &diag() const { return diag_; }
    double trace() const { return diag_.sum(); }

    /// Entries sum to 1 within `tolerance`.
    bool is_state(double tolerance = 1e-10) const;

    /// Every entry lies in [0, 1].
    bool is_effect() const;

   private:
    Eigen::VectorXd diag_;
};

/// Pi(m) = sum_n P(m|n) |n><n|.
DiagonalOperator povm_element(const ConditionalMatrix &cm, int m);

/// Diagonal of the process matrix of the m-click operation in the
/// number-projector basis. Off-diagonal elements vanish identically.
DiagonalOperator process_matrix(const ConditionalMatrix &cm, int m);

/// E_m(rho) = sum_n P(m|n) E_n rho E_n, left unnormalized; its trace is the
/// probability of observing m clicks.
DiagonalOperator apply_process(const ConditionalMatrix &cm, int m, const DiagonalOperator &rho);

/// tr(effect * rho) over the common support.
double expectation(const DiagonalOperator &effect, const DiagonalOperator &rho);

/// `n,value` rows.
std::string to_csv(const DiagonalOperator &op);

}  // namespace pnrd

#endif  // PNRD_MEASUREMENT_OPS_HPP
