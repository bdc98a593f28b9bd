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

#include "pnrd/measurement_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "pnrd/csv.hpp"

namespace pnrd {

DiagonalOperator::DiagonalOperator(Eigen::VectorXd diag) : diag_(std::move(diag)) {
    if (diag_.size() == 0) {
        throw std::domain_error("diagonal operator needs dimension >= 1");
    }
    for (Eigen::Index n = 0; n < diag_.size(); ++n) {
        if (!std::isfinite(diag_[n]) || diag_[n] < 0.0) {
            throw std::domain_error("diagonal entry " + std::to_string(n) + " is negative or not finite");
        }
    }
}

DiagonalOperator DiagonalOperator::fock(int n, int dim) {
    if (n < 0 || n >= dim) {
        throw std::domain_error("Fock state |" + std::to_string(n) + "> outside dimension " + std::to_string(dim));
    }
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
    d[n] = 1.0;
    return DiagonalOperator(std::move(d));
}

bool DiagonalOperator::is_state(double tolerance) const { return std::abs(trace() - 1.0) <= tolerance; }

bool DiagonalOperator::is_effect() const { return (diag_.array() <= 1.0).all(); }

DiagonalOperator povm_element(const ConditionalMatrix &cm, int m) { return DiagonalOperator(cm.row(m)); }

DiagonalOperator process_matrix(const ConditionalMatrix &cm, int m) { return DiagonalOperator(cm.row(m)); }

DiagonalOperator apply_process(const ConditionalMatrix &cm, int m, const DiagonalOperator &rho) {
    if (rho.dim() > cm.n_max() + 1) {
        throw std::domain_error("state dimension " + std::to_string(rho.dim()) + " exceeds the matrix photon cutoff " +
                                std::to_string(cm.n_max()));
    }
    Eigen::VectorXd row = cm.row(m);
    return DiagonalOperator(row.head(rho.dim()).cwiseProduct(rho.diag()));
}

double expectation(const DiagonalOperator &effect, const DiagonalOperator &rho) {
    const Eigen::Index dim = std::min(effect.diag().size(), rho.diag().size());
    return effect.diag().head(dim).dot(rho.diag().head(dim));
}

std::string to_csv(const DiagonalOperator &op) {
    std::string out = csv::join({"n", "value"});
    for (int n = 0; n < op.dim(); ++n) {
        out += csv::join({std::to_string(n), csv::format(op[n])});
    }
    return out;
}

}  // namespace pnrd
