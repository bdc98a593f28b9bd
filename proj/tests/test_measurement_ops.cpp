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

#include <random>

#include "pnrd/measurement_ops.hpp"
#include "pnrd/validation_oracles.hpp"

namespace pnrd {
namespace {

Eigen::VectorXd unit(int n, int dim) { return DiagonalOperator::fock(n, dim).diag(); }

TEST(DiagonalOperator, Construction) {
    EXPECT_THROW(DiagonalOperator(Eigen::Vector2d(0.5, -0.1)), std::domain_error);
    EXPECT_THROW(DiagonalOperator(Eigen::Vector2d(0.5, NAN)), std::domain_error);
    DiagonalOperator e2 = DiagonalOperator::fock(2, 4);
    EXPECT_TRUE(e2.is_state());
    EXPECT_TRUE(e2.is_effect());
    EXPECT_EQ(e2[2], 1.0);
    EXPECT_FALSE(DiagonalOperator(Eigen::Vector2d(0.5, 0.6)).is_state());
    EXPECT_THROW(DiagonalOperator::fock(4, 4), std::domain_error);
}

TEST(PovmElement, IdealIsProjector) {
    ConditionalMatrix cm = ConditionalMatrix::ideal(5);
    EXPECT_EQ(povm_element(cm, 2).diag(), unit(2, 6));
    EXPECT_EQ(process_matrix(cm, 3).diag(), unit(3, 6));
    EXPECT_THROW(povm_element(cm, 6), std::domain_error);
    EXPECT_THROW(povm_element(cm, -1), std::domain_error);
}

TEST(PovmElement, DarkCountSinglePort) {
    ConditionalMatrix cm = conditional_matrix(build_balanced_nport(1, 0.0, 0.01), 4);
    DiagonalOperator click = povm_element(cm, 1);
    EXPECT_NEAR(click[0], 0.01, 1e-15);
    for (int n = 1; n <= 4; ++n) {
        EXPECT_NEAR(click[n], 1.0, 1e-15);
    }
}

TEST(PovmElement, Completeness) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 40; ++k) {
        DetectorSpec spec = random_suite_spec(rng);
        ConditionalMatrix cm = conditional_matrix(spec, 6);
        Eigen::VectorXd total = Eigen::VectorXd::Zero(7);
        for (int m = 0; m <= spec.n_outputs(); ++m) {
            DiagonalOperator e = povm_element(cm, m);
            EXPECT_TRUE(e.is_effect());
            total += e.diag();
        }
        EXPECT_LT((total.array() - 1.0).abs().maxCoeff(), 1e-10);
    }
}

TEST(PovmElement, ApproachesIdealForLargeN) {
    ConditionalMatrix cm = conditional_matrix(build_balanced_nport(64, 0.0, 0.0), 3);
    for (int m = 0; m <= 3; ++m) {
        EXPECT_LT((povm_element(cm, m).diag() - unit(m, 4)).cwiseAbs().maxCoeff(), 0.05);
    }
}

TEST(ApplyProcess, Examples) {
    ConditionalMatrix ideal = ConditionalMatrix::ideal(3);
    EXPECT_EQ(apply_process(ideal, 1, DiagonalOperator::fock(1, 4)).diag(), unit(1, 4));
    EXPECT_EQ(apply_process(ideal, 1, DiagonalOperator::fock(2, 4)).diag(), Eigen::VectorXd::Zero(4));

    ConditionalMatrix lossy = conditional_matrix(build_balanced_nport(1, 0.5, 0.0), 2);
    EXPECT_NEAR(apply_process(lossy, 0, DiagonalOperator::fock(1, 3))[1], 0.5, 1e-15);
    EXPECT_THROW(apply_process(lossy, 0, DiagonalOperator::fock(1, 4)), std::domain_error);
}

TEST(Expectation, MatchesTraceOfProcess) {
    ConditionalMatrix cm = conditional_matrix(build_loop_tdm(4, 0.5, {0.4, 0.2, 2.0, 0.6, 5e-6}), 5);
    DiagonalOperator rho(Eigen::VectorXd::Constant(6, 1.0 / 6.0));
    for (int m = 0; m <= 4; ++m) {
        EXPECT_NEAR(expectation(povm_element(cm, m), rho), apply_process(cm, m, rho).trace(), 1e-15);
    }
}

TEST(Csv, OperatorLayout) { EXPECT_EQ(to_csv(DiagonalOperator::fock(1, 3)), "n,value\n0,0\n1,1\n2,0\n"); }

}  // namespace
}  // namespace pnrd
