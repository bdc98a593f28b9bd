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

#include <cmath>

#include "pnrd/design_optimizer.hpp"

namespace pnrd {
namespace {

const ComponentParams kSilicon{0.4, 0.2, 2.0, 0.60, 5e-6};
const ComponentParams kInGaAs{0.5, 0.8, 1.2, 0.10, 9.6e-4};

DesignQuery query(ArchitectureFamily family, const ComponentParams &params, double chi, int target) {
    DesignQuery q;
    q.family = family;
    q.params = params;
    q.target_m = target;
    q.source = PdcSource::with_default_cutoff(chi);
    return q;
}

TEST(Truncation, ErrorAndInverse) {
    EXPECT_DOUBLE_EQ(truncation_error(0.5, 1), 0.5);
    EXPECT_NEAR(truncation_error(0.99, 1), 0.01, 1e-15);
    EXPECT_NEAR(truncation_error(0.9, 2), 0.01, 1e-15);
    EXPECT_NEAR(loop_coupling_for_error(1, 0.01), 0.99, 1e-15);
    EXPECT_NEAR(loop_coupling_for_error(3, 0.01), 0.78, 5e-3);
    EXPECT_NEAR(loop_coupling_for_error(5, 0.01), 0.60, 5e-3);
    for (int n = 1; n <= 10; ++n) {
        EXPECT_NEAR(truncation_error(loop_coupling_for_error(n, 0.01), n), 0.01, 1e-14);
    }
    EXPECT_THROW(truncation_error(1.0, 2), std::domain_error);
    EXPECT_THROW(loop_coupling_for_error(0, 0.01), std::domain_error);
    EXPECT_THROW(loop_coupling_for_error(2, 0.0), std::domain_error);
}

TEST(MinimumStages, Log2Ceiling) {
    EXPECT_EQ(minimum_stages(1), 0);
    EXPECT_EQ(minimum_stages(2), 1);
    EXPECT_EQ(minimum_stages(3), 2);
    EXPECT_EQ(minimum_stages(5), 3);
    EXPECT_EQ(minimum_stages(8), 3);
    EXPECT_THROW(minimum_stages(0), std::domain_error);
}

TEST(OptimizeBins, SiliconLoopPrefersThreeBins) {
    DesignQuery q = query(ArchitectureFamily::LoopTdm, kSilicon, 0.3, 1);
    q.search_max = 12;
    DesignResult r = optimize_bins(q);
    EXPECT_EQ(r.minimum, 1);
    EXPECT_EQ(r.chosen().n_outputs, 3);
    EXPECT_EQ(*r.chosen().gap_to_max, 0.0);
}

TEST(OptimizeBins, WeakSourceUsesMinimum) {
    for (int m = 1; m <= 5; ++m) {
        DesignQuery q = query(ArchitectureFamily::LoopTdm, kSilicon, 0.15, m);
        q.search_max = m + 8;
        EXPECT_EQ(optimize_bins(q).chosen().n_outputs, m) << "target " << m;
    }
}

TEST(OptimizeBins, IdealNPortGrowsToUpperBound) {
    DesignQuery q = query(ArchitectureFamily::BalancedNPort, {0, 0, 0, 1.0, 0.0}, 0.3, 2);
    q.search_max = 16;
    DesignResult r = optimize_bins(q);
    EXPECT_EQ(r.chosen().n_outputs, 16);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        EXPECT_GE(*r.trace[i].fidelity, *r.trace[i - 1].fidelity);
    }
}

TEST(OptimizeBins, CouplingGridAndTrace) {
    DesignQuery q = query(ArchitectureFamily::LoopTdm, kSilicon, 0.3, 2);
    q.search_max = 3;
    q.coupling_grid = std::vector<double>{0.5, 0.95, 0.9};
    DesignResult r = optimize_bins(q);
    // N=2: floor 0.9 then 0.95; N=3: floor then 0.9, 0.95.
    ASSERT_EQ(r.trace.size(), 5u);
    EXPECT_NEAR(*r.trace[0].coupling_ratio, 0.9, 1e-15);
    EXPECT_EQ(*r.trace[1].coupling_ratio, 0.95);
    for (const auto &c : r.trace) {
        EXPECT_LE(truncation_error(*c.coupling_ratio, c.n_outputs), 0.01 + 1e-12);
        EXPECT_GE(*c.gap_to_max, 0.0);
    }
}

TEST(OptimizeBins, Errors) {
    DesignQuery q = query(ArchitectureFamily::LoopTdm, kSilicon, 0.3, 4);
    q.search_max = 3;
    EXPECT_THROW(optimize_bins(q), std::domain_error);
    q.family = ArchitectureFamily::BalancedTdm;
    EXPECT_THROW(optimize_bins(q), std::domain_error);
    q.target_m = 0;
    EXPECT_THROW(optimize(q), std::domain_error);
}

TEST(OptimizeStages, InGaAsStaysAtMinimum) {
    for (int m = 1; m <= 5; ++m) {
        DesignResult r = optimize_stages(query(ArchitectureFamily::BalancedTdm, kInGaAs, 0.3, m));
        EXPECT_EQ(*r.chosen().stages, r.minimum) << "target " << m;
    }
}

TEST(OptimizeStages, SiliconBenefitsSomewhere) {
    bool any = false;
    for (int m = 1; m <= 5; ++m) {
        DesignResult r = optimize_stages(query(ArchitectureFamily::BalancedTdm, kSilicon, 0.3, m));
        any = any || *r.chosen().stages > r.minimum;
    }
    EXPECT_TRUE(any);
}

TEST(OptimizeStages, IdealGoesToUpperBound) {
    for (int m = 1; m <= 4; ++m) {
        DesignResult r = optimize_stages(query(ArchitectureFamily::BalancedTdm, {0, 0, 0, 1.0, 0.0}, 0.3, m));
        EXPECT_EQ(*r.chosen().stages, kDefaultMaxStages);
    }
}

TEST(OptimizeStages, ThreadCountDoesNotMatter) {
    DesignQuery q = query(ArchitectureFamily::BalancedTdm, kSilicon, 0.3, 3);
    EXPECT_EQ(to_csv(optimize_stages(q, 1)), to_csv(optimize_stages(q, 4)));
}

TEST(Boundary, EndpointsAndDarkFreeColumn) {
    DesignQuery base = query(ArchitectureFamily::BalancedTdm, kSilicon, 0.3, 2);
    const std::vector<double> dcs{0.0, 9.6e-4};
    const std::vector<double> etas{0.1, 0.6, 1.0};
    auto rows = benefit_boundary(base, dcs, etas, 2);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_TRUE(rows[0].benefits && rows[1].benefits && rows[2].benefits);
    EXPECT_FALSE(rows[3].benefits);
    EXPECT_THROW(benefit_boundary(base, {}, etas), std::domain_error);
}

TEST(Compare, AddsIdealRow) {
    std::vector<DesignQuery> qs{query(ArchitectureFamily::BalancedTdm, kSilicon, 0.3, 2)};
    auto rows = compare_architectures(qs);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].architecture, "ideal");
    EXPECT_EQ(*rows[1].fidelity, 1.0);
    EXPECT_NEAR(rows[1].detection_probability, 0.91 * 0.09 * 0.09, 1e-15);
    EXPECT_LT(*rows[0].fidelity, 1.0);

    qs.push_back(query(ArchitectureFamily::LoopTdm, kSilicon, 0.2, 2));
    EXPECT_THROW(compare_architectures(qs), std::domain_error);
}

TEST(Csv, OptimizeLayout) {
    DesignQuery q = query(ArchitectureFamily::BalancedTdm, kInGaAs, 0.3, 2);
    q.search_max = 2;
    const std::string csv = to_csv(optimize_stages(q));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "candidate,n_outputs,stages,p_c,fidelity,p_det,gap_to_max,chosen");
    EXPECT_NE(csv.find("\n0,2,1,,"), std::string::npos);
}

TEST(Family, Names) {
    EXPECT_EQ(parse_family("loop_tdm"), ArchitectureFamily::LoopTdm);
    EXPECT_EQ(family_name(ArchitectureFamily::BalancedNPort), "balanced_nport");
    EXPECT_THROW(parse_family("loop"), std::domain_error);
}

}  // namespace
}  // namespace pnrd
