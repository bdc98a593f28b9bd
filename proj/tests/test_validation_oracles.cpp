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
#include <random>

#include "pnrd/validation_oracles.hpp"

namespace pnrd {
namespace {

TEST(Naive, HandEnumeratedCases) {
    EXPECT_NEAR(naive_conditional_probability(build_balanced_nport(1, 0.0, 0.2), 1, 0), 0.2, 1e-15);
    EXPECT_NEAR(naive_conditional_probability(build_balanced_nport(2, 0.0, 0.0), 2, 2), 0.5, 1e-15);
    EXPECT_NEAR(naive_signature_probability(build_balanced_nport(2, 0.0, 0.0), Signature::parse("10"), 1), 0.5, 1e-15);
}

TEST(Naive, AgreesWithEngine) {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 40; ++k) {
        DetectorSpec spec = random_suite_spec(rng);
        ConditionalMatrix a = conditional_matrix(spec, 4);
        ConditionalMatrix b = naive_conditional_matrix(spec, 4);
        EXPECT_LT((a.table() - b.table()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Naive, BudgetRefusal) {
    DetectorSpec big = build_balanced_nport(30, 0.1, 0.0);
    EXPECT_GT(enumeration_cost(big, 4), kEnumerationBudget);
    EXPECT_THROW(naive_conditional_probability(big, 1, 4), EnumerationBudgetExceeded);
}

TEST(SuiteSpec, Invariants) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        DetectorSpec spec = random_suite_spec(rng);
        EXPECT_GE(spec.n_outputs(), 1);
        EXPECT_LE(spec.n_outputs(), 6);
        EXPECT_NEAR(spec.coupling().sum() + spec.residual_loss(), 1.0, 1e-12);
        const double dc = spec.dark_count();
        EXPECT_TRUE(dc == 0.0 || dc == 1e-4 || dc == 1e-2);
    }
}

TEST(MonteCarlo, DeterministicCases) {
    McEstimate e = monte_carlo_conditional(build_balanced_nport(1, 0.0, 0.0), 1, 1, 1000, 4);
    EXPECT_EQ(e.mean, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_EQ(e.trials, 1000u);
}

TEST(MonteCarlo, AgreesWithExactValues) {
    McEstimate two = monte_carlo_conditional(build_balanced_nport(2, 0.0, 0.0), 2, 2, 1'000'000, 17);
    EXPECT_LE(std::abs(two.mean - 0.5), 5 * two.std_error);
    McEstimate vac = monte_carlo_conditional(build_balanced_nport(4, 0.0, 0.1), 0, 0, 1'000'000, 18);
    EXPECT_LE(std::abs(vac.mean - 0.6561), 5 * vac.std_error);
}

TEST(MonteCarlo, ReproducibleAcrossThreads) {
    DetectorSpec spec = build_loop_tdm(4, 0.5, {0.4, 0.2, 2.0, 0.6, 1e-2});
    auto a = monte_carlo_click_counts(spec, 3, 300'000, 42, 1);
    auto b = monte_carlo_click_counts(spec, 3, 300'000, 42, 3);
    auto c = monte_carlo_click_counts(spec, 3, 300'000, 43, 3);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    std::uint64_t total = 0;
    for (auto v : a) {
        total += v;
    }
    EXPECT_EQ(total, 300'000u);
}

TEST(MonteCarlo, Errors) {
    DetectorSpec spec = build_balanced_nport(2, 0.0, 0.0);
    EXPECT_THROW(monte_carlo_click_counts(spec, 1, 0, 1), std::domain_error);
    EXPECT_THROW(monte_carlo_conditional(spec, 1, 3, 10, 1), std::domain_error);
}

TEST(Suite, SmallRunPasses) {
    ValidationOptions options;
    options.oracle_specs = 20;
    options.monte_carlo_specs = 4;
    options.trials = 100'000;
    options.seed = 9;
    options.threads = 2;
    auto checks = run_validation_suite(options);
    for (const auto &c : checks) {
        EXPECT_TRUE(c.passed) << c.name << " observed " << c.observed << " expected " << c.expected;
    }
    const std::string csv = to_csv(checks);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "check,expected,observed,tolerance,passed");
    EXPECT_EQ(csv, to_csv(run_validation_suite(options)));
}

TEST(Splitmix, KnownValue) { EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL); }

}  // namespace
}  // namespace pnrd
