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

// Slow reference implementations used to check the production engine.
// Nothing in here shares code with probability_engine's recursion.

#ifndef PNRD_VALIDATION_ORACLES_HPP
#define PNRD_VALIDATION_ORACLES_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnrd/detector_model.hpp"
#include "pnrd/probability_engine.hpp"

namespace pnrd {

/// Thrown when an enumeration would exceed kEnumerationBudget terms.
class EnumerationBudgetExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kEnumerationBudget = 1e7;

/// Estimated enumeration size C(n + N', n) * 2^N, N' counting the residual
/// sink as an extra slot when present.
double enumeration_cost(const DetectorSpec &spec, int n);

/// Direct sum over every composition n_1 + ... + n_N' = n and every click
/// pattern with m clicks, multinomial weights and all.
double naive_conditional_probability(const DetectorSpec &spec, int m, int n);

double naive_signature_probability(const DetectorSpec &spec, const Signature &sig, int n);

ConditionalMatrix naive_conditional_matrix(const DetectorSpec &spec, int n_max);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

/// Trials are drawn in fixed blocks; block b uses std::mt19937_64 seeded with
/// splitmix64(splitmix64(seed) + b). Block boundaries do not depend on the thread count,
/// so tallies are reproducible for any `threads`.
inline constexpr std::uint64_t kTrialsPerBlock = 1u << 16;

std::uint64_t splitmix64(std::uint64_t x);

/// Click-count tallies: counts[m] trials ended with m clicks.
std::vector<std::uint64_t> monte_carlo_click_counts(const DetectorSpec &spec, int n, std::uint64_t trials,
                                                    std::uint64_t seed, int threads = 1);

/// Bernoulli estimate of P(m|n) from simulated photon paths.
McEstimate monte_carlo_conditional(const DetectorSpec &spec, int n, int m, std::uint64_t trials, std::uint64_t seed,
                                   int threads = 1);

/// Random detector for the cross-check suite: N in [1, max_outputs], random
/// couplings scaled to sum to at most 1 (remainder to the residual sink),
/// uniform path losses, and p_dc drawn from {0, 1e-4, 1e-2}.
DetectorSpec random_suite_spec(std::mt19937_64 &rng, int max_outputs = 6);

struct ValidationCheck {
    std::string name;
    double expected;
    double observed;
    double tolerance;
    bool passed;
};

struct ValidationOptions {
    int oracle_specs = 200;
    int monte_carlo_specs = 20;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    int threads = 1;
};

/// DP vs enumeration on oracle_specs random specs (N <= 6, n <= 4, every m),
/// and DP vs Monte Carlo (5 standard errors) on monte_carlo_specs of them.
std::vector<ValidationCheck> run_validation_suite(const ValidationOptions &options);

std::string to_csv(const std::vector<ValidationCheck> &checks);

}  // namespace pnrd

#endif  // PNRD_VALIDATION_ORACLES_HPP
