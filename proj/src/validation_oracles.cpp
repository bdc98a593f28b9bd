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

#include "pnrd/validation_oracles.hpp"

#include <bit>
#include <cmath>
#include <functional>

#include "pnrd/csv.hpp"
#include "pnrd/parallel.hpp"

namespace pnrd {

namespace {

constexpr double kOracleTolerance = 1e-12;
constexpr double kSigmaBand = 5.0;
constexpr int kSuiteMaxPhotons = 4;

double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

double choose(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

int routing_slots(const DetectorSpec &spec) { return spec.n_outputs() + (spec.residual_loss() > 0.0 ? 1 : 0); }

// Calls visit(counts) for every composition of n into counts.size() parts.
void for_each_composition(int n, std::vector<int> &counts, std::size_t slot,
                          const std::function<void(const std::vector<int> &)> &visit) {
    if (slot + 1 == counts.size()) {
        counts[slot] = n;
        visit(counts);
        return;
    }
    for (int k = 0; k <= n; ++k) {
        counts[slot] = k;
        for_each_composition(n - k, counts, slot + 1, visit);
    }
}

// One term of the signature probability: the chance that the photons are
// routed as `counts` and that the detectors then show exactly `clicked`.
double composition_term(const DetectorSpec &spec, const std::vector<bool> &clicked, const std::vector<int> &counts,
                        int n) {
    double term = factorial(n);
    for (int c : counts) {
        term /= factorial(c);
    }
    const double dc = spec.dark_count();
    for (int i = 0; i < spec.n_outputs(); ++i) {
        const int k = counts[static_cast<std::size_t>(i)];
        term *= std::pow(spec.coupling()[i], k);
        const double all_lost = std::pow(spec.path_loss()[i], k);
        if (clicked[static_cast<std::size_t>(i)]) {
            term *= dc + (1.0 - dc) * (1.0 - all_lost);
        } else {
            term *= (1.0 - dc) * all_lost;
        }
    }
    if (counts.size() > static_cast<std::size_t>(spec.n_outputs())) {
        term *= std::pow(spec.residual_loss(), counts.back());
    }
    return term;
}

double enumerate_pattern(const DetectorSpec &spec, const std::vector<bool> &clicked, int n) {
    std::vector<int> counts(static_cast<std::size_t>(routing_slots(spec)), 0);
    double total = 0.0;
    for_each_composition(n, counts, 0, [&](const std::vector<int> &c) { total += composition_term(spec, clicked, c, n); });
    return total;
}

void check_budget(double cost) {
    if (cost > kEnumerationBudget) {
        throw EnumerationBudgetExceeded("enumeration needs ~" + csv::format(cost) + " terms, budget is " +
                                        csv::format(kEnumerationBudget));
    }
}

}  // namespace

double enumeration_cost(const DetectorSpec &spec, int n) {
    return choose(n + routing_slots(spec), n) * std::pow(2.0, spec.n_outputs());
}

double naive_signature_probability(const DetectorSpec &spec, const Signature &sig, int n) {
    if (sig.size() != spec.n_outputs() || n < 0) {
        throw std::domain_error("signature length must match the detector and n must be >= 0");
    }
    check_budget(choose(n + routing_slots(spec), n));
    std::vector<bool> clicked(static_cast<std::size_t>(sig.size()));
    for (int i = 0; i < sig.size(); ++i) {
        clicked[static_cast<std::size_t>(i)] = sig.clicked(i);
    }
    return enumerate_pattern(spec, clicked, n);
}

double naive_conditional_probability(const DetectorSpec &spec, int m, int n) {
    const int n_outputs = spec.n_outputs();
    if (m < 0 || m > n_outputs || n < 0) {
        throw std::domain_error("need 0 <= m <= N and n >= 0");
    }
    check_budget(enumeration_cost(spec, n));
    double total = 0.0;
    std::vector<bool> clicked(static_cast<std::size_t>(n_outputs));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_outputs); ++mask) {
        if (std::popcount(mask) != m) {
            continue;
        }
        for (int i = 0; i < n_outputs; ++i) {
            clicked[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
        }
        total += enumerate_pattern(spec, clicked, n);
    }
    return total;
}

namespace {

// Unclamped, so round-off in the enumeration shows up in comparisons.
Eigen::MatrixXd naive_table(const DetectorSpec &spec, int n_max) {
    Eigen::MatrixXd table(spec.n_outputs() + 1, n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        for (int m = 0; m <= spec.n_outputs(); ++m) {
            table(m, n) = naive_conditional_probability(spec, m, n);
        }
    }
    return table;
}

}  // namespace

ConditionalMatrix naive_conditional_matrix(const DetectorSpec &spec, int n_max) {
    return ConditionalMatrix(naive_table(spec, n_max).cwiseMax(0.0).cwiseMin(1.0));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<std::uint64_t> monte_carlo_click_counts(const DetectorSpec &spec, int n, std::uint64_t trials,
                                                    std::uint64_t seed, int threads) {
    if (trials < 1 || n < 0) {
        throw std::domain_error("Monte Carlo needs trials >= 1 and n >= 0");
    }
    const int n_outputs = spec.n_outputs();
    std::vector<double> cumulative(static_cast<std::size_t>(n_outputs));
    double running = 0.0;
    for (int i = 0; i < n_outputs; ++i) {
        running += spec.coupling()[i];
        cumulative[static_cast<std::size_t>(i)] = running;
    }
    const bool has_sink = spec.residual_loss() > 0.0;

    const std::uint64_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
    std::vector<std::vector<std::uint64_t>> block_counts(blocks);
    const std::uint64_t base = splitmix64(seed);

    parallel_for(blocks, threads, [&](std::size_t b) {
        std::mt19937_64 rng(splitmix64(base + b));
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_outputs) + 1, 0);
        std::vector<bool> hit(static_cast<std::size_t>(n_outputs));
        const std::uint64_t begin = b * kTrialsPerBlock;
        const std::uint64_t end = std::min(trials, begin + kTrialsPerBlock);
        for (std::uint64_t t = begin; t < end; ++t) {
            std::fill(hit.begin(), hit.end(), false);
            for (int photon = 0; photon < n; ++photon) {
                const double u = uniform01(rng);
                int slot = 0;
                while (slot < n_outputs && u >= cumulative[static_cast<std::size_t>(slot)]) {
                    ++slot;
                }
                if (slot == n_outputs) {
                    if (has_sink) {
                        continue;
                    }
                    slot = n_outputs - 1;  // rounding in the cumulative sum
                }
                if (uniform01(rng) >= spec.path_loss()[slot]) {
                    hit[static_cast<std::size_t>(slot)] = true;
                }
            }
            int clicks = 0;
            for (int i = 0; i < n_outputs; ++i) {
                const bool dark = uniform01(rng) < spec.dark_count();
                clicks += (hit[static_cast<std::size_t>(i)] || dark) ? 1 : 0;
            }
            ++counts[static_cast<std::size_t>(clicks)];
        }
        block_counts[b] = std::move(counts);
    });

    std::vector<std::uint64_t> total(static_cast<std::size_t>(n_outputs) + 1, 0);
    for (const auto &counts : block_counts) {
        for (std::size_t m = 0; m < counts.size(); ++m) {
            total[m] += counts[m];
        }
    }
    return total;
}

McEstimate monte_carlo_conditional(const DetectorSpec &spec, int n, int m, std::uint64_t trials, std::uint64_t seed,
                                   int threads) {
    if (m < 0 || m > spec.n_outputs()) {
        throw std::domain_error("click count outside [0, N]");
    }
    const auto counts = monte_carlo_click_counts(spec, n, trials, seed, threads);
    McEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.mean = static_cast<double>(counts[static_cast<std::size_t>(m)]) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(trials));
    return est;
}

DetectorSpec random_suite_spec(std::mt19937_64 &rng, int max_outputs) {
    static constexpr double kDarkCounts[] = {0.0, 1e-4, 1e-2};
    const int n_outputs = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_outputs));

    Eigen::VectorXd raw(n_outputs);
    for (int i = 0; i < n_outputs; ++i) {
        raw[i] = 0.05 + uniform01(rng);
    }
    const bool lossless_routing = (rng() & 1u) != 0;
    const double routed = lossless_routing ? 1.0 : 0.5 + 0.5 * uniform01(rng);
    Eigen::VectorXd coupling = raw * (routed / raw.sum());
    const double residual = lossless_routing ? 0.0 : std::max(0.0, 1.0 - coupling.sum());

    Eigen::VectorXd loss(n_outputs);
    for (int i = 0; i < n_outputs; ++i) {
        loss[i] = (rng() % 5 == 0) ? 0.0 : uniform01(rng);
    }
    const double dc = kDarkCounts[rng() % 3];
    return DetectorSpec(std::move(coupling), std::move(loss), residual, dc);
}

std::vector<ValidationCheck> run_validation_suite(const ValidationOptions &options) {
    std::mt19937_64 rng(splitmix64(options.seed));
    std::vector<DetectorSpec> specs;
    for (int k = 0; k < std::max(options.oracle_specs, options.monte_carlo_specs); ++k) {
        specs.push_back(random_suite_spec(rng));
    }

    std::vector<ValidationCheck> checks;
    for (int k = 0; k < options.oracle_specs; ++k) {
        const DetectorSpec &spec = specs[static_cast<std::size_t>(k)];
        const ConditionalMatrix dp = conditional_matrix(spec, kSuiteMaxPhotons);
        const double worst = (dp.table() - naive_table(spec, kSuiteMaxPhotons)).cwiseAbs().maxCoeff();
        checks.push_back({"oracle spec " + std::to_string(k) + " N=" + std::to_string(spec.n_outputs()), 0.0, worst,
                          kOracleTolerance, worst <= kOracleTolerance});
    }

    const double trials = static_cast<double>(options.trials);
    for (int k = 0; k < options.monte_carlo_specs; ++k) {
        const DetectorSpec &spec = specs[static_cast<std::size_t>(k)];
        const int n = k % (kSuiteMaxPhotons + 1);
        const Eigen::VectorXd dp = conditional_matrix(spec, n).table().col(n);
        const auto counts = monte_carlo_click_counts(spec, n, options.trials,
                                                     options.seed + static_cast<std::uint64_t>(k), options.threads);
        for (int m = 0; m <= spec.n_outputs(); ++m) {
            const double mean = static_cast<double>(counts[static_cast<std::size_t>(m)]) / trials;
            const double se_mc = std::sqrt(mean * (1.0 - mean) / trials);
            const double se_dp = std::sqrt(dp[m] * (1.0 - dp[m]) / trials);
            const double band = kSigmaBand * std::max(se_mc, se_dp);
            checks.push_back({"monte carlo spec " + std::to_string(k) + " n=" + std::to_string(n) +
                                  " m=" + std::to_string(m),
                              dp[m], mean, band, std::abs(mean - dp[m]) <= band});
        }
    }
    return checks;
}

std::string to_csv(const std::vector<ValidationCheck> &checks) {
    std::string out = csv::join({"check", "expected", "observed", "tolerance", "passed"});
    for (const auto &c : checks) {
        out += csv::join({c.name, csv::format(c.expected), csv::format(c.observed), csv::format(c.tolerance),
                          c.passed ? "1" : "0"});
    }
    return out;
}

}  // namespace pnrd
