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

#ifndef PNRD_PROBABILITY_ENGINE_HPP
#define PNRD_PROBABILITY_ENGINE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "pnrd/detector_model.hpp"

namespace pnrd {

/// Which of the N detectors clicked in one shot.
class Signature {
   public:
    explicit Signature(std::vector<bool> bits);

    /// Accepts "10100" or comma/space separated "1,0,1,0,0".
    static Signature parse(std::string_view text);

    int size() const { return static_cast<int>(bits_.size()); }
    bool clicked(int i) const { return bits_[static_cast<std::size_t>(i)]; }
    int click_count() const;
    std::string str() const;

    bool operator==(const Signature &) const = default;

   private:
    std::vector<bool> bits_;
};

/// P(m|n) for m in [0, N] clicks and n in [0, n_max] incident photons,
/// stored as an (N+1) x (n_max+1) table. Every column is a distribution.
class ConditionalMatrix {
   public:
    /// Throws std::domain_error if an entry leaves [0, 1] or a column does
    /// not sum to 1 within 1e-10.
    explicit ConditionalMatrix(Eigen::MatrixXd table);

    /// P(m|n) = delta(m, n) with N = n_max.
    static ConditionalMatrix ideal(int n_max);

    int n_outputs() const { return static_cast<int>(table_.rows()) - 1; }
    int n_max() const { return static_cast<int>(table_.cols()) - 1; }
    double operator()(int m, int n) const { return table_(m, n); }
    const Eigen::MatrixXd &table() const { return table_; }

    /// P(m|n) as a function of n.
    Eigen::VectorXd row(int m) const;

   private:
    Eigen::MatrixXd table_;
};

/// Probability of exactly this click pattern given n incident photons.
double signature_probability(const DetectorSpec &spec, const Signature &sig, int n);

/// P(m|n): probability of m clicks given n incident photons.
double conditional_probability(const DetectorSpec &spec, int m, int n);

ConditionalMatrix conditional_matrix(const DetectorSpec &spec, int n_max);

/// P(m|n) for n in [0, n_max]. Cheaper than the full matrix when m << N
/// since the click dimension of the recursion is truncated at m.
Eigen::VectorXd click_row(const DetectorSpec &spec, int m, int n_max);

/// P(sig|n) for n in [0, n_max].
Eigen::VectorXd signature_row(const DetectorSpec &spec, const Signature &sig, int n_max);

std::string to_csv(const ConditionalMatrix &cm);

namespace detail {

template <typename Scalar>
using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Table<Scalar> binomial_table(int n_max) {
    Table<Scalar> c = Table<Scalar>::Zero(n_max + 1, n_max + 1);
    for (int r = 0; r <= n_max; ++r) {
        c(r, 0) = Scalar(1);
        for (int k = 1; k <= r; ++k) {
            c(r, k) = c(r - 1, k - 1) + (k <= r - 1 ? c(r - 1, k) : Scalar(0));
        }
    }
    return c;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> powers(Scalar base, int count) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p(count + 1);
    p[0] = Scalar(1);
    for (int k = 1; k <= count; ++k) {
        p[k] = p[k - 1] * base;
    }
    return p;
}

/// Photons are routed output by output: given r photons not yet placed,
/// output i receives k ~ Binomial(r, p_c(i) / q_i) where q_i is the routing
/// mass of outputs i..N plus the residual sink. Walking the outputs from the
/// last one backwards gives a table that is independent of the initial
/// photon number, so one pass yields every column.
///
/// layer(i, weight, silent, fired) folds output i into the caller's table;
/// weight(r, k) is the probability that k of r unplaced photons land on i.
template <typename Scalar, typename Layer>
void sweep_outputs_backward(const DetectorSpec &spec, int n_max, Layer &&layer) {
    const int n_outputs = spec.n_outputs();
    const Table<Scalar> binom = binomial_table<Scalar>(n_max);

    std::vector<Scalar> suffix(static_cast<std::size_t>(n_outputs) + 1);
    suffix[static_cast<std::size_t>(n_outputs)] = Scalar(spec.residual_loss());
    for (int i = n_outputs - 1; i >= 0; --i) {
        suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] + Scalar(spec.coupling()[i]);
    }

    const Scalar dark = Scalar(spec.dark_count());
    for (int i = n_outputs - 1; i >= 0; --i) {
        const Scalar q = suffix[static_cast<std::size_t>(i)];
        Scalar ratio = q > Scalar(0) ? Scalar(spec.coupling()[i]) / q : Scalar(0);
        if (ratio > Scalar(1)) {
            ratio = Scalar(1);
        }
        const auto to_here = powers<Scalar>(ratio, n_max);
        const auto past_here = powers<Scalar>(Scalar(1) - ratio, n_max);
        const auto lost = powers<Scalar>(Scalar(spec.path_loss()[i]), n_max);

        // silent[k]: no click with k photons on this output; fired[k]: click.
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> silent(n_max + 1), fired(n_max + 1);
        for (int k = 0; k <= n_max; ++k) {
            silent[k] = (Scalar(1) - dark) * lost[k];
            fired[k] = dark + (Scalar(1) - dark) * (Scalar(1) - lost[k]);
        }
        auto weight = [&](int r, int k) { return binom(r, k) * to_here[k] * past_here[r - k]; };
        layer(i, weight, silent, fired);
    }
}

/// T(c, r): probability that c detectors click when r photons enter, for
/// r in [0, n_max]. Outcomes with more than max_clicks clicks are dropped,
/// which is exact for the retained rows because clicks only accumulate.
template <typename Scalar>
Table<Scalar> click_count_table(const DetectorSpec &spec, int n_max, int max_clicks) {
    Table<Scalar> f = Table<Scalar>::Zero(max_clicks + 1, n_max + 1);
    f.row(0).setOnes();  // the residual sink never clicks
    Table<Scalar> g(max_clicks + 1, n_max + 1);

    sweep_outputs_backward<Scalar>(spec, n_max, [&](int i, auto &&weight, const auto &silent, const auto &fired) {
        // Outputs i..N-1 can produce at most N - i clicks.
        const int c_hi = std::min(max_clicks, spec.n_outputs() - i);
        g.setZero();
        for (int r = 0; r <= n_max; ++r) {
            for (int k = 0; k <= r; ++k) {
                const Scalar w = weight(r, k);
                if (w == Scalar(0)) {
                    continue;
                }
                const int rest = r - k;
                g(0, r) += w * silent[k] * f(0, rest);
                for (int c = 1; c <= c_hi; ++c) {
                    g(c, r) += w * (silent[k] * f(c, rest) + fired[k] * f(c - 1, rest));
                }
            }
        }
        f.swap(g);
    });
    return f.cwiseMin(Scalar(1));
}

/// s(r): probability of exactly the given click pattern when r photons enter.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> signature_table(const DetectorSpec &spec, const Signature &sig, int n_max) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Vec f = Vec::Ones(n_max + 1);
    Vec g(n_max + 1);

    sweep_outputs_backward<Scalar>(spec, n_max, [&](int i, auto &&weight, const auto &silent, const auto &fired) {
        const auto &outcome = sig.clicked(i) ? fired : silent;
        g.setZero();
        for (int r = 0; r <= n_max; ++r) {
            for (int k = 0; k <= r; ++k) {
                g[r] += weight(r, k) * outcome[k] * f[r - k];
            }
        }
        f.swap(g);
    });
    return f.cwiseMin(Scalar(1));
}

}  // namespace detail

}  // namespace pnrd

#endif  // PNRD_PROBABILITY_ENGINE_HPP
