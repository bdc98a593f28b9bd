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

#include "pnrd/probability_engine.hpp"

#include <cmath>
#include <stdexcept>

#include "pnrd/csv.hpp"

namespace pnrd {

namespace {

constexpr double kColumnTolerance = 1e-10;

void check_photons(int n) {
    if (n < 0) {
        throw std::domain_error("photon number must be non-negative");
    }
}

void check_signature(const DetectorSpec &spec, const Signature &sig) {
    if (sig.size() != spec.n_outputs()) {
        throw std::domain_error("signature has " + std::to_string(sig.size()) + " bits but the detector has " +
                                std::to_string(spec.n_outputs()) + " outputs");
    }
}

void check_clicks(const DetectorSpec &spec, int m) {
    if (m < 0 || m > spec.n_outputs()) {
        throw std::domain_error("click count " + std::to_string(m) + " outside [0, " +
                                std::to_string(spec.n_outputs()) + "]");
    }
}

}  // namespace

Signature::Signature(std::vector<bool> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) {
        throw std::domain_error("signature must have at least one bit");
    }
}

Signature Signature::parse(std::string_view text) {
    std::vector<bool> bits;
    for (char ch : text) {
        if (ch == '0' || ch == '1') {
            bits.push_back(ch == '1');
        } else if (ch != ',' && ch != ' ' && ch != '{' && ch != '}') {
            throw std::domain_error("invalid character '" + std::string(1, ch) + "' in signature");
        }
    }
    return Signature(std::move(bits));
}

int Signature::click_count() const {
    int count = 0;
    for (bool b : bits_) {
        count += b ? 1 : 0;
    }
    return count;
}

std::string Signature::str() const {
    std::string s;
    for (bool b : bits_) {
        s += b ? '1' : '0';
    }
    return s;
}

ConditionalMatrix::ConditionalMatrix(Eigen::MatrixXd table) : table_(std::move(table)) {
    if (table_.rows() < 2 || table_.cols() < 1) {
        throw std::domain_error("conditional matrix needs N >= 1 and n_max >= 0");
    }
    if ((table_.array() < 0.0).any() || (table_.array() > 1.0).any()) {
        throw std::domain_error("conditional matrix entries must lie in [0, 1]");
    }
    for (Eigen::Index n = 0; n < table_.cols(); ++n) {
        double total = table_.col(n).sum();
        if (std::abs(total - 1.0) > kColumnTolerance) {
            throw std::domain_error("column n=" + std::to_string(n) + " sums to " + csv::format(total));
        }
    }
}

ConditionalMatrix ConditionalMatrix::ideal(int n_max) {
    check_photons(n_max);
    int n_outputs = std::max(n_max, 1);
    return ConditionalMatrix(Eigen::MatrixXd::Identity(n_outputs + 1, n_max + 1));
}

Eigen::VectorXd ConditionalMatrix::row(int m) const {
    if (m < 0 || m > n_outputs()) {
        throw std::domain_error("click count " + std::to_string(m) + " outside [0, " + std::to_string(n_outputs()) +
                                "]");
    }
    return table_.row(m).transpose();
}

double signature_probability(const DetectorSpec &spec, const Signature &sig, int n) {
    check_signature(spec, sig);
    check_photons(n);
    return detail::signature_table<double>(spec, sig, n)[n];
}

double conditional_probability(const DetectorSpec &spec, int m, int n) {
    check_clicks(spec, m);
    check_photons(n);
    return detail::click_count_table<double>(spec, n, m)(m, n);
}

ConditionalMatrix conditional_matrix(const DetectorSpec &spec, int n_max) {
    check_photons(n_max);
    return ConditionalMatrix(detail::click_count_table<double>(spec, n_max, spec.n_outputs()));
}

Eigen::VectorXd click_row(const DetectorSpec &spec, int m, int n_max) {
    check_clicks(spec, m);
    check_photons(n_max);
    return detail::click_count_table<double>(spec, n_max, m).row(m).transpose();
}

Eigen::VectorXd signature_row(const DetectorSpec &spec, const Signature &sig, int n_max) {
    check_signature(spec, sig);
    check_photons(n_max);
    return detail::signature_table<double>(spec, sig, n_max);
}

std::string to_csv(const ConditionalMatrix &cm) {
    std::vector<std::string> header{"n\\m"};
    for (int m = 0; m <= cm.n_outputs(); ++m) {
        header.push_back(std::to_string(m));
    }
    std::string out = csv::join(header);
    for (int n = 0; n <= cm.n_max(); ++n) {
        std::vector<std::string> fields{std::to_string(n)};
        for (int m = 0; m <= cm.n_outputs(); ++m) {
            fields.push_back(csv::format(cm(m, n)));
        }
        out += csv::join(fields);
    }
    return out;
}

}  // namespace pnrd
