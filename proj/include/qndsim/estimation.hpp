// Copyright 2026 The qndsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Estimating Q from the observed read-out. All expectations are taken in the
// post-measurement ensemble, whose joint (Q index, R outcome) distribution is
// p_{ij} = |c_{ij}|^2.

#pragma once

#include <cmath>
#include <vector>

#include "qndsim/measurement.hpp"

namespace qnd {

inline constexpr double kInformationFloor = 1e-15;

/// Read-out map q_est = f(r_j), one entry per probe outcome.
struct Estimator {
    std::vector<double> table;

    friend bool operator==(const Estimator &, const Estimator &) = default;
};

struct EstimationReport {
    Estimator estimator;
    double bias = 0.0;
    double squared_error = 0.0;
    double epsilon = 0.0;
    double info_nats = 0.0;
    double i_min = 0.0;
    bool error_within_budget = false;
    bool information_sufficient = false;

    bool passes() const noexcept { return error_within_budget && information_sufficient; }

    friend bool operator==(const EstimationReport &, const EstimationReport &) = default;
};

namespace detail {

inline void require_estimation_dims(const JointAmplitudes &c, const std::vector<double> &q_values,
                                    const Estimator *f) {
    if (q_values.size() != c.system_dim()) {
        throw DimensionError("q_values has " + std::to_string(q_values.size()) + " entries, system dimension is " +
                             std::to_string(c.system_dim()));
    }
    if (f != nullptr && f->table.size() != c.probe_dim()) {
        throw DimensionError("estimator table has " + std::to_string(f->table.size()) +
                             " entries, probe dimension is " + std::to_string(c.probe_dim()));
    }
}

}  // namespace detail

/// f(r_j) = E[q | r_j]; impossible outcomes get 0 (they carry no weight).
inline Estimator conditional_mean_estimator(const JointAmplitudes &c, const std::vector<double> &q_values) {
    detail::require_estimation_dims(c, q_values, nullptr);
    const OutcomeDistribution dist = outcome_distribution(c);
    Estimator f{std::vector<double>(c.probe_dim(), 0.0)};
    for (std::size_t j = 0; j < c.probe_dim(); ++j) {
        if (dist[j] <= kZeroProbability) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < c.system_dim(); ++i) acc += c.probability(i, j) * q_values[i];
        f.table[j] = acc / dist[j];
    }
    return f;
}

/// sum_{ij} |c_{ij}|^2 (q_i - f(r_j)); zero for an unbiased read-out.
inline double bias(const JointAmplitudes &c, const std::vector<double> &q_values, const Estimator &f) {
    detail::require_estimation_dims(c, q_values, &f);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.system_dim(); ++i) {
        for (std::size_t j = 0; j < c.probe_dim(); ++j) acc += c.probability(i, j) * (q_values[i] - f.table[j]);
    }
    return acc;
}

/// dQ_err^2 = sum_{ij} |c_{ij}|^2 (q_i - f(r_j))^2.
inline double squared_error(const JointAmplitudes &c, const std::vector<double> &q_values, const Estimator &f) {
    detail::require_estimation_dims(c, q_values, &f);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.system_dim(); ++i) {
        for (std::size_t j = 0; j < c.probe_dim(); ++j) {
            const double d = q_values[i] - f.table[j];
            acc += c.probability(i, j) * d * d;
        }
    }
    return acc;
}

/// Shannon entropy in nats; entries at or below the information floor are skipped.
inline double entropy_nats(const std::vector<double> &p) {
    double h = 0.0;
    for (double x : p) {
        if (x > kInformationFloor) h -= x * std::log(x);
    }
    return h;
}

/// Classical mutual information (nats) between the system index and the read-out under p_{ij} = |c_{ij}|^2.
inline double mutual_information(const JointAmplitudes &c) {
    const std::vector<double> rows = q_marginal_post(c);
    const OutcomeDistribution cols = outcome_distribution(c);
    double info = 0.0;
    for (std::size_t i = 0; i < c.system_dim(); ++i) {
        for (std::size_t j = 0; j < c.probe_dim(); ++j) {
            const double p = c.probability(i, j);
            if (p <= kInformationFloor) continue;
            info += p * std::log(p / (rows[i] * cols[j]));
        }
    }
    return info > 0.0 ? info : 0.0;
}

inline double nats_to_bits(double nats) { return nats / std::log(2.0); }

/// Photon-counter estimate I ~ ln(n_max / dn_err) for response range n <= n_max and error dn_err.
inline double counter_information_heuristic(double n_max, double delta_n_err) {
    if (!(delta_n_err >= 1.0) || !(n_max >= delta_n_err) || !std::isfinite(n_max)) {
        throw DomainError("counter heuristic needs n_max >= delta_n_err >= 1");
    }
    return std::log(n_max / delta_n_err);
}

inline EstimationReport evaluate_estimation_report(const JointAmplitudes &c, const std::vector<double> &q_values,
                                                   const Estimator &f, double epsilon, double i_min) {
    EstimationReport r;
    r.estimator = f;
    r.bias = bias(c, q_values, f);
    r.squared_error = squared_error(c, q_values, f);
    r.epsilon = epsilon;
    r.info_nats = mutual_information(c);
    r.i_min = i_min;
    r.error_within_budget = r.squared_error <= epsilon * epsilon;
    r.information_sufficient = r.info_nats >= i_min;
    return r;
}

}  // namespace qnd
