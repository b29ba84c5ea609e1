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

/**
 * @file
 * Builtin interaction models with known places in the strong / moderate / weak
 * hierarchy. Each builder returns the model with its default states and the
 * verdicts it is expected to produce for those defaults.
 *
 * | name                  | strong | moderate | weak | notes                              |
 * |-----------------------|--------|----------|------|------------------------------------|
 * | cnot_readout          | pass   | pass     | pass | cyclic-shift record of q on probe  |
 * | phase_probe           | pass   | pass     | pass | H_I = g Q (x) N, optional DFT read |
 * | swap                  | fail   | fail     | fail | exchanges system and probe         |
 * | partial_swap          | theta  | theta    | theta| cos(t) I + i sin(t) SWAP           |
 * | restricted_range      | fail   | fail     | pass | QND only below n_cut               |
 * | probe_controlled_flip | fail   | pass     | pass | probe r_0 leaves the system alone  |
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qndsim/conditions.hpp"
#include "qndsim/core.hpp"
#include "qndsim/measurement.hpp"

namespace qnd {

struct ExpectedProfile {
    bool strong = false;
    bool moderate = false;
    bool weak = false;

    friend bool operator==(const ExpectedProfile &, const ExpectedProfile &) = default;
};

struct ModelDescriptor {
    std::string name;
    std::map<std::string, double> params;
    /// Verdicts for (strong, moderate with the default probe, weak with the default states).
    ExpectedProfile expected_profile;
};

struct BuiltinModel {
    ModelDescriptor descriptor;
    MeasurementModel model;
    /// Generator of the interaction when the model is defined through one.
    std::optional<ComplexMatrix> interaction_hamiltonian;
};

namespace detail {

inline void require_min_dim(std::size_t d, const char *what) {
    if (d < 2) throw DomainError(std::string(what) + " must be at least 2, got " + std::to_string(d));
    require_factor_dim(d, what);
}

/// Permutation unitary from a map on joint basis pairs (k, l) -> (i, j).
template <typename Map>
ComplexMatrix permutation_unitary(std::size_t ds, std::size_t dp, Map &&map) {
    ComplexMatrix u = ComplexMatrix::Zero(ds * dp, ds * dp);
    for (std::size_t k = 0; k < ds; ++k) {
        for (std::size_t l = 0; l < dp; ++l) {
            const JointIndex to = map(k, l);
            u(to.flat(dp), JointIndex{k, l}.flat(dp)) = 1.0;
        }
    }
    return u;
}

inline StateVector leading_pair_state(std::size_t d) {
    ComplexVector a = ComplexVector::Zero(d);
    a[0] = 0.6;
    a[1] = 0.8;
    return StateVector(std::move(a));
}

}  // namespace detail

/// |q_k>|r_l> -> |q_k>|r_{(l + k) mod d}>, Q = R = (0, ..., d-1).
inline BuiltinModel cnot_readout(std::size_t d) {
    detail::require_min_dim(d, "cnot_readout dimension");
    const ComplexMatrix u = detail::permutation_unitary(d, d, [d](std::size_t k, std::size_t l) {
        return JointIndex{k, (l + k) % d};
    });
    MeasurementModel model(Observable::counting(d), Observable::counting(d), InteractionUnitary(u, d, d),
                           StateVector::uniform(d), StateVector::basis(d, 0));
    return {{"cnot_readout", {{"d", static_cast<double>(d)}}, {true, true, true}}, std::move(model), std::nullopt};
}

/// H_I = g Q (x) N with N = diag(0..d_P-1), u = exp(-i H_I). With `conjugate_readout` the probe is
/// read in the discrete Fourier basis, where the phase kick becomes a shift.
inline BuiltinModel phase_probe(std::size_t ds, std::size_t dp, double coupling, bool conjugate_readout) {
    detail::require_min_dim(ds, "phase_probe system dimension");
    detail::require_min_dim(dp, "phase_probe probe dimension");
    if (!std::isfinite(coupling)) throw DomainError("phase_probe coupling must be finite");
    const Observable q = Observable::counting(ds);
    const Observable n = Observable::counting(dp);
    const ComplexMatrix h = coupling * kron(q.matrix(), n.matrix());
    ComplexMatrix u = hermitian_expm(h, 1.0);
    if (conjugate_readout) {
        ComplexMatrix dft(dp, dp);
        for (std::size_t j = 0; j < dp; ++j) {
            for (std::size_t m = 0; m < dp; ++m) {
                dft(j, m) = std::polar(1.0 / std::sqrt(static_cast<double>(dp)),
                                       -2.0 * std::numbers::pi * static_cast<double>(j * m) / static_cast<double>(dp));
            }
        }
        u = kron(ComplexMatrix::Identity(ds, ds), dft) * u;
    }
    MeasurementModel model(q, n, InteractionUnitary(u, ds, dp), StateVector::uniform(ds), StateVector::uniform(dp));
    return {{"phase_probe",
             {{"system_dim", static_cast<double>(ds)},
              {"probe_dim", static_cast<double>(dp)},
              {"coupling", coupling},
              {"conjugate_readout", conjugate_readout ? 1.0 : 0.0}},
             {true, true, true}},
            std::move(model),
            h};
}

/// Full exchange of system and probe; default a = (0.6, 0.8, 0, ...), b = e_0.
inline BuiltinModel swap_model(std::size_t d) {
    detail::require_min_dim(d, "swap dimension");
    MeasurementModel model(Observable::counting(d), Observable::counting(d), InteractionUnitary(swap_matrix(d), d, d),
                           detail::leading_pair_state(d), StateVector::basis(d, 0));
    return {{"swap", {{"d", static_cast<double>(d)}}, {false, false, false}}, std::move(model), std::nullopt};
}

/// exp(i theta SWAP) = cos(theta) I + i sin(theta) SWAP; default states as for swap_model.
inline BuiltinModel partial_swap(std::size_t d, double theta) {
    detail::require_min_dim(d, "partial_swap dimension");
    if (!std::isfinite(theta)) throw DomainError("partial_swap theta must be finite");
    const auto n = static_cast<Eigen::Index>(d * d);
    const ComplexMatrix u =
        std::cos(theta) * ComplexMatrix::Identity(n, n) + Complex(0.0, std::sin(theta)) * swap_matrix(d);
    MeasurementModel model(Observable::counting(d), Observable::counting(d), InteractionUnitary(u, d, d),
                           detail::leading_pair_state(d), StateVector::basis(d, 0));
    // strong residual |sin|, moderate sin^2, weak 0.64 sin^2 for the default states.
    const double s = std::abs(std::sin(theta));
    const ExpectedProfile profile{s <= kDefaultTolerance, s * s <= kDefaultTolerance,
                                  0.64 * s * s <= kDefaultTolerance};
    return {{"partial_swap", {{"d", static_cast<double>(d)}, {"theta", theta}}, profile}, std::move(model),
            std::nullopt};
}

/// Finite response range. Levels q < n_cut are recorded by a cyclic shift of the probe, as in
/// cnot_readout; levels q >= n_cut are exchanged with the probe, as in swap. The in-range
/// shift images that would collide with the exchange images (target probe level >= n_cut) are
/// rerouted to the system levels the exchange leaves vacant:
///
///   k <  n_cut, j = (l + k) mod d <  n_cut : (k, l) -> (k, j)
///   k <  n_cut, j = (l + k) mod d >= n_cut : (k, l) -> (j, k)
///   k >= n_cut                             : (k, l) -> (l, k)
///
/// With b = e_0 every state supported below n_cut is read out without disturbing its Q
/// distribution, while any weight above n_cut is moved down to q_0.
inline BuiltinModel restricted_range_model(std::size_t ds, std::size_t dp, std::size_t n_cut) {
    if (ds != dp) throw DomainError("restricted_range needs equal system and probe dimensions");
    detail::require_min_dim(ds, "restricted_range dimension");
    if (n_cut < 1 || n_cut >= ds) {
        throw DomainError("restricted_range needs 1 <= n_cut < dimension, got n_cut = " + std::to_string(n_cut));
    }
    const std::size_t d = ds;
    const ComplexMatrix u = detail::permutation_unitary(d, d, [d, n_cut](std::size_t k, std::size_t l) {
        if (k >= n_cut) return JointIndex{l, k};
        const std::size_t j = (l + k) % d;
        return j < n_cut ? JointIndex{k, j} : JointIndex{j, k};
    });
    ComplexVector a = ComplexVector::Zero(d);
    a.head(n_cut).setOnes();
    MeasurementModel model(Observable::counting(d), Observable::counting(d), InteractionUnitary(u, d, d),
                           StateVector(std::move(a)), StateVector::basis(d, 0));
    return {{"restricted_range",
             {{"system_dim", static_cast<double>(ds)},
              {"probe_dim", static_cast<double>(dp)},
              {"n_cut", static_cast<double>(n_cut)}},
             {false, false, true}},
            std::move(model),
            std::nullopt};
}

/// U = sum_l X^l (x) |r_l><r_l|: probe level l shifts the system by l. Only b = e_0 leaves the
/// system untouched, so the moderate condition holds for that probe alone.
inline BuiltinModel probe_controlled_flip(std::size_t d) {
    detail::require_min_dim(d, "probe_controlled_flip dimension");
    const ComplexMatrix u = detail::permutation_unitary(d, d, [d](std::size_t k, std::size_t l) {
        return JointIndex{(k + l) % d, l};
    });
    MeasurementModel model(Observable::counting(d), Observable::counting(d), InteractionUnitary(u, d, d),
                           StateVector::uniform(d), StateVector::basis(d, 0));
    return {{"probe_controlled_flip", {{"d", static_cast<double>(d)}}, {false, true, true}}, std::move(model),
            std::nullopt};
}

inline const std::vector<std::string> &builtin_names() {
    static const std::vector<std::string> names{"cnot_readout", "phase_probe",      "swap",
                                                "partial_swap", "restricted_range", "probe_controlled_flip"};
    return names;
}

namespace detail {

class ParamReader {
   public:
    ParamReader(std::string model, const std::map<std::string, double> &params)
        : model_(std::move(model)), params_(params) {}

    double real(const std::string &key, double fallback) {
        used_.push_back(key);
        const auto it = params_.find(key);
        return it == params_.end() ? fallback : it->second;
    }

    std::size_t count(const std::string &key, std::size_t fallback) {
        const double v = real(key, static_cast<double>(fallback));
        if (!(v >= 0.0) || v != std::floor(v) || v > 1e6) {
            throw DomainError(model_ + " parameter '" + key + "' must be a non-negative integer");
        }
        return static_cast<std::size_t>(v);
    }

    void finish() const {
        for (const auto &[key, value] : params_) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
                throw ArgumentError(model_ + " has no parameter '" + key + "'");
            }
        }
    }

   private:
    std::string model_;
    const std::map<std::string, double> &params_;
    std::vector<std::string> used_;
};

}  // namespace detail

/// Builds a model by name; missing parameters take the gallery defaults.
inline BuiltinModel build_builtin(const std::string &name, const std::map<std::string, double> &params = {}) {
    detail::ParamReader p(name, params);
    auto done = [&](BuiltinModel m) {
        p.finish();
        return m;
    };
    if (name == "cnot_readout") return done(cnot_readout(p.count("d", 2)));
    if (name == "phase_probe") {
        const std::size_t ds = p.count("system_dim", 2);
        const std::size_t dp = p.count("probe_dim", 2);
        const double g = p.real("coupling", std::numbers::pi);
        const double conj = p.real("conjugate_readout", 1.0);
        return done(phase_probe(ds, dp, g, conj != 0.0));
    }
    if (name == "swap") return done(swap_model(p.count("d", 2)));
    if (name == "partial_swap") {
        const std::size_t d = p.count("d", 2);
        return done(partial_swap(d, p.real("theta", std::numbers::pi / 4)));
    }
    if (name == "restricted_range") {
        const std::size_t ds = p.count("system_dim", 4);
        const std::size_t dp = p.count("probe_dim", 4);
        return done(restricted_range_model(ds, dp, p.count("n_cut", 2)));
    }
    if (name == "probe_controlled_flip") return done(probe_controlled_flip(p.count("d", 2)));
    throw ArgumentError("unknown builtin model '" + name + "'");
}

/// Checker verdicts for the model's own states.
inline ExpectedProfile measured_profile(const MeasurementModel &model, double tol = kDefaultTolerance) {
    return {strong_violation(model.interaction(), tol).verdict,
            moderate_violation(model.interaction(), model.probe_state(), tol).verdict,
            weak_violation(model, tol).verdict};
}

/// One instance of every builtin, used by the demo gallery.
inline std::vector<BuiltinModel> gallery() {
    std::vector<BuiltinModel> out;
    out.push_back(cnot_readout(2));
    out.push_back(cnot_readout(3));
    out.push_back(phase_probe(2, 2, std::numbers::pi, true));
    out.push_back(phase_probe(3, 3, 0.7, false));
    out.push_back(swap_model(2));
    out.push_back(partial_swap(2, 0.0));
    out.push_back(partial_swap(2, std::numbers::pi / 4));
    out.push_back(restricted_range_model(4, 4, 2));
    out.push_back(probe_controlled_flip(2));
    out.push_back(probe_controlled_flip(3));
    return out;
}

}  // namespace qnd
