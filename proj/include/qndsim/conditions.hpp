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
 * Certificates for first-kind / QND behaviour of a measurement.
 *
 * Three nested conditions on the interaction, from most to least general:
 *
 *  - weak:     sum_j |c_{ij}(a, b)|^2 = |a_i|^2 for the given a and b,
 *              i.e. the read-out leaves the Q distribution invariant.
 *  - moderate: sum_j (sum_l u_{ij}^{kl} b_l)^* (sum_l' u_{ij}^{k'l'} b_l')
 *              = delta_{ki} delta_{k'i} for the given probe state b only.
 *  - strong:   u_{ij}^{kl} = 0 whenever i != k, for every a and b.
 *
 * strong => moderate => weak. The commutator conditions [Q, H_S] = 0 and
 * [Q (x) I, H_I] = 0, and the state-applied form [Q (x) I, H_I](a (x) b) = 0,
 * are reported alongside.
 *
 * Every violation is an L-infinity residual; the report carries the index
 * tuple where it is attained.
 */

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qndsim/core.hpp"
#include "qndsim/measurement.hpp"

namespace qnd {

enum class Condition { weak, moderate, strong, vaidman, conserve_system, conserve_interaction };

inline std::string_view to_string(Condition c) {
    switch (c) {
        case Condition::weak: return "weak";
        case Condition::moderate: return "moderate";
        case Condition::strong: return "strong";
        case Condition::vaidman: return "vaidman";
        case Condition::conserve_system: return "conserve_system";
        case Condition::conserve_interaction: return "conserve_interaction";
    }
    return "unknown";
}

inline std::optional<Condition> condition_from_string(std::string_view s) {
    for (Condition c : {Condition::weak, Condition::moderate, Condition::strong, Condition::vaidman,
                        Condition::conserve_system, Condition::conserve_interaction}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

struct ConditionReport {
    Condition condition = Condition::weak;
    double violation = 0.0;
    double tolerance = kDefaultTolerance;
    bool verdict = true;
    /// weak: (i); moderate: (k, k', i); strong: (i, j, k, l); commutators: (row, col); vaidman: (flat joint index).
    std::vector<std::size_t> witness;
    std::string note;

    friend bool operator==(const ConditionReport &, const ConditionReport &) = default;
};

namespace detail {

inline ConditionReport make_report(Condition c, double violation, double tol, std::vector<std::size_t> witness,
                                   std::string note = {}) {
    return {c, violation, tol, violation <= tol, std::move(witness), std::move(note)};
}

inline std::vector<std::size_t> argmax_entry(const ComplexMatrix &m) {
    Eigen::Index r = 0, c = 0;
    if (m.size() > 0) m.cwiseAbs().maxCoeff(&r, &c);
    return {static_cast<std::size_t>(r), static_cast<std::size_t>(c)};
}

}  // namespace detail

inline ConditionReport weak_violation(const InteractionUnitary &u, const StateVector &a, const StateVector &b,
                                      double tol = kDefaultTolerance) {
    const JointAmplitudes c = joint_amplitudes(u, a, b);
    const std::vector<double> post = q_marginal_post(c);
    const std::vector<double> pre = q_marginal_pre(a);
    double worst = -1.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < pre.size(); ++i) {
        const double r = std::abs(post[i] - pre[i]);
        if (r > worst) {
            worst = r;
            at = i;
        }
    }
    return detail::make_report(Condition::weak, worst, tol, {at});
}

inline ConditionReport weak_violation(const MeasurementModel &model, double tol = kDefaultTolerance) {
    return weak_violation(model.interaction(), model.system_state(), model.probe_state(), tol);
}

inline ConditionReport moderate_violation(const InteractionUnitary &u, const StateVector &b,
                                          double tol = kDefaultTolerance) {
    const std::size_t ds = u.system_dim();
    const std::size_t dp = u.probe_dim();
    if (b.dim() != dp) throw DimensionError("probe state does not match interaction probe dimension");
    // Column k of images holds the joint vector U (|q_k> (x) b), i.e. sum_l u_{ij}^{kl} b_l.
    ComplexMatrix images(ds * dp, ds);
    for (std::size_t k = 0; k < ds; ++k) {
        images.col(k) = u.matrix().middleCols(k * dp, dp) * b.amplitudes();
    }
    double worst = -1.0;
    std::vector<std::size_t> at{0, 0, 0};
    for (std::size_t i = 0; i < ds; ++i) {
        const auto rows = images.middleRows(i * dp, dp);
        const ComplexMatrix gram = rows.adjoint() * rows;  // gram(k, k') = sum_j w_k^* w_k'
        for (std::size_t k = 0; k < ds; ++k) {
            for (std::size_t kp = 0; kp < ds; ++kp) {
                const double target = (k == i && kp == i) ? 1.0 : 0.0;
                const double r = std::abs(gram(k, kp) - target);
                if (r > worst) {
                    worst = r;
                    at = {k, kp, i};
                }
            }
        }
    }
    return detail::make_report(Condition::moderate, worst, tol, std::move(at));
}

inline ConditionReport strong_violation(const InteractionUnitary &u, double tol = kDefaultTolerance) {
    const std::size_t ds = u.system_dim();
    const std::size_t dp = u.probe_dim();
    double worst = 0.0;
    std::vector<std::size_t> at{0, 0, 0, 0};
    bool found = false;
    for (std::size_t i = 0; i < ds; ++i) {
        for (std::size_t k = 0; k < ds; ++k) {
            if (i == k) continue;
            for (std::size_t j = 0; j < dp; ++j) {
                for (std::size_t l = 0; l < dp; ++l) {
                    const double r = std::abs(u.element(i, j, k, l));
                    if (!found || r > worst) {
                        worst = r;
                        at = {i, j, k, l};
                        found = true;
                    }
                }
            }
        }
    }
    if (!found) at.clear();  // one-level system: nothing off the diagonal blocks
    return detail::make_report(Condition::strong, worst, tol, std::move(at));
}

/// [Q, H_S]: Q is a constant of motion of the isolated system.
inline ConditionReport conserve_system(const ComplexMatrix &q, const ComplexMatrix &h_system,
                                       double tol = kDefaultTolerance) {
    const ComplexMatrix comm = commutator(q, h_system);
    return detail::make_report(Condition::conserve_system, max_abs_entry(comm), tol, detail::argmax_entry(comm));
}

/// [Q (x) I, H_I] on the joint space.
inline ConditionReport conserve_interaction(const ComplexMatrix &q, const ComplexMatrix &h_interaction,
                                            double tol = kDefaultTolerance) {
    require_square(q, "system observable");
    require_square(h_interaction, "interaction hamiltonian");
    if (h_interaction.rows() % q.rows() != 0) {
        throw DimensionError("interaction hamiltonian dimension is not a multiple of the system dimension");
    }
    const auto dp = h_interaction.rows() / q.rows();
    const ComplexMatrix lifted = kron(q, ComplexMatrix::Identity(dp, dp));
    const ComplexMatrix comm = commutator(lifted, h_interaction);
    return detail::make_report(Condition::conserve_interaction, max_abs_entry(comm), tol,
                               detail::argmax_entry(comm));
}

/// || [Q (x) I, H_I] (a (x) b) ||_2. The probe state must be supplied: the commutator acts on
/// the joint space, so it is evaluated on the product pre-state.
inline ConditionReport vaidman_violation(const ComplexMatrix &q, const ComplexMatrix &h_interaction,
                                         const StateVector &a, const StateVector &b,
                                         double tol = kDefaultTolerance) {
    require_square(q, "system observable");
    require_square(h_interaction, "interaction hamiltonian");
    if (static_cast<std::size_t>(q.rows()) != a.dim() ||
        static_cast<std::size_t>(h_interaction.rows()) != a.dim() * b.dim()) {
        throw DimensionError("vaidman check: operator and state dimensions disagree");
    }
    const ComplexMatrix lifted = kron(q, ComplexMatrix::Identity(b.dim(), b.dim()));
    const ComplexVector v = commutator(lifted, h_interaction) * kron(a.amplitudes(), b.amplitudes());
    Eigen::Index at = 0;
    if (v.size() > 0) v.cwiseAbs().maxCoeff(&at);
    return detail::make_report(Condition::vaidman, v.norm(), tol, {static_cast<std::size_t>(at)},
                               "evaluated on the joint pre-state a (x) b");
}

/// strong, moderate, weak (in that order) plus the implication-chain verdict.
struct ImplicationReport {
    std::array<ConditionReport, 3> reports;
    bool chain_holds = true;
};

/// Throws InternalConsistencyError if a stronger condition passes while a weaker one fails beyond
/// roundoff (d_S * d_P * tol), which can only come from a bug.
inline ImplicationReport implication_report(const MeasurementModel &model, double tol = kDefaultTolerance) {
    const ConditionReport strong = strong_violation(model.interaction(), tol);
    const ConditionReport moderate = moderate_violation(model.interaction(), model.probe_state(), tol);
    const ConditionReport weak = weak_violation(model, tol);
    const double slack = tol * static_cast<double>(model.interaction().joint_dim());
    const bool strong_ok = !strong.verdict || moderate.violation <= slack;
    const bool moderate_ok = !moderate.verdict || weak.violation <= slack;
    if (!strong_ok) {
        throw InternalConsistencyError("strong condition holds but moderate violation is " +
                                       std::to_string(moderate.violation));
    }
    if (!moderate_ok) {
        throw InternalConsistencyError("moderate condition holds but weak violation is " +
                                       std::to_string(weak.violation));
    }
    const bool chain = (!strong.verdict || moderate.verdict) && (!moderate.verdict || weak.verdict);
    return {{strong, moderate, weak}, chain};
}

enum class Classification { not_fk, qnd, fk_only };

inline std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::not_fk: return "not-FK";
        case Classification::qnd: return "QND";
        case Classification::fk_only: return "FK-only";
    }
    return "unknown";
}

inline std::optional<Classification> classification_from_string(std::string_view s) {
    for (Classification c : {Classification::not_fk, Classification::qnd, Classification::fk_only}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

/// FK iff the weak condition holds; QND additionally needs [Q, H_S] = 0.
inline Classification classify_measurement(const ConditionReport &weak_report, const ComplexMatrix &q,
                                           const ComplexMatrix &h_system, double tol = kDefaultTolerance) {
    if (!weak_report.verdict) return Classification::not_fk;
    return conserve_system(q, h_system, tol).verdict ? Classification::qnd : Classification::fk_only;
}

}  // namespace qnd
