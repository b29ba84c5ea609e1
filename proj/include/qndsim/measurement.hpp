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
 * System + probe + ideal read-out measurement process.
 *
 * A product pre-state a (x) b evolves under the interaction unitary into joint
 * amplitudes c_{ij}. An ideal detector then reads the probe observable R: the
 * outcome r_j occurs with probability P(r_j) = sum_i |c_{ij}|^2 and the joint
 * state collapses onto the probe basis vector |r_j>. The mixture of collapsed
 * branches is the post-measurement density operator.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "qndsim/core.hpp"

namespace qnd {

inline constexpr double kZeroProbability = 1e-14;
inline constexpr double kNormTolerance = 1e-10;

/// Eigenvalue list of an observable; its eigenbasis is the computational basis of the factor space.
class Observable {
   public:
    explicit Observable(std::vector<double> values) : values_(std::move(values)) {
        require_factor_dim(values_.size(), "observable");
        for (double v : values_) {
            if (!std::isfinite(v)) throw ValidationError("observable eigenvalue is not finite");
        }
    }

    /// Eigenvalues 0, 1, ..., dim - 1.
    static Observable counting(std::size_t dim) {
        std::vector<double> v(dim);
        for (std::size_t k = 0; k < dim; ++k) v[k] = static_cast<double>(k);
        return Observable(std::move(v));
    }

    std::size_t dim() const noexcept { return values_.size(); }
    const std::vector<double> &values() const noexcept { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }

    /// True when some eigenvalue repeats. The engine still indexes outcomes by basis vector.
    bool is_degenerate() const {
        return std::set<double>(values_.begin(), values_.end()).size() != values_.size();
    }

    /// diag(values) in the observable's own eigenbasis.
    ComplexMatrix matrix() const { return diagonal_matrix(values_); }

   private:
    std::vector<double> values_;
};

/// Everything needed to run one measurement: observables, interaction and the two factor states.
class MeasurementModel {
   public:
    MeasurementModel(Observable system, Observable probe, InteractionUnitary u, StateVector a, StateVector b)
        : system_(std::move(system)), probe_(std::move(probe)), u_(std::move(u)), a_(std::move(a)), b_(std::move(b)) {
        if (u_.system_dim() != system_.dim() || u_.probe_dim() != probe_.dim()) {
            throw DimensionError("interaction is on " + std::to_string(u_.system_dim()) + "x" +
                                 std::to_string(u_.probe_dim()) + " but observables are " +
                                 std::to_string(system_.dim()) + "x" + std::to_string(probe_.dim()));
        }
        if (a_.dim() != system_.dim()) throw DimensionError("system state dimension does not match system observable");
        if (b_.dim() != probe_.dim()) throw DimensionError("probe state dimension does not match probe observable");
    }

    const Observable &system() const noexcept { return system_; }
    const Observable &probe() const noexcept { return probe_; }
    const InteractionUnitary &interaction() const noexcept { return u_; }
    const StateVector &system_state() const noexcept { return a_; }
    const StateVector &probe_state() const noexcept { return b_; }

    MeasurementModel with_states(StateVector a, StateVector b) const {
        return {system_, probe_, u_, std::move(a), std::move(b)};
    }
    MeasurementModel with_system_state(StateVector a) const { return with_states(std::move(a), b_); }
    MeasurementModel with_probe_state(StateVector b) const { return with_states(a_, std::move(b)); }

   private:
    Observable system_;
    Observable probe_;
    InteractionUnitary u_;
    StateVector a_;
    StateVector b_;
};

/// Post-interaction joint state as the d_S x d_P matrix c(i, j).
class JointAmplitudes {
   public:
    explicit JointAmplitudes(ComplexMatrix c) : c_(std::move(c)) {
        if (c_.rows() == 0 || c_.cols() == 0) throw DimensionError("joint amplitudes must be non-empty");
        if (!all_finite(c_)) throw ValidationError("joint amplitudes are not finite");
        const double total = c_.squaredNorm();
        if (std::abs(total - 1.0) > kNormTolerance) {
            throw ValidationError("joint amplitudes have squared norm " + std::to_string(total) + ", expected 1");
        }
    }

    std::size_t system_dim() const noexcept { return static_cast<std::size_t>(c_.rows()); }
    std::size_t probe_dim() const noexcept { return static_cast<std::size_t>(c_.cols()); }
    const ComplexMatrix &matrix() const noexcept { return c_; }
    Complex operator()(std::size_t i, std::size_t j) const { return c_(i, j); }

    /// |c_{ij}|^2, the joint distribution of the system index and the read-out.
    double probability(std::size_t i, std::size_t j) const { return std::norm(c_(i, j)); }

    /// Flattened joint vector sum_{ij} c_{ij} |q_i>|r_j>.
    ComplexVector joint_vector() const {
        ComplexVector v(c_.size());
        for (std::size_t i = 0; i < system_dim(); ++i) {
            for (std::size_t j = 0; j < probe_dim(); ++j) v[JointIndex{i, j}.flat(probe_dim())] = c_(i, j);
        }
        return v;
    }

   private:
    ComplexMatrix c_;
};

struct OutcomeDistribution {
    std::vector<double> probs;

    double operator[](std::size_t j) const { return probs[j]; }
    std::size_t size() const noexcept { return probs.size(); }
};

/// One read-out branch: P(r_j) and the collapsed joint state.
struct Branch {
    std::size_t outcome = 0;
    double probability = 0.0;
    StateVector state;
};

/// Mixed ensemble of collapsed branches after the read-out.
struct PostEnsemble {
    std::size_t system_dim = 0;
    std::size_t probe_dim = 0;
    std::vector<Branch> branches;

    /// rho'' = sum_j P(r_j) |Psi''_j><Psi''_j| on the joint space.
    ComplexMatrix density() const {
        const auto n = static_cast<Eigen::Index>(system_dim * probe_dim);
        ComplexMatrix rho = ComplexMatrix::Zero(n, n);
        for (const Branch &br : branches) {
            const ComplexVector &psi = br.state.amplitudes();
            rho += br.probability * (psi * psi.adjoint());
        }
        return rho;
    }
};

/// c_{ij} = sum_{k,l} a_k b_l u_{ij}^{kl}.
inline JointAmplitudes joint_amplitudes(const InteractionUnitary &u, const StateVector &a, const StateVector &b) {
    if (a.dim() != u.system_dim() || b.dim() != u.probe_dim()) {
        throw DimensionError("states (" + std::to_string(a.dim()) + ", " + std::to_string(b.dim()) +
                             ") do not match interaction (" + std::to_string(u.system_dim()) + ", " +
                             std::to_string(u.probe_dim()) + ")");
    }
    const ComplexVector psi = u.matrix() * kron(a.amplitudes(), b.amplitudes());
    ComplexMatrix c(u.system_dim(), u.probe_dim());
    for (std::size_t f = 0; f < u.joint_dim(); ++f) {
        const JointIndex idx = JointIndex::from_flat(f, u.probe_dim());
        c(idx.system, idx.probe) = psi[f];
    }
    return JointAmplitudes(std::move(c));
}

inline JointAmplitudes joint_amplitudes(const MeasurementModel &model) {
    return joint_amplitudes(model.interaction(), model.system_state(), model.probe_state());
}

/// Born rule: P(r_j) = sum_i |c_{ij}|^2.
inline OutcomeDistribution outcome_distribution(const JointAmplitudes &c) {
    OutcomeDistribution dist{std::vector<double>(c.probe_dim(), 0.0)};
    for (std::size_t j = 0; j < c.probe_dim(); ++j) {
        double p = 0.0;
        for (std::size_t i = 0; i < c.system_dim(); ++i) p += c.probability(i, j);
        dist.probs[j] = std::max(p, 0.0);
    }
    return dist;
}

/// Projects the joint state onto |r_j> and renormalizes.
inline Branch collapse(const JointAmplitudes &c, std::size_t j) {
    if (j >= c.probe_dim()) {
        throw DimensionError("outcome " + std::to_string(j) + " out of range " + std::to_string(c.probe_dim()));
    }
    double p = 0.0;
    for (std::size_t i = 0; i < c.system_dim(); ++i) p += c.probability(i, j);
    if (p <= kZeroProbability) {
        throw ImpossibleOutcomeError("outcome " + std::to_string(j) + " has probability " + std::to_string(p));
    }
    ComplexVector psi = ComplexVector::Zero(c.system_dim() * c.probe_dim());
    for (std::size_t i = 0; i < c.system_dim(); ++i) {
        psi[JointIndex{i, j}.flat(c.probe_dim())] = c(i, j) / std::sqrt(p);
    }
    return Branch{j, p, StateVector(std::move(psi))};
}

/// All branches with P(r_j) > 1e-14; impossible outcomes are dropped.
inline PostEnsemble post_ensemble(const JointAmplitudes &c) {
    PostEnsemble ens{c.system_dim(), c.probe_dim(), {}};
    const OutcomeDistribution dist = outcome_distribution(c);
    for (std::size_t j = 0; j < c.probe_dim(); ++j) {
        if (dist[j] > kZeroProbability) ens.branches.push_back(collapse(c, j));
    }
    return ens;
}

/// |a_i|^2.
inline std::vector<double> q_marginal_pre(const StateVector &a) {
    std::vector<double> p(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) p[i] = std::norm(a[i]);
    return p;
}

/// sum_j |c_{ij}|^2.
inline std::vector<double> q_marginal_post(const JointAmplitudes &c) {
    std::vector<double> p(c.system_dim(), 0.0);
    for (std::size_t i = 0; i < c.system_dim(); ++i) {
        for (std::size_t j = 0; j < c.probe_dim(); ++j) p[i] += c.probability(i, j);
    }
    return p;
}

/// Q-basis diagonal of Tr_P rho''. Goes through the ensemble and the partial trace,
/// so it shares no code path with q_marginal_post.
inline std::vector<double> q_marginal_from_ensemble(const PostEnsemble &ens) {
    const ComplexMatrix reduced = partial_trace_probe(ens.density(), ens.system_dim, ens.probe_dim);
    std::vector<double> p(ens.system_dim);
    for (std::size_t i = 0; i < ens.system_dim; ++i) p[i] = reduced(i, i).real();
    return p;
}

/// Histogram of n seeded draws from the Born distribution (inverse CDF).
inline std::vector<std::uint64_t> sample_outcomes(const JointAmplitudes &c, std::uint64_t n, std::uint64_t seed) {
    if (n < 1) throw DomainError("sample count must be at least 1");
    const OutcomeDistribution dist = outcome_distribution(c);
    std::vector<double> cdf(dist.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        acc += dist[j];
        cdf[j] = acc;
    }
    // Last non-zero outcome absorbs roundoff in the cumulative sum.
    std::size_t last = 0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        if (dist[j] > 0.0) last = j;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, acc);
    std::vector<std::uint64_t> hist(dist.size(), 0);
    for (std::uint64_t draw = 0; draw < n; ++draw) {
        const double x = uniform(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        std::size_t j = static_cast<std::size_t>(it - cdf.begin());
        if (j > last) j = last;
        ++hist[j];
    }
    return hist;
}

}  // namespace qnd
