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

#include "qndsim/models.hpp"

#include <numbers>

#include "gtest/gtest.h"
#include "qndsim/estimation.hpp"
#include "qndsim/random.hpp"
#include "test_util.hpp"

using namespace qnd;

namespace {

StateVector random_supported(std::size_t dim, std::size_t lo, std::size_t hi, Rng &rng) {
    const StateVector s = random_state(hi - lo, rng);
    ComplexVector v = ComplexVector::Zero(dim);
    v.segment(lo, hi - lo) = s.amplitudes();
    return StateVector(std::move(v));
}

}  // namespace

TEST(models, gallery_profiles_match_checkers) {
    for (const BuiltinModel &m : gallery()) {
        EXPECT_TRUE(is_unitary(m.model.interaction().matrix(), 1e-9).ok) << m.descriptor.name;
        EXPECT_EQ(measured_profile(m.model), m.descriptor.expected_profile) << m.descriptor.name;
    }
}

TEST(models, cnot_readout_examples) {
    const BuiltinModel two = cnot_readout(2);
    EXPECT_EQ(strong_violation(two.model.interaction()).violation, 0.0);
    EXPECT_EQ(two.model.interaction().matrix(), test::cnot2());

    const MeasurementModel m = two.model.with_system_state(test::state({0.6, 0.8}));
    const JointAmplitudes c = joint_amplitudes(m);
    EXPECT_EQ(squared_error(c, m.system().values(), Estimator{{0.0, 1.0}}), 0.0);

    Rng rng(1);
    for (std::size_t d = 2; d <= 5; ++d) {
        const BuiltinModel b = cnot_readout(d);
        for (int k = 0; k < 5; ++k) {
            EXPECT_LT(moderate_violation(b.model.interaction(), random_state(d, rng)).violation, 1e-14);
        }
    }
    EXPECT_THROW(cnot_readout(1), DomainError);
}

TEST(models, phase_probe_examples) {
    Rng rng(2);
    for (std::size_t ds = 2; ds <= 3; ++ds) {
        for (std::size_t dp = 2; dp <= 4; ++dp) {
            const BuiltinModel m = phase_probe(ds, dp, 0.37 * static_cast<double>(ds + dp), dp % 2 == 0);
            ASSERT_TRUE(m.interaction_hamiltonian);
            EXPECT_EQ(conserve_interaction(m.model.system().matrix(), *m.interaction_hamiltonian).violation, 0.0);
            EXPECT_LT(strong_violation(m.model.interaction()).violation, 1e-12);
        }
    }

    // g = 0: only the read-out basis change acts on the probe; nothing is learned.
    const BuiltinModel idle = phase_probe(2, 3, 0.0, true);
    const JointAmplitudes c0 = joint_amplitudes(idle.model.with_system_state(random_state(2, rng)));
    EXPECT_LT(mutual_information(c0), 1e-12);

    // g = pi, conjugate read-out on qubits: the probe ends in e_{q}, a perfect record.
    const BuiltinModel kick = phase_probe(2, 2, std::numbers::pi, true);
    const MeasurementModel m = kick.model.with_system_state(test::state({0.6, 0.8}));
    const JointAmplitudes c = joint_amplitudes(m);
    const oracle::Grid ref = oracle::joint(test::to_tensor(m.interaction()), test::to_vec(m.system_state()),
                                           test::to_vec(m.probe_state()));
    const double direct = oracle::mutual_information(oracle::joint_probs(ref));
    EXPECT_GT(direct, 0.6);
    EXPECT_NEAR(mutual_information(c), direct, 1e-12);
    EXPECT_NEAR(direct, oracle::binary_entropy(0.36), 1e-12);
}

TEST(models, swap_examples) {
    const BuiltinModel swap = swap_model(2);
    EXPECT_NEAR(weak_violation(swap.model).violation, 0.64, 1e-15);
    EXPECT_LT(weak_violation(swap.model.with_system_state(StateVector::basis(2, 0))).violation, 1e-15);
    EXPECT_EQ(strong_violation(swap.model.interaction()).violation, 1.0);
}

TEST(models, partial_swap_examples) {
    Rng rng(3);
    const BuiltinModel zero = partial_swap(3, 0.0);
    for (int k = 0; k < 5; ++k) {
        EXPECT_LT(weak_violation(zero.model.interaction(), random_state(3, rng), random_state(3, rng)).violation,
                  1e-15);
    }
    EXPECT_NEAR(weak_violation(partial_swap(2, std::numbers::pi / 2).model).violation, 0.64, 1e-15);
    const BuiltinModel quarter = partial_swap(2, std::numbers::pi / 4);
    const StateVector e0 = StateVector::basis(2, 0);
    EXPECT_LT(weak_violation(quarter.model.interaction(), e0, e0).violation, 1e-15);
}

TEST(models, partial_swap_is_continuous_in_theta) {
    const StateVector a = test::state({0.6, 0.8});
    const StateVector b = StateVector::basis(2, 0);
    double previous = -1.0;
    for (int k = 0; k < 50; ++k) {
        const double theta = std::numbers::pi * static_cast<double>(k) / 49.0;
        const double w = weak_violation(partial_swap(2, theta).model.interaction(), a, b).violation;
        EXPECT_NEAR(w, 0.64 * std::pow(std::sin(theta), 2), 1e-14);
        if (previous >= 0.0) {
            EXPECT_LT(std::abs(w - previous), 0.1);
        }
        previous = w;
    }
}

TEST(models, restricted_range_examples) {
    const BuiltinModel m = restricted_range_model(4, 4, 2);
    const StateVector e0 = StateVector::basis(4, 0);
    const InteractionUnitary &u = m.model.interaction();
    Rng rng(4);
    for (int k = 0; k < 100; ++k) {
        EXPECT_LE(weak_violation(u, random_supported(4, 0, 2, rng), e0).violation, 1e-12);
        EXPECT_GE(weak_violation(u, random_supported(4, 2, 4, rng), e0).violation, 0.1);
    }
    EXPECT_GE(weak_violation(u, StateVector::basis(4, 3), e0).violation, 0.1);
    EXPECT_GE(strong_violation(u).violation, 0.5);
    EXPECT_THROW(restricted_range_model(4, 3, 2), DomainError);
    EXPECT_THROW(restricted_range_model(4, 4, 0), DomainError);
    EXPECT_THROW(restricted_range_model(4, 4, 4), DomainError);
}

TEST(models, restricted_range_is_a_permutation_for_all_cuts) {
    for (std::size_t d = 2; d <= 6; ++d) {
        for (std::size_t cut = 1; cut < d; ++cut) {
            const BuiltinModel m = restricted_range_model(d, d, cut);
            const ComplexMatrix &u = m.model.interaction().matrix();
            for (Eigen::Index r = 0; r < u.rows(); ++r) EXPECT_EQ(u.row(r).cwiseAbs().sum(), 1.0);
            EXPECT_EQ(measured_profile(m.model), m.descriptor.expected_profile) << d << " " << cut;
        }
    }
}

TEST(models, build_builtin_dispatch) {
    EXPECT_EQ(build_builtin("cnot_readout", {{"d", 3}}).model.system().dim(), 3u);
    EXPECT_EQ(build_builtin("restricted_range").descriptor.params.at("n_cut"), 2.0);
    for (const std::string &name : builtin_names()) EXPECT_NO_THROW(build_builtin(name)) << name;
    EXPECT_THROW(build_builtin("nope"), ArgumentError);
    EXPECT_THROW(build_builtin("swap", {{"dim", 2}}), ArgumentError);
    EXPECT_THROW(build_builtin("swap", {{"d", 2.5}}), DomainError);
}
