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

#include "qndsim/conditions.hpp"

#include "gtest/gtest.h"
#include "qndsim/models.hpp"
#include "qndsim/random.hpp"
#include "test_util.hpp"

using namespace qnd;

namespace {

const InteractionUnitary kCnot(test::cnot2(), 2, 2);
const InteractionUnitary kSwap(swap_matrix(2), 2, 2);
const StateVector kA = test::state({0.6, 0.8});
const StateVector kE0 = StateVector::basis(2, 0);

MeasurementModel qubit_model(const InteractionUnitary &u, const StateVector &a, const StateVector &b) {
    return {Observable::counting(2), Observable::counting(2), u, a, b};
}

}  // namespace

TEST(conditions, weak_examples) {
    Rng rng(3);
    const ConditionReport id = weak_violation(InteractionUnitary::identity(3, 2), random_state(3, rng),
                                              random_state(2, rng));
    EXPECT_LT(id.violation, 1e-15);
    EXPECT_TRUE(id.verdict);

    const ConditionReport swap = weak_violation(kSwap, kA, kE0);
    EXPECT_NEAR(swap.violation, 0.64, 1e-15);
    // Both residuals are 0.64; roundoff picks the witness.
    ASSERT_EQ(swap.witness.size(), 1u);
    EXPECT_LT(swap.witness[0], 2u);
    EXPECT_FALSE(swap.verdict);

    EXPECT_LT(weak_violation(kSwap, kE0, kE0).violation, 1e-15);
}

TEST(conditions, moderate_examples) {
    Rng rng(5);
    EXPECT_LT(moderate_violation(InteractionUnitary::identity(3, 3), random_state(3, rng)).violation, 1e-14);
    for (int trial = 0; trial < 20; ++trial) {
        EXPECT_LT(moderate_violation(kCnot, random_state(2, rng)).violation, 1e-14);
    }
    const ConditionReport swap = moderate_violation(kSwap, kE0);
    EXPECT_NEAR(swap.violation, 1.0, 1e-15);
    EXPECT_EQ(swap.witness, (std::vector<std::size_t>{1, 1, 0}));
    EXPECT_THROW(moderate_violation(kSwap, StateVector::uniform(3)), DimensionError);
}

TEST(conditions, strong_examples) {
    EXPECT_EQ(strong_violation(kCnot).violation, 0.0);
    const ConditionReport swap = strong_violation(kSwap);
    EXPECT_EQ(swap.violation, 1.0);
    ASSERT_EQ(swap.witness.size(), 4u);
    const auto &w = swap.witness;
    EXPECT_NE(w[0], w[2]);
    EXPECT_EQ(std::abs(kSwap.element(w[0], w[1], w[2], w[3])), 1.0);
    EXPECT_EQ(strong_violation(InteractionUnitary::identity(4, 2)).violation, 0.0);
}

TEST(conditions, conservation_examples) {
    EXPECT_EQ(conserve_system(diagonal_matrix({0, 1, 2}), diagonal_matrix({3, -1, 0.5})).violation, 0.0);
    EXPECT_NEAR(conserve_system(pauli_z(), pauli_x()).violation, 2.0, 1e-15);
    EXPECT_EQ(conserve_system(pauli_z(), ComplexMatrix::Zero(2, 2)).violation, 0.0);
    EXPECT_THROW(conserve_system(pauli_z(), ComplexMatrix::Zero(3, 3)), DimensionError);

    const ComplexMatrix diag_joint = diagonal_matrix({0.1, 0.7, -2.0, 3.0});
    EXPECT_EQ(conserve_interaction(pauli_z(), diag_joint).violation, 0.0);
    EXPECT_EQ(conserve_interaction(pauli_z(), ComplexMatrix::Zero(4, 4)).violation, 0.0);
    EXPECT_THROW(conserve_interaction(pauli_z(), ComplexMatrix::Zero(3, 3)), DimensionError);
}

TEST(conditions, conserve_interaction_xx_by_explicit_multiplication) {
    // [sz (x) I, sx (x) sx] = 2i sy (x) sx: every nonzero entry has modulus 2.
    const ComplexMatrix xx = kron(pauli_x(), pauli_x());
    const ComplexMatrix lifted = kron(pauli_z(), ComplexMatrix::Identity(2, 2));
    const double by_hand = oracle::max_entry_commutator(test::to_grid(lifted), test::to_grid(xx));
    EXPECT_NEAR(by_hand, 2.0, 1e-15);
    const ComplexMatrix expected = Complex(0, 2) * kron(pauli_y(), pauli_x());
    EXPECT_LT(max_abs_entry(commutator(lifted, xx) - expected), 1e-15);
    EXPECT_NEAR(conserve_interaction(pauli_z(), xx).violation, 2.0, 1e-15);
}

TEST(conditions, vaidman_examples) {
    Rng rng(17);
    // Phase-probe generator Q (x) N is diagonal in the joint basis.
    const ComplexMatrix h = kron(diagonal_matrix({0, 1, 2}), diagonal_matrix({0, 1}));
    for (int trial = 0; trial < 10; ++trial) {
        EXPECT_LT(vaidman_violation(diagonal_matrix({0, 1, 2}), h, random_state(3, rng), random_state(2, rng)).violation,
                  1e-15);
    }
    const ConditionReport xx = vaidman_violation(pauli_z(), kron(pauli_x(), pauli_x()), kE0, kE0);
    EXPECT_NEAR(xx.violation, 2.0, 1e-15);
    EXPECT_FALSE(xx.verdict);
    EXPECT_FALSE(xx.note.empty());

    // a = e_0 lies in the kernel of [sz (x) I, SWAP] when b = e_0.
    EXPECT_LT(vaidman_violation(pauli_z(), swap_matrix(2), kE0, kE0).violation, 1e-15);
    EXPECT_THROW(vaidman_violation(pauli_z(), swap_matrix(2), StateVector::uniform(3), kE0), DimensionError);
}

TEST(conditions, implication_report_examples) {
    const ImplicationReport cnot = implication_report(qubit_model(kCnot, kA, kE0));
    EXPECT_TRUE(cnot.reports[0].verdict && cnot.reports[1].verdict && cnot.reports[2].verdict);
    EXPECT_EQ(cnot.reports[0].condition, Condition::strong);
    EXPECT_EQ(cnot.reports[1].condition, Condition::moderate);
    EXPECT_EQ(cnot.reports[2].condition, Condition::weak);
    EXPECT_TRUE(cnot.chain_holds);

    const ImplicationReport swap = implication_report(qubit_model(kSwap, kE0, kE0));
    EXPECT_FALSE(swap.reports[0].verdict);
    EXPECT_FALSE(swap.reports[1].verdict);
    EXPECT_TRUE(swap.reports[2].verdict);
    EXPECT_TRUE(swap.chain_holds);

    const BuiltinModel flip = probe_controlled_flip(2);
    const ImplicationReport f = implication_report(flip.model);
    EXPECT_NEAR(f.reports[0].violation, 1.0, 1e-15);
    EXPECT_FALSE(f.reports[0].verdict);
    EXPECT_TRUE(f.reports[1].verdict);
    EXPECT_TRUE(f.reports[2].verdict);
}

TEST(conditions, implication_chain_on_random_instances) {
    Rng rng(31337);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t ds = 2 + trial % 3, dp = 2 + (trial / 3) % 3;
        const bool block = trial % 2 == 0;
        const ComplexMatrix m = block ? random_block_unitary(ds, dp, rng) : haar_unitary(ds * dp, rng);
        const InteractionUnitary u(m, ds, dp);
        const StateVector b = random_state(dp, rng);
        const double s = strong_violation(u).violation;
        const double mod = moderate_violation(u, b).violation;
        if (block) {
            EXPECT_LE(s, 1e-9);
        }
        if (s <= 1e-9) {
            EXPECT_LE(mod, 1e-8);
        }
        for (int k = 0; k < 5; ++k) {
            const double w = weak_violation(u, random_state(ds, rng), b).violation;
            if (mod <= 1e-9) {
                EXPECT_LE(w, 1e-8);
            }
        }
    }
}

TEST(conditions, strong_iff_block_structure) {
    Rng rng(2718);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t ds = 2 + trial % 3, dp = 1 + trial % 4;
        const ComplexMatrix block = random_block_unitary(ds, dp, rng);
        EXPECT_TRUE(strong_violation(InteractionUnitary(block, ds, dp)).verdict);
        // Mixing any two system sectors breaks it.
        const ComplexMatrix mix = haar_unitary(ds * dp, rng) * block;
        const bool strong = strong_violation(InteractionUnitary(mix, ds, dp)).verdict;
        bool is_block = true;
        for (std::size_t r = 0; r < ds * dp; ++r)
            for (std::size_t c = 0; c < ds * dp; ++c)
                if (r / dp != c / dp && std::abs(mix(r, c)) > 1e-9) is_block = false;
        EXPECT_EQ(strong, is_block);
    }
}

TEST(conditions, strong_from_conserved_generator) {
    Rng rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t ds = 2 + trial % 3, dp = 2 + trial % 2;
        const ComplexMatrix h = random_block_hermitian(ds, dp, rng);
        std::vector<double> q(ds);
        for (std::size_t i = 0; i < ds; ++i) q[i] = static_cast<double>(i) * 1.5 - 1.0;
        EXPECT_LE(conserve_interaction(diagonal_matrix(q), h).violation, 1e-12);
        for (double t : {0.1, 1.0, 10.0}) {
            EXPECT_LE(strong_violation(InteractionUnitary(hermitian_expm(h, t), ds, dp)).violation, 1e-9);
        }
    }
}

TEST(conditions, weak_equals_marginal_gap) {
    Rng rng(88);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t ds = 2 + trial % 3, dp = 2 + (trial / 3) % 3;
        const InteractionUnitary u(haar_unitary(ds * dp, rng), ds, dp);
        const StateVector a = random_state(ds, rng), b = random_state(dp, rng);
        const double w = weak_violation(u, a, b).violation;
        const double gap =
            test::linf(q_marginal_pre(a), q_marginal_from_ensemble(post_ensemble(joint_amplitudes(u, a, b))));
        EXPECT_NEAR(w, gap, 1e-12);
        EXPECT_NEAR(w, oracle::weak_residual(test::to_tensor(u), test::to_vec(a), test::to_vec(b)), 1e-12);
    }
}

TEST(conditions, classify_examples) {
    const ConditionReport cnot_weak = weak_violation(kCnot, kA, kE0);
    EXPECT_EQ(classify_measurement(cnot_weak, diagonal_matrix({0, 1}), diagonal_matrix({0, 1})), Classification::qnd);
    EXPECT_EQ(classify_measurement(cnot_weak, diagonal_matrix({0, 1}), pauli_x()), Classification::fk_only);
    const ConditionReport swap_weak = weak_violation(kSwap, kA, kE0);
    EXPECT_EQ(classify_measurement(swap_weak, diagonal_matrix({0, 1}), diagonal_matrix({0, 1})),
              Classification::not_fk);
    EXPECT_EQ(to_string(Classification::fk_only), "FK-only");
}

TEST(conditions, condition_names_round_trip) {
    for (Condition c : {Condition::weak, Condition::moderate, Condition::strong, Condition::vaidman,
                        Condition::conserve_system, Condition::conserve_interaction}) {
        EXPECT_EQ(condition_from_string(to_string(c)), c);
    }
    EXPECT_FALSE(condition_from_string("bogus"));
}
