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

#include "qndsim/measurement.hpp"

#include "gtest/gtest.h"
#include "qndsim/random.hpp"
#include "test_util.hpp"

using namespace qnd;

namespace {

const InteractionUnitary kCnot(test::cnot2(), 2, 2);
const InteractionUnitary kSwap(swap_matrix(2), 2, 2);

JointAmplitudes cnot_case() { return joint_amplitudes(kCnot, test::state({0.6, 0.8}), StateVector::basis(2, 0)); }

}  // namespace

TEST(measurement, joint_amplitudes_identity_is_outer_product) {
    Rng rng(1);
    const StateVector a = random_state(3, rng), b = random_state(4, rng);
    const JointAmplitudes c = joint_amplitudes(InteractionUnitary::identity(3, 4), a, b);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_LT(std::abs(c(i, j) - a[i] * b[j]), 1e-15);
}

TEST(measurement, joint_amplitudes_cnot_and_swap) {
    const JointAmplitudes c = cnot_case();
    EXPECT_NEAR(c(0, 0).real(), 0.6, 1e-15);
    EXPECT_NEAR(c(1, 1).real(), 0.8, 1e-15);
    EXPECT_EQ(std::abs(c(0, 1)), 0.0);
    EXPECT_EQ(std::abs(c(1, 0)), 0.0);

    const JointAmplitudes s = joint_amplitudes(kSwap, test::state({0.6, 0.8}), StateVector::basis(2, 0));
    EXPECT_NEAR(s(0, 0).real(), 0.6, 1e-15);
    EXPECT_NEAR(s(0, 1).real(), 0.8, 1e-15);
    EXPECT_EQ(std::abs(s(1, 0)), 0.0);
    EXPECT_EQ(std::abs(s(1, 1)), 0.0);
}

TEST(measurement, joint_amplitudes_dimension_mismatch) {
    EXPECT_THROW(joint_amplitudes(kCnot, StateVector::uniform(3), StateVector::basis(2, 0)), DimensionError);
    EXPECT_THROW(MeasurementModel(Observable::counting(3), Observable::counting(2), kCnot, StateVector::uniform(3),
                                  StateVector::uniform(2)),
                 DimensionError);
}

TEST(measurement, joint_amplitudes_match_tensor_contraction_oracle) {
    Rng rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t ds = 1 + trial % 4, dp = 1 + (trial / 4) % 4;
        const InteractionUnitary u(haar_unitary(ds * dp, rng), ds, dp);
        const StateVector a = random_state(ds, rng), b = random_state(dp, rng);
        const JointAmplitudes c = joint_amplitudes(u, a, b);
        const oracle::Grid ref = oracle::joint(test::to_tensor(u), test::to_vec(a), test::to_vec(b));
        double total = 0.0;
        for (std::size_t i = 0; i < ds; ++i)
            for (std::size_t j = 0; j < dp; ++j) {
                EXPECT_LT(std::abs(c(i, j) - ref[i][j]), 1e-12);
                total += c.probability(i, j);
            }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(measurement, outcome_distribution_examples) {
    const OutcomeDistribution p = outcome_distribution(cnot_case());
    EXPECT_NEAR(p[0], 0.36, 1e-15);
    EXPECT_NEAR(p[1], 0.64, 1e-15);

    Rng rng(8);
    const StateVector b = random_state(3, rng);
    const OutcomeDistribution q =
        outcome_distribution(joint_amplitudes(InteractionUnitary::identity(2, 3), StateVector::uniform(2), b));
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(q[j], std::norm(b[j]), 1e-15);

    const JointAmplitudes uniform(ComplexMatrix::Constant(3, 4, 1.0 / std::sqrt(12.0)));
    for (double x : outcome_distribution(uniform).probs) EXPECT_NEAR(x, 0.25, 1e-15);
}

TEST(measurement, joint_amplitudes_reject_unnormalized) {
    EXPECT_THROW(JointAmplitudes(ComplexMatrix::Constant(2, 2, 1.0)), ValidationError);
}

TEST(measurement, collapse_examples) {
    const JointAmplitudes c = cnot_case();
    const Branch zero = collapse(c, 0);
    EXPECT_NEAR(zero.probability, 0.36, 1e-15);
    EXPECT_NEAR(std::abs(zero.state[JointIndex{0, 0}.flat(2)]), 1.0, 1e-15);
    const Branch one = collapse(c, 1);
    EXPECT_NEAR(one.probability, 0.64, 1e-15);
    EXPECT_NEAR(std::abs(one.state[JointIndex{1, 1}.flat(2)]), 1.0, 1e-15);

    // Identity evolution: system factor untouched in every branch.
    const StateVector a = test::state({0.6, Complex(0, 0.8)});
    const JointAmplitudes id = joint_amplitudes(InteractionUnitary::identity(2, 2), a, StateVector::uniform(2));
    const Branch br = collapse(id, 1);
    EXPECT_LT(std::abs(br.state[JointIndex{0, 1}.flat(2)] - a[0]), 1e-15);
    EXPECT_LT(std::abs(br.state[JointIndex{1, 1}.flat(2)] - a[1]), 1e-15);
}

TEST(measurement, collapse_impossible_outcome) {
    const JointAmplitudes c = joint_amplitudes(InteractionUnitary::identity(2, 2), StateVector::uniform(2),
                                               StateVector::basis(2, 0));
    EXPECT_THROW(collapse(c, 1), ImpossibleOutcomeError);
    EXPECT_THROW(collapse(c, 2), DimensionError);
}

TEST(measurement, post_ensemble_examples) {
    const PostEnsemble ens = post_ensemble(cnot_case());
    ASSERT_EQ(ens.branches.size(), 2u);
    EXPECT_NEAR(ens.branches[0].probability, 0.36, 1e-15);
    EXPECT_NEAR(ens.branches[1].probability, 0.64, 1e-15);

    const StateVector a = test::state({0.6, 0.8});
    const StateVector b = test::state({1.0, 2.0, 0.0});
    const PostEnsemble id = post_ensemble(joint_amplitudes(InteractionUnitary::identity(2, 3), a, b));
    EXPECT_EQ(id.branches.size(), 2u);  // r_2 has zero weight and is dropped
    ComplexMatrix expected = ComplexMatrix::Zero(6, 6);
    const ComplexMatrix sys = a.amplitudes() * a.amplitudes().adjoint();
    for (std::size_t j = 0; j < 3; ++j) {
        ComplexMatrix proj = ComplexMatrix::Zero(3, 3);
        proj(j, j) = 1.0;
        expected += std::norm(b[j]) * kron(sys, proj);
    }
    EXPECT_LT(max_abs_entry(id.density() - expected), 1e-15);
}

TEST(measurement, post_ensemble_density_properties) {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t ds = 2 + trial % 3, dp = 2 + (trial / 3) % 3;
        const InteractionUnitary u(haar_unitary(ds * dp, rng), ds, dp);
        const JointAmplitudes c = joint_amplitudes(u, random_state(ds, rng), random_state(dp, rng));
        const PostEnsemble ens = post_ensemble(c);
        const ComplexMatrix rho = ens.density();
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-10);
        EXPECT_LT(is_hermitian(rho).deviation, 1e-12);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho);
        EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
        for (const Branch &br : ens.branches) EXPECT_NEAR(br.state.amplitudes().norm(), 1.0, 1e-12);

        // Collapse consistency: rho'' equals the probe-diagonal part of |Psi'><Psi'|.
        const ComplexVector psi = c.joint_vector();
        ComplexMatrix dephased = ComplexMatrix::Zero(ds * dp, ds * dp);
        for (std::size_t r = 0; r < ds * dp; ++r)
            for (std::size_t s = 0; s < ds * dp; ++s)
                if (r % dp == s % dp) dephased(r, s) = psi[r] * std::conj(psi[s]);
        EXPECT_LT(max_abs_entry(rho - dephased), 1e-12);
    }
}

TEST(measurement, q_marginal_examples) {
    const std::vector<double> pre = q_marginal_pre(test::state({0.6, 0.8}));
    EXPECT_NEAR(pre[0], 0.36, 1e-15);
    EXPECT_NEAR(pre[1], 0.64, 1e-15);
    EXPECT_EQ(q_marginal_pre(StateVector::basis(3, 2)), (std::vector<double>{0.0, 0.0, 1.0}));
    for (double p : q_marginal_pre(StateVector::uniform(5))) EXPECT_NEAR(p, 0.2, 1e-15);

    EXPECT_LT(test::linf(q_marginal_post(cnot_case()), pre), 1e-15);
    const JointAmplitudes s = joint_amplitudes(kSwap, test::state({0.6, 0.8}), StateVector::basis(2, 0));
    EXPECT_LT(test::linf(q_marginal_post(s), {1.0, 0.0}), 1e-15);

    Rng rng(4);
    const StateVector a = random_state(4, rng);
    const JointAmplitudes id = joint_amplitudes(InteractionUnitary::identity(4, 3), a, random_state(3, rng));
    EXPECT_LT(test::linf(q_marginal_post(id), q_marginal_pre(a)), 1e-15);
}

TEST(measurement, q_marginal_post_matches_reduced_density) {
    Rng rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t ds = 1 + trial % 4, dp = 1 + (trial / 4) % 4;
        const InteractionUnitary u(haar_unitary(ds * dp, rng), ds, dp);
        const JointAmplitudes c = joint_amplitudes(u, random_state(ds, rng), random_state(dp, rng));
        const std::vector<double> direct = q_marginal_post(c);
        const std::vector<double> reduced = q_marginal_from_ensemble(post_ensemble(c));
        EXPECT_LT(test::linf(direct, reduced), 1e-12);
        double total = 0.0;
        for (double x : direct) total += x;
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(measurement, sample_outcomes_binomial_bound) {
    const std::uint64_t n = 100000;
    const auto hist = sample_outcomes(cnot_case(), n, 12345);
    EXPECT_EQ(hist[0] + hist[1], n);
    const double freq = static_cast<double>(hist[0]) / static_cast<double>(n);
    EXPECT_LE(std::abs(freq - 0.36), 3.0 * std::sqrt(0.36 * 0.64 / static_cast<double>(n)));
}

TEST(measurement, sample_outcomes_deterministic_cases) {
    const JointAmplitudes c = joint_amplitudes(InteractionUnitary::identity(2, 3), StateVector::uniform(2),
                                               StateVector::basis(3, 1));
    EXPECT_EQ(sample_outcomes(c, 1000, 5), (std::vector<std::uint64_t>{0, 1000, 0}));
    EXPECT_EQ(sample_outcomes(cnot_case(), 5000, 9), sample_outcomes(cnot_case(), 5000, 9));
    EXPECT_NE(sample_outcomes(cnot_case(), 5000, 9), sample_outcomes(cnot_case(), 5000, 10));
    EXPECT_THROW(sample_outcomes(c, 0, 1), DomainError);
}

TEST(measurement, observable_degeneracy_flag) {
    EXPECT_FALSE(Observable({0.0, 1.0, 2.0}).is_degenerate());
    EXPECT_TRUE(Observable({0.0, 1.0, 1.0}).is_degenerate());
    EXPECT_THROW(Observable({0.0, std::numeric_limits<double>::infinity()}), ValidationError);
    EXPECT_THROW(Observable(std::vector<double>{}), DimensionError);
}
