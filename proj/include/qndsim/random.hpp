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

// Seeded random instances: Haar unitaries, unit-sphere states, block unitaries.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qndsim/core.hpp"

namespace qnd {

using Rng = std::mt19937_64;

/// Independent generator stream for (seed, stream) pairs.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

inline ComplexVector random_gaussian_vector(std::size_t dim, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector v(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        v[k] = Complex(re, im);
    }
    return v;
}

/// Uniformly distributed on the unit sphere of C^dim.
inline StateVector random_state(std::size_t dim, Rng &rng) {
    return StateVector(random_gaussian_vector(dim, rng));
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of R's diagonal divided out.
inline ComplexMatrix haar_unitary(std::size_t dim, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix z(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t k = 0; k < dim; ++k) {
        const double mag = std::abs(r(k, k));
        const Complex phase = mag > 0.0 ? r(k, k) / mag : Complex(1.0, 0.0);
        q.col(k) *= phase;
    }
    return q;
}

inline ComplexMatrix random_hermitian(std::size_t dim, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    }
    return 0.5 * (g + g.adjoint());
}

/// Direct sum over the system index of Haar-random probe unitaries:
/// u_{ij}^{kl} = delta_{ik} V_k(j, l).
inline ComplexMatrix random_block_unitary(std::size_t system_dim, std::size_t probe_dim, Rng &rng) {
    const auto n = static_cast<Eigen::Index>(system_dim * probe_dim);
    ComplexMatrix u = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < system_dim; ++k) {
        u.block(k * probe_dim, k * probe_dim, probe_dim, probe_dim) = haar_unitary(probe_dim, rng);
    }
    return u;
}

/// Hermitian generator that is block-diagonal over the system basis, so it commutes with Q (x) I.
inline ComplexMatrix random_block_hermitian(std::size_t system_dim, std::size_t probe_dim, Rng &rng) {
    const auto n = static_cast<Eigen::Index>(system_dim * probe_dim);
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < system_dim; ++k) {
        h.block(k * probe_dim, k * probe_dim, probe_dim, probe_dim) = random_hermitian(probe_dim, rng);
    }
    return h;
}

}  // namespace qnd
