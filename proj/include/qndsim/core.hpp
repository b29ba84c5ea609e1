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
 * Dense complex linear algebra on small Hilbert spaces.
 *
 * Every joint space in qndsim is a system factor (dimension d_S) tensored with
 * a probe factor (dimension d_P). Joint basis vectors |q_i>|r_j> are ordered
 * system-major: flat index = i * d_P + j. All modules rely on this ordering.
 */

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qndsim/errors.hpp"

namespace qnd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr std::size_t kMaxFactorDim = 64;

/// Outcome of a tolerance check: the scalar residual and whether it is within tolerance.
struct Deviation {
    bool ok = false;
    double deviation = 0.0;
};

/// Position of |q_i>|r_j> in the joint basis.
struct JointIndex {
    std::size_t system = 0;
    std::size_t probe = 0;

    constexpr std::size_t flat(std::size_t probe_dim) const noexcept { return system * probe_dim + probe; }

    static constexpr JointIndex from_flat(std::size_t flat, std::size_t probe_dim) noexcept {
        return {flat / probe_dim, flat % probe_dim};
    }

    friend constexpr bool operator==(const JointIndex &, const JointIndex &) = default;
};

inline double max_abs_entry(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const Complex z = m(r, c);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    }
    return true;
}

inline void require_square(const ComplexMatrix &m, const char *what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionError(std::string(what) + " must be a non-empty square matrix, got " + std::to_string(m.rows()) +
                             "x" + std::to_string(m.cols()));
    }
}

inline void require_factor_dim(std::size_t dim, const char *what) {
    if (dim == 0 || dim > kMaxFactorDim) {
        throw DimensionError(std::string(what) + " dimension must be in [1, " + std::to_string(kMaxFactorDim) +
                             "], got " + std::to_string(dim));
    }
}

/// max |M^dagger M - I| entrywise.
inline Deviation is_unitary(const ComplexMatrix &m, double tol = kDefaultTolerance) {
    require_square(m, "is_unitary operand");
    const ComplexMatrix residual = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
    const double dev = max_abs_entry(residual);
    return {dev <= tol, dev};
}

/// max |M - M^dagger| entrywise.
inline Deviation is_hermitian(const ComplexMatrix &m, double tol = kDefaultTolerance) {
    require_square(m, "is_hermitian operand");
    const double dev = max_abs_entry(m - m.adjoint());
    return {dev <= tol, dev};
}

inline ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_square(a, "commutator left operand");
    require_square(b, "commutator right operand");
    if (a.rows() != b.rows()) {
        throw DimensionError("commutator operands differ in dimension: " + std::to_string(a.rows()) + " vs " +
                             std::to_string(b.rows()));
    }
    return a * b - b * a;
}

/// Max-entry magnitude of AB - BA.
inline double commutator_norm(const ComplexMatrix &a, const ComplexMatrix &b) {
    return max_abs_entry(commutator(a, b));
}

/// U = exp(-i H t) with hbar = 1, via the eigendecomposition of Hermitian H.
inline ComplexMatrix hermitian_expm(const ComplexMatrix &h, double t) {
    const Deviation herm = is_hermitian(h, kDefaultTolerance);
    if (!herm.ok) {
        throw ValidationError("hamiltonian is not Hermitian (deviation " + std::to_string(herm.deviation) + ")");
    }
    if (!all_finite(h) || !std::isfinite(t)) throw ValidationError("hamiltonian or time is not finite");
    // Symmetrize so the solver sees an exactly self-adjoint input.
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const Eigen::VectorXd &lambda = solver.eigenvalues();
    const ComplexMatrix &v = solver.eigenvectors();
    ComplexVector phases(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) phases[k] = std::polar(1.0, -lambda[k] * t);
    return v * phases.asDiagonal() * v.adjoint();
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexVector kron(const ComplexVector &a, const ComplexVector &b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

/// Traces out the probe factor of an operator on the joint space.
inline ComplexMatrix partial_trace_probe(const ComplexMatrix &rho, std::size_t system_dim, std::size_t probe_dim) {
    const auto joint = static_cast<Eigen::Index>(system_dim * probe_dim);
    if (rho.rows() != joint || rho.cols() != joint) {
        throw DimensionError("partial trace: operator is " + std::to_string(rho.rows()) + "x" +
                             std::to_string(rho.cols()) + ", expected " + std::to_string(joint) + " square");
    }
    ComplexMatrix out = ComplexMatrix::Zero(system_dim, system_dim);
    for (std::size_t i = 0; i < system_dim; ++i) {
        for (std::size_t k = 0; k < system_dim; ++k) {
            Complex acc{0.0, 0.0};
            for (std::size_t j = 0; j < probe_dim; ++j) {
                acc += rho(JointIndex{i, j}.flat(probe_dim), JointIndex{k, j}.flat(probe_dim));
            }
            out(i, k) = acc;
        }
    }
    return out;
}

inline ComplexMatrix diagonal_matrix(const std::vector<double> &values) {
    ComplexMatrix m = ComplexMatrix::Zero(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

/// Unit-norm pure state. Construction normalizes its input.
class StateVector {
   public:
    explicit StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() == 0) throw DimensionError("state vector must have positive dimension");
        if (!all_finite(amplitudes_)) throw ValidationError("state vector has non-finite amplitudes");
        const double norm = amplitudes_.norm();
        if (!(norm > 0.0)) throw ValidationError("state vector has zero norm");
        amplitudes_ /= norm;
    }

    static StateVector basis(std::size_t dim, std::size_t k) {
        if (k >= dim) throw DimensionError("basis index " + std::to_string(k) + " out of range " + std::to_string(dim));
        ComplexVector v = ComplexVector::Zero(dim);
        v[k] = 1.0;
        return StateVector(std::move(v));
    }

    static StateVector uniform(std::size_t dim) { return StateVector(ComplexVector::Ones(dim)); }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const ComplexVector &amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t k) const { return amplitudes_[k]; }

   private:
    ComplexVector amplitudes_;
};

/// The interaction tensor u_{ij}^{kl}: |q_k>|r_l> evolves to sum_{ij} u_{ij}^{kl} |q_i>|r_j>.
/// Stored as the unitary on the joint space, so u_{ij}^{kl} = U(flat(i,j), flat(k,l)).
class InteractionUnitary {
   public:
    InteractionUnitary(ComplexMatrix matrix, std::size_t system_dim, std::size_t probe_dim,
                       double tol = kDefaultTolerance)
        : matrix_(std::move(matrix)), system_dim_(system_dim), probe_dim_(probe_dim) {
        require_factor_dim(system_dim, "system");
        require_factor_dim(probe_dim, "probe");
        const auto joint = static_cast<Eigen::Index>(system_dim * probe_dim);
        if (matrix_.rows() != joint || matrix_.cols() != joint) {
            throw DimensionError("interaction unitary is " + std::to_string(matrix_.rows()) + "x" +
                                 std::to_string(matrix_.cols()) + ", expected " + std::to_string(joint) + " square");
        }
        if (!all_finite(matrix_)) throw ValidationError("interaction unitary has non-finite entries");
        const Deviation dev = is_unitary(matrix_, tol);
        if (!dev.ok) {
            throw ValidationError("interaction matrix is not unitary (deviation " + std::to_string(dev.deviation) +
                                  ")");
        }
    }

    static InteractionUnitary identity(std::size_t system_dim, std::size_t probe_dim) {
        const auto n = static_cast<Eigen::Index>(system_dim * probe_dim);
        return {ComplexMatrix::Identity(n, n), system_dim, probe_dim};
    }

    std::size_t system_dim() const noexcept { return system_dim_; }
    std::size_t probe_dim() const noexcept { return probe_dim_; }
    std::size_t joint_dim() const noexcept { return system_dim_ * probe_dim_; }
    const ComplexMatrix &matrix() const noexcept { return matrix_; }

    Complex element(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return matrix_(JointIndex{i, j}.flat(probe_dim_), JointIndex{k, l}.flat(probe_dim_));
    }

   private:
    ComplexMatrix matrix_;
    std::size_t system_dim_;
    std::size_t probe_dim_;
};

inline ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

/// SWAP on d (x) d: |q_k>|r_l> -> |q_l>|r_k>.
inline ComplexMatrix swap_matrix(std::size_t d) {
    ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) m(JointIndex{l, k}.flat(d), JointIndex{k, l}.flat(d)) = 1.0;
    }
    return m;
}

}  // namespace qnd
