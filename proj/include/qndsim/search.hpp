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
 * Multi-restart Nelder-Mead over unit vectors.
 *
 * A state of dimension d is parameterized by 2d reals (re, im interleaved) and
 * normalized before evaluation; the objectives are global-phase invariant so
 * the redundant directions are harmless. Restart r draws its start point from
 * the stream make_stream(seed, r), so restarts are independent of each other
 * and of execution order. The merged result is the best value over restarts,
 * lowest restart index on exact ties.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "qndsim/conditions.hpp"
#include "qndsim/random.hpp"

namespace qnd {

struct SearchResult {
    StateVector best_state;
    double best_value = 0.0;
    std::size_t restarts_used = 0;
    std::uint64_t seed = 0;
    /// Best value reached by each restart, in restart order.
    std::vector<double> trace;
};

struct SearchOptions {
    std::size_t restarts = 8;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 500;
    double improvement_tol = 1e-10;
};

enum class ProbeTarget { moderate, weak_with_fixed_a };

inline std::string_view to_string(ProbeTarget t) {
    return t == ProbeTarget::moderate ? "moderate" : "weak-with-fixed-a";
}

namespace detail {

using Objective = std::function<double(const StateVector &)>;

inline std::optional<StateVector> state_from_coords(const Eigen::VectorXd &x) {
    const Eigen::Index d = x.size() / 2;
    ComplexVector v(d);
    for (Eigen::Index k = 0; k < d; ++k) v[k] = Complex(x[2 * k], x[2 * k + 1]);
    if (!(v.norm() > 1e-12) || !all_finite(v)) return std::nullopt;
    return StateVector(std::move(v));
}

inline Eigen::VectorXd coords_from_state(const StateVector &s) {
    Eigen::VectorXd x(2 * s.dim());
    for (std::size_t k = 0; k < s.dim(); ++k) {
        x[2 * k] = s[k].real();
        x[2 * k + 1] = s[k].imag();
    }
    return x;
}

/// Minimizes `cost` from x0. One pass runs until the simplex values span less than `tol`;
/// the simplex is then rebuilt around the best vertex and the pass repeated until a pass
/// improves by less than `tol` or the iteration budget is spent.
inline Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd &)> &cost, Eigen::VectorXd x0,
                                   double step, std::size_t max_iterations, double tol) {
    const Eigen::Index n = x0.size();
    std::size_t iterations = 0;
    Eigen::VectorXd best = std::move(x0);
    double best_cost = cost(best);
    while (iterations < max_iterations) {
        std::vector<Eigen::VectorXd> simplex{best};
        std::vector<double> values{best_cost};
        for (Eigen::Index k = 0; k < n; ++k) {
            Eigen::VectorXd v = best;
            v[k] += step;
            simplex.push_back(v);
            values.push_back(cost(v));
        }
        std::vector<std::size_t> order(simplex.size());
        while (iterations < max_iterations) {
            ++iterations;
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
            const std::size_t lo = order.front();
            const std::size_t hi = order.back();
            const std::size_t second = order[order.size() - 2];
            if (values[hi] - values[lo] < tol) break;

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (std::size_t idx : order) {
                if (idx != hi) centroid += simplex[idx];
            }
            centroid /= static_cast<double>(n);

            const Eigen::VectorXd reflected = centroid + (centroid - simplex[hi]);
            const double fr = cost(reflected);
            if (fr < values[lo]) {
                const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[hi]);
                const double fe = cost(expanded);
                if (fe < fr) {
                    simplex[hi] = expanded;
                    values[hi] = fe;
                } else {
                    simplex[hi] = reflected;
                    values[hi] = fr;
                }
                continue;
            }
            if (fr < values[second]) {
                simplex[hi] = reflected;
                values[hi] = fr;
                continue;
            }
            const bool outside = fr < values[hi];
            const Eigen::VectorXd contracted =
                outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                        : Eigen::VectorXd(centroid + 0.5 * (simplex[hi] - centroid));
            const double fc = cost(contracted);
            if (fc < (outside ? fr : values[hi])) {
                simplex[hi] = contracted;
                values[hi] = fc;
                continue;
            }
            for (std::size_t idx = 0; idx < simplex.size(); ++idx) {
                if (idx == lo) continue;
                simplex[idx] = simplex[lo] + 0.5 * (simplex[idx] - simplex[lo]);
                values[idx] = cost(simplex[idx]);
            }
        }
        const auto it = std::min_element(values.begin(), values.end());
        const double pass_cost = *it;
        const Eigen::VectorXd pass_best = simplex[static_cast<std::size_t>(it - values.begin())];
        const double gain = best_cost - pass_cost;
        if (pass_cost < best_cost) {
            best = pass_best;
            best_cost = pass_cost;
        }
        if (gain < tol) break;
        step = std::max(step * 0.5, 1e-4);
    }
    return best;
}

/// Runs the restarts sequentially; the result would be identical in any order.
inline SearchResult multi_restart(std::size_t dim, const Objective &objective, bool maximize,
                                  const SearchOptions &opts) {
    if (opts.restarts < 1) throw DomainError("search needs at least one restart");
    const double sign = maximize ? -1.0 : 1.0;
    const double worst = std::numeric_limits<double>::infinity();
    auto cost = [&](const Eigen::VectorXd &x) {
        const auto s = state_from_coords(x);
        return s ? sign * objective(*s) : worst;
    };

    std::optional<StateVector> best_state;
    double best_value = 0.0;
    std::vector<double> trace;
    trace.reserve(opts.restarts);
    for (std::size_t r = 0; r < opts.restarts; ++r) {
        Rng rng = make_stream(opts.seed, r);
        const StateVector start = random_state(dim, rng);
        const Eigen::VectorXd x = nelder_mead(cost, coords_from_state(start), 0.25, opts.max_iterations,
                                              opts.improvement_tol);
        const StateVector found = state_from_coords(x).value_or(start);
        const double value = objective(found);
        trace.push_back(value);
        const bool better = !best_state || (maximize ? value > best_value : value < best_value);
        if (better) {
            best_state = found;
            best_value = value;
        }
    }
    return {*best_state, best_value, opts.restarts, opts.seed, std::move(trace)};
}

}  // namespace detail

/// Largest weak-condition violation over measured states a, for a fixed probe state b.
inline SearchResult max_weak_violation(const InteractionUnitary &u, const StateVector &b, const SearchOptions &opts) {
    if (b.dim() != u.probe_dim()) throw DimensionError("probe state does not match interaction");
    return detail::multi_restart(
        u.system_dim(), [&](const StateVector &a) { return weak_violation(u, a, b).violation; }, true, opts);
}

/// Smallest violation over probe states b: the moderate residual, or the weak residual for the fixed a.
inline SearchResult probe_design_search(const InteractionUnitary &u, ProbeTarget target, const SearchOptions &opts,
                                        const std::optional<StateVector> &a = std::nullopt) {
    if (target == ProbeTarget::moderate) {
        return detail::multi_restart(
            u.probe_dim(), [&](const StateVector &b) { return moderate_violation(u, b).violation; }, false, opts);
    }
    if (!a) throw ArgumentError("weak-with-fixed-a probe search needs a system state");
    if (a->dim() != u.system_dim()) throw DimensionError("system state does not match interaction");
    return detail::multi_restart(
        u.probe_dim(), [&](const StateVector &b) { return weak_violation(u, *a, b).violation; }, false, opts);
}

}  // namespace qnd
