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
 * JSON model files.
 *
 *   {
 *     "system":       {"dim": 2, "q_values": [0, 1]},
 *     "probe":        {"dim": 2, "r_values": [0, 1]},
 *     "system_state": [[0.6, 0], [0.8, 0]],
 *     "probe_state":  [[1, 0], [0, 0]],
 *     "interaction":  {"kind": "matrix", "matrix": [[[1, 0], ...], ...]},
 *     "estimator":    {"kind": "conditional_mean"},
 *     "budgets":      {"epsilon": 0.1, "i_min": 0.5},
 *     "tolerance":    1e-9,
 *     "system_hamiltonian": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]
 *   }
 *
 * Complex numbers are [re, im] pairs. Matrices are arrays of rows (row-major);
 * joint-space rows and columns are ordered system-major, index i * d_P + j.
 *
 * interaction.kind selects exactly one of
 *   "matrix":      {"matrix": <joint unitary>}
 *   "hamiltonian": {"hamiltonian": {"matrix": <joint Hermitian>, "time": t}}, u = exp(-i H t)
 *   "builtin":     {"builtin": {"name": "...", "params": {"key": number}}}
 *
 * For builtins, "system", "probe" and the two states are optional and default to
 * the model's own. States are normalized on load when their norm is within 1e-6
 * of 1 and rejected otherwise. "estimator", "budgets", "tolerance" and
 * "system_hamiltonian" are optional; a missing system hamiltonian is H_S = 0.
 */

#pragma once

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qndsim/models.hpp"

namespace qnd {

struct Budgets {
    double epsilon = 0.0;
    double i_min = 0.0;
};

enum class EstimatorKind { conditional_mean, table };

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::conditional_mean;
    std::vector<double> table;
};

struct LoadedModel {
    MeasurementModel model;
    std::string interaction_kind;
    std::optional<ComplexMatrix> interaction_hamiltonian;
    std::optional<ComplexMatrix> system_hamiltonian;
    std::optional<ModelDescriptor> builtin;
    EstimatorSpec estimator;
    std::optional<Budgets> budgets;
    double tolerance = kDefaultTolerance;
    std::string digest;
    std::vector<std::string> warnings;

    ComplexMatrix effective_system_hamiltonian() const {
        const auto d = static_cast<Eigen::Index>(model.system().dim());
        return system_hamiltonian.value_or(ComplexMatrix::Zero(d, d));
    }
};

inline std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 digest failed");
    }
    std::ostringstream os;
    for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int{md[k]};
    return os.str();
}

namespace detail {

using nlohmann::json;

inline std::string join_path(const std::string &base, const std::string &key) {
    return base.empty() ? key : base + "." + key;
}

inline std::string index_path(const std::string &base, std::size_t k) { return base + "[" + std::to_string(k) + "]"; }

inline double number(const json &j, const std::string &path) {
    if (!j.is_number()) throw ParseError(path + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError("value is not finite", path);
    return v;
}

inline std::size_t count(const json &j, const std::string &path) {
    if (!j.is_number_integer() || j.get<long long>() < 1) throw ParseError(path + ": expected a positive integer");
    return static_cast<std::size_t>(j.get<long long>());
}

inline const json &array(const json &j, const std::string &path) {
    if (!j.is_array()) throw ParseError(path + ": expected an array");
    return j;
}

inline const json &object(const json &j, const std::string &path) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    return j;
}

inline void allow_keys(const json &j, const std::string &path, std::initializer_list<std::string_view> keys) {
    for (const auto &[key, value] : j.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ValidationError("unknown field", join_path(path, key));
        }
    }
}

inline Complex complex_number(const json &j, const std::string &path) {
    if (!j.is_array() || j.size() != 2) throw ParseError(path + ": expected a [re, im] pair");
    return {number(j[0], index_path(path, 0)), number(j[1], index_path(path, 1))};
}

inline std::vector<double> reals(const json &j, const std::string &path) {
    array(j, path);
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], index_path(path, k)));
    return out;
}

inline ComplexVector complex_vector(const json &j, const std::string &path) {
    array(j, path);
    ComplexVector v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) v[k] = complex_number(j[k], index_path(path, k));
    return v;
}

inline ComplexMatrix complex_matrix(const json &j, const std::string &path, std::size_t dim) {
    array(j, path);
    if (j.size() != dim) {
        throw ValidationError("expected " + std::to_string(dim) + " rows, got " + std::to_string(j.size()), path);
    }
    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const std::string row_path = index_path(path, r);
        array(j[r], row_path);
        if (j[r].size() != dim) {
            throw ValidationError("expected " + std::to_string(dim) + " columns, got " + std::to_string(j[r].size()),
                                  row_path);
        }
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = complex_number(j[r][c], index_path(row_path, c));
    }
    return m;
}

inline StateVector state(const json &j, const std::string &path, std::size_t dim) {
    const ComplexVector v = complex_vector(j, path);
    if (static_cast<std::size_t>(v.size()) != dim) {
        throw ValidationError("expected " + std::to_string(dim) + " amplitudes, got " + std::to_string(v.size()),
                              path);
    }
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > 1e-6) {
        throw ValidationError("state norm " + std::to_string(norm) + " is not within 1e-6 of 1", path);
    }
    return StateVector(v);
}

inline Observable observable(const json &j, const std::string &path, const char *values_key) {
    object(j, path);
    allow_keys(j, path, {"dim", values_key});
    if (!j.contains("dim")) throw ValidationError("missing field", join_path(path, "dim"));
    const std::size_t dim = count(j["dim"], join_path(path, "dim"));
    if (dim > kMaxFactorDim) throw ValidationError("dimension exceeds " + std::to_string(kMaxFactorDim), path);
    if (!j.contains(values_key)) return Observable::counting(dim);
    const std::string values_path = join_path(path, values_key);
    std::vector<double> values = reals(j[values_key], values_path);
    if (values.size() != dim) {
        throw ValidationError("expected " + std::to_string(dim) + " eigenvalues, got " + std::to_string(values.size()),
                              values_path);
    }
    return Observable(std::move(values));
}

template <typename F>
auto with_path(const std::string &path, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const ValidationError &e) {
        if (!e.field().empty()) throw;
        throw ValidationError(e.what(), path);
    } catch (const ParseError &) {
        throw;
    } catch (const Error &e) {
        throw ValidationError(e.what(), path);
    }
}

}  // namespace detail

/// Parses and validates a model document; the input digest is the SHA-256 of `text`.
inline LoadedModel parse_model(std::string_view text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    detail::object(doc, "<root>");
    detail::allow_keys(doc, "", {"system", "probe", "system_state", "probe_state", "interaction", "estimator",
                                 "budgets", "tolerance", "system_hamiltonian"});

    double tolerance = kDefaultTolerance;
    if (doc.contains("tolerance")) {
        tolerance = detail::number(doc["tolerance"], "tolerance");
        if (!(tolerance > 0.0)) throw ValidationError("must be positive", "tolerance");
    }

    if (!doc.contains("interaction")) throw ValidationError("missing field", "interaction");
    const json &inter = detail::object(doc["interaction"], "interaction");
    if (!inter.contains("kind") || !inter["kind"].is_string()) {
        throw ValidationError("missing or non-string kind", "interaction.kind");
    }
    const std::string kind = inter["kind"].get<std::string>();
    if (kind != "matrix" && kind != "hamiltonian" && kind != "builtin") {
        throw ValidationError("unknown interaction kind '" + kind + "'", "interaction.kind");
    }
    detail::allow_keys(inter, "interaction", {"kind", "matrix", "hamiltonian", "builtin"});
    for (const char *other : {"matrix", "hamiltonian", "builtin"}) {
        if (other != kind && inter.contains(other)) {
            throw ValidationError("only the '" + kind + "' interaction may be populated",
                                  std::string("interaction.") + other);
        }
    }
    if (!inter.contains(kind)) throw ValidationError("missing field", "interaction." + kind);

    std::optional<Observable> system, probe;
    if (doc.contains("system")) system = detail::observable(doc["system"], "system", "q_values");
    if (doc.contains("probe")) probe = detail::observable(doc["probe"], "probe", "r_values");

    std::optional<BuiltinModel> built;
    std::optional<ComplexMatrix> hamiltonian;
    std::optional<InteractionUnitary> unitary;
    if (kind == "builtin") {
        const json &b = detail::object(inter["builtin"], "interaction.builtin");
        detail::allow_keys(b, "interaction.builtin", {"name", "params"});
        if (!b.contains("name") || !b["name"].is_string()) {
            throw ValidationError("missing or non-string name", "interaction.builtin.name");
        }
        std::map<std::string, double> params;
        if (b.contains("params")) {
            const json &p = detail::object(b["params"], "interaction.builtin.params");
            for (const auto &[key, value] : p.items()) {
                params[key] = detail::number(value, "interaction.builtin.params." + key);
            }
        }
        built = detail::with_path("interaction.builtin",
                                  [&] { return build_builtin(b["name"].get<std::string>(), params); });
        hamiltonian = built->interaction_hamiltonian;
        const MeasurementModel &m = built->model;
        if (system && system->dim() != m.system().dim()) {
            throw ValidationError("dimension does not match builtin (" + std::to_string(m.system().dim()) + ")",
                                  "system.dim");
        }
        if (probe && probe->dim() != m.probe().dim()) {
            throw ValidationError("dimension does not match builtin (" + std::to_string(m.probe().dim()) + ")",
                                  "probe.dim");
        }
        if (!system) system = m.system();
        if (!probe) probe = m.probe();
        unitary = m.interaction();
    } else {
        if (!system) throw ValidationError("missing field", "system");
        if (!probe) throw ValidationError("missing field", "probe");
        const std::size_t joint = system->dim() * probe->dim();
        if (kind == "matrix") {
            ComplexMatrix u = detail::complex_matrix(inter["matrix"], "interaction.matrix", joint);
            unitary = detail::with_path("interaction.matrix", [&] {
                return InteractionUnitary(std::move(u), system->dim(), probe->dim(), tolerance);
            });
        } else {
            const json &h = detail::object(inter["hamiltonian"], "interaction.hamiltonian");
            detail::allow_keys(h, "interaction.hamiltonian", {"matrix", "time"});
            if (!h.contains("matrix")) throw ValidationError("missing field", "interaction.hamiltonian.matrix");
            if (!h.contains("time")) throw ValidationError("missing field", "interaction.hamiltonian.time");
            hamiltonian = detail::complex_matrix(h["matrix"], "interaction.hamiltonian.matrix", joint);
            const double t = detail::number(h["time"], "interaction.hamiltonian.time");
            const ComplexMatrix u =
                detail::with_path("interaction.hamiltonian.matrix", [&] { return hermitian_expm(*hamiltonian, t); });
            unitary = detail::with_path("interaction.hamiltonian",
                                        [&] { return InteractionUnitary(u, system->dim(), probe->dim(), tolerance); });
        }
    }

    std::optional<StateVector> a, b;
    if (doc.contains("system_state")) a = detail::state(doc["system_state"], "system_state", system->dim());
    if (doc.contains("probe_state")) b = detail::state(doc["probe_state"], "probe_state", probe->dim());
    if (built) {
        if (!a) a = built->model.system_state();
        if (!b) b = built->model.probe_state();
    }
    if (!a) throw ValidationError("missing field", "system_state");
    if (!b) throw ValidationError("missing field", "probe_state");

    std::optional<ComplexMatrix> h_system;
    if (doc.contains("system_hamiltonian")) {
        h_system = detail::complex_matrix(doc["system_hamiltonian"], "system_hamiltonian", system->dim());
        if (!is_hermitian(*h_system, tolerance).ok) throw ValidationError("not Hermitian", "system_hamiltonian");
    }

    EstimatorSpec estimator;
    if (doc.contains("estimator")) {
        const json &e = detail::object(doc["estimator"], "estimator");
        detail::allow_keys(e, "estimator", {"kind", "table"});
        const std::string ekind = e.contains("kind") && e["kind"].is_string() ? e["kind"].get<std::string>() : "";
        if (ekind == "conditional_mean") {
            if (e.contains("table")) throw ValidationError("conditional_mean takes no table", "estimator.table");
        } else if (ekind == "table") {
            if (!e.contains("table")) throw ValidationError("missing field", "estimator.table");
            estimator.kind = EstimatorKind::table;
            estimator.table = detail::reals(e["table"], "estimator.table");
            if (estimator.table.size() != probe->dim()) {
                throw ValidationError("expected " + std::to_string(probe->dim()) + " entries, got " +
                                          std::to_string(estimator.table.size()),
                                      "estimator.table");
            }
        } else {
            throw ValidationError("expected 'conditional_mean' or 'table'", "estimator.kind");
        }
    }

    std::optional<Budgets> budgets;
    if (doc.contains("budgets")) {
        const json &bj = detail::object(doc["budgets"], "budgets");
        detail::allow_keys(bj, "budgets", {"epsilon", "i_min"});
        if (!bj.contains("epsilon")) throw ValidationError("missing field", "budgets.epsilon");
        if (!bj.contains("i_min")) throw ValidationError("missing field", "budgets.i_min");
        budgets = Budgets{detail::number(bj["epsilon"], "budgets.epsilon"),
                          detail::number(bj["i_min"], "budgets.i_min")};
        if (budgets->epsilon < 0.0) throw ValidationError("must be non-negative", "budgets.epsilon");
        if (budgets->i_min < 0.0) throw ValidationError("must be non-negative", "budgets.i_min");
    }

    MeasurementModel model(*system, *probe, *unitary, *a, *b);
    std::vector<std::string> warnings;
    if (model.system().is_degenerate()) {
        warnings.push_back("system observable has repeated eigenvalues; outcomes are resolved per basis vector");
    }
    if (model.probe().is_degenerate()) {
        warnings.push_back("probe observable has repeated eigenvalues; branches are indexed per basis vector");
    }
    return LoadedModel{std::move(model),
                       kind,
                       std::move(hamiltonian),
                       std::move(h_system),
                       built ? std::optional<ModelDescriptor>(built->descriptor) : std::nullopt,
                       std::move(estimator),
                       budgets,
                       tolerance,
                       "sha256:" + sha256_hex(text),
                       std::move(warnings)};
}

inline LoadedModel load_model_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open model file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

}  // namespace qnd
