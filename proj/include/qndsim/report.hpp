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

// Report documents emitted by the CLI. The machine form is JSON with full
// double precision and parses back to an identical ReportDocument.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qndsim/conditions.hpp"
#include "qndsim/estimation.hpp"

namespace qnd {

struct SamplingSummary {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> histogram;
    std::vector<double> probabilities;

    friend bool operator==(const SamplingSummary &, const SamplingSummary &) = default;
};

struct SearchSummary {
    std::string target;
    std::vector<Complex> best_state;
    double best_value = 0.0;
    std::uint64_t restarts = 0;
    std::uint64_t seed = 0;
    std::vector<double> trace;

    friend bool operator==(const SearchSummary &, const SearchSummary &) = default;
};

struct ReportDocument {
    std::string command;
    std::string tool_version;
    std::string input_digest;
    double tolerance = kDefaultTolerance;
    /// Requested checks; these decide the exit status of `check`.
    std::vector<ConditionReport> conditions;
    /// Informational checks (conservation laws, state-applied commutator).
    std::vector<ConditionReport> diagnostics;
    std::optional<EstimationReport> estimation;
    std::optional<std::string> classification;
    std::optional<SamplingSummary> sampling;
    std::optional<SearchSummary> search;
    std::vector<std::string> warnings;

    friend bool operator==(const ReportDocument &, const ReportDocument &) = default;
};

namespace detail {

using nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json &j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected a [re, im] pair");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline json condition_to_json(const ConditionReport &r) {
    return {{"condition", std::string(to_string(r.condition))},
            {"violation", r.violation},
            {"tolerance", r.tolerance},
            {"verdict", r.verdict},
            {"witness", r.witness},
            {"note", r.note}};
}

inline ConditionReport condition_from_json(const json &j) {
    ConditionReport r;
    const auto c = condition_from_string(j.at("condition").get<std::string>());
    if (!c) throw ParseError("unknown condition name in report");
    r.condition = *c;
    r.violation = j.at("violation").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.verdict = j.at("verdict").get<bool>();
    r.witness = j.at("witness").get<std::vector<std::size_t>>();
    r.note = j.at("note").get<std::string>();
    return r;
}

inline json estimation_to_json(const EstimationReport &e) {
    return {{"estimator", e.estimator.table},
            {"bias", e.bias},
            {"squared_error", e.squared_error},
            {"epsilon", e.epsilon},
            {"info_nats", e.info_nats},
            {"i_min", e.i_min},
            {"error_within_budget", e.error_within_budget},
            {"information_sufficient", e.information_sufficient}};
}

inline EstimationReport estimation_from_json(const json &j) {
    EstimationReport e;
    e.estimator.table = j.at("estimator").get<std::vector<double>>();
    e.bias = j.at("bias").get<double>();
    e.squared_error = j.at("squared_error").get<double>();
    e.epsilon = j.at("epsilon").get<double>();
    e.info_nats = j.at("info_nats").get<double>();
    e.i_min = j.at("i_min").get<double>();
    e.error_within_budget = j.at("error_within_budget").get<bool>();
    e.information_sufficient = j.at("information_sufficient").get<bool>();
    return e;
}

}  // namespace detail

inline nlohmann::json to_json(const ReportDocument &doc) {
    using detail::json;
    json j;
    j["command"] = doc.command;
    j["tool_version"] = doc.tool_version;
    j["input_digest"] = doc.input_digest;
    j["tolerance"] = doc.tolerance;
    j["conditions"] = json::array();
    for (const auto &r : doc.conditions) j["conditions"].push_back(detail::condition_to_json(r));
    j["diagnostics"] = json::array();
    for (const auto &r : doc.diagnostics) j["diagnostics"].push_back(detail::condition_to_json(r));
    j["estimation"] = doc.estimation ? detail::estimation_to_json(*doc.estimation) : json(nullptr);
    j["classification"] = doc.classification ? json(*doc.classification) : json(nullptr);
    if (doc.sampling) {
        j["sampling"] = {{"n", doc.sampling->n},
                         {"seed", doc.sampling->seed},
                         {"histogram", doc.sampling->histogram},
                         {"probabilities", doc.sampling->probabilities}};
    } else {
        j["sampling"] = nullptr;
    }
    if (doc.search) {
        json state = json::array();
        for (Complex z : doc.search->best_state) state.push_back(detail::complex_to_json(z));
        j["search"] = {{"target", doc.search->target},   {"best_state", state},
                       {"best_value", doc.search->best_value}, {"restarts", doc.search->restarts},
                       {"seed", doc.search->seed},       {"trace", doc.search->trace}};
    } else {
        j["search"] = nullptr;
    }
    j["warnings"] = doc.warnings;
    return j;
}

inline ReportDocument report_from_json(const nlohmann::json &j) {
    try {
        ReportDocument doc;
        doc.command = j.at("command").get<std::string>();
        doc.tool_version = j.at("tool_version").get<std::string>();
        doc.input_digest = j.at("input_digest").get<std::string>();
        doc.tolerance = j.at("tolerance").get<double>();
        for (const auto &r : j.at("conditions")) doc.conditions.push_back(detail::condition_from_json(r));
        for (const auto &r : j.at("diagnostics")) doc.diagnostics.push_back(detail::condition_from_json(r));
        if (!j.at("estimation").is_null()) doc.estimation = detail::estimation_from_json(j.at("estimation"));
        if (!j.at("classification").is_null()) doc.classification = j.at("classification").get<std::string>();
        if (const auto &s = j.at("sampling"); !s.is_null()) {
            doc.sampling = SamplingSummary{s.at("n").get<std::uint64_t>(), s.at("seed").get<std::uint64_t>(),
                                           s.at("histogram").get<std::vector<std::uint64_t>>(),
                                           s.at("probabilities").get<std::vector<double>>()};
        }
        if (const auto &s = j.at("search"); !s.is_null()) {
            SearchSummary sum;
            sum.target = s.at("target").get<std::string>();
            for (const auto &z : s.at("best_state")) sum.best_state.push_back(detail::complex_from_json(z));
            sum.best_value = s.at("best_value").get<double>();
            sum.restarts = s.at("restarts").get<std::uint64_t>();
            sum.seed = s.at("seed").get<std::uint64_t>();
            sum.trace = s.at("trace").get<std::vector<double>>();
            doc.search = std::move(sum);
        }
        doc.warnings = j.at("warnings").get<std::vector<std::string>>();
        return doc;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

inline std::string emit_machine(const ReportDocument &doc) { return to_json(doc).dump(2) + "\n"; }

inline ReportDocument parse_report(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
    return report_from_json(j);
}

}  // namespace qnd
