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

// Command dispatch for the qndsim tool.
//
// Exit codes: 0 every requested check or budget passes, 1 a physics check
// fails, 2 input or usage error, 3 internal consistency failure.

#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qndsim/model_file.hpp"
#include "qndsim/report.hpp"
#include "qndsim/search.hpp"

#ifndef QNDSIM_VERSION
#define QNDSIM_VERSION "0.1.0"
#endif

namespace qnd::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

inline constexpr std::string_view kToolVersion = QNDSIM_VERSION;

struct CommandResult {
    int exit_code = kExitPass;
    ReportDocument report;
};

inline ReportDocument base_report(const std::string &command, const LoadedModel &loaded, double tol) {
    ReportDocument doc;
    doc.command = command;
    doc.tool_version = std::string(kToolVersion);
    doc.input_digest = loaded.digest;
    doc.tolerance = tol;
    doc.warnings = loaded.warnings;
    return doc;
}

/// `condition` is one of weak, moderate, strong, all.
inline CommandResult cmd_check(const LoadedModel &loaded, const std::string &condition, double tol) {
    const MeasurementModel &m = loaded.model;
    CommandResult out{kExitPass, base_report("check", loaded, tol)};
    ReportDocument &doc = out.report;

    ConditionReport weak = weak_violation(m, tol);
    if (condition == "all") {
        const ImplicationReport chain = implication_report(m, tol);
        doc.conditions.assign(chain.reports.begin(), chain.reports.end());
        weak = chain.reports[2];
    } else if (condition == "weak") {
        doc.conditions.push_back(weak);
    } else if (condition == "moderate") {
        doc.conditions.push_back(moderate_violation(m.interaction(), m.probe_state(), tol));
    } else if (condition == "strong") {
        doc.conditions.push_back(strong_violation(m.interaction(), tol));
    } else {
        throw ArgumentError("unknown condition '" + condition + "'");
    }

    const ComplexMatrix q = m.system().matrix();
    const ComplexMatrix hs = loaded.effective_system_hamiltonian();
    doc.diagnostics.push_back(conserve_system(q, hs, tol));
    if (loaded.interaction_hamiltonian) {
        doc.diagnostics.push_back(conserve_interaction(q, *loaded.interaction_hamiltonian, tol));
        doc.diagnostics.push_back(
            vaidman_violation(q, *loaded.interaction_hamiltonian, m.system_state(), m.probe_state(), tol));
    }
    doc.classification = std::string(to_string(classify_measurement(weak, q, hs, tol)));

    const bool all_pass =
        std::all_of(doc.conditions.begin(), doc.conditions.end(), [](const ConditionReport &r) { return r.verdict; });
    out.exit_code = all_pass ? kExitPass : kExitFail;
    return out;
}

inline CommandResult cmd_estimate(const LoadedModel &loaded, double tol) {
    if (!loaded.budgets) throw ValidationError("estimate needs error and information budgets", "budgets");
    const MeasurementModel &m = loaded.model;
    CommandResult out{kExitPass, base_report("estimate", loaded, tol)};
    const JointAmplitudes c = joint_amplitudes(m);
    const std::vector<double> &q = m.system().values();
    const Estimator f = loaded.estimator.kind == EstimatorKind::table ? Estimator{loaded.estimator.table}
                                                                      : conditional_mean_estimator(c, q);
    const EstimationReport est = evaluate_estimation_report(c, q, f, loaded.budgets->epsilon, loaded.budgets->i_min);
    const ConditionReport weak = weak_violation(m, tol);
    out.report.classification =
        std::string(to_string(classify_measurement(weak, m.system().matrix(), loaded.effective_system_hamiltonian(), tol)));
    out.report.estimation = est;
    out.exit_code = est.passes() ? kExitPass : kExitFail;
    return out;
}

inline CommandResult cmd_simulate(const LoadedModel &loaded, std::int64_t n, std::uint64_t seed, double tol) {
    if (n < 1) throw DomainError("sample count must be at least 1");
    CommandResult out{kExitPass, base_report("simulate", loaded, tol)};
    const JointAmplitudes c = joint_amplitudes(loaded.model);
    SamplingSummary s;
    s.n = static_cast<std::uint64_t>(n);
    s.seed = seed;
    s.histogram = sample_outcomes(c, s.n, seed);
    s.probabilities = outcome_distribution(c).probs;
    out.report.sampling = std::move(s);
    return out;
}

/// `target`: weak maximizes the weak violation over system states; moderate and probe
/// minimize the moderate violation, or the weak violation at the model's system state,
/// over probe states.
inline CommandResult cmd_search(const LoadedModel &loaded, const std::string &target, std::size_t restarts,
                                std::uint64_t seed, double tol) {
    const MeasurementModel &m = loaded.model;
    SearchOptions opts;
    opts.restarts = restarts;
    opts.seed = seed;
    SearchResult r = [&] {
        if (target == "weak") return max_weak_violation(m.interaction(), m.probe_state(), opts);
        if (target == "moderate") return probe_design_search(m.interaction(), ProbeTarget::moderate, opts);
        if (target == "probe") {
            return probe_design_search(m.interaction(), ProbeTarget::weak_with_fixed_a, opts, m.system_state());
        }
        throw ArgumentError("unknown search target '" + target + "'");
    }();
    CommandResult out{kExitPass, base_report("search", loaded, tol)};
    SearchSummary s;
    s.target = target;
    s.best_state.assign(r.best_state.amplitudes().begin(), r.best_state.amplitudes().end());
    s.best_value = r.best_value;
    s.restarts = r.restarts_used;
    s.seed = r.seed;
    s.trace = std::move(r.trace);
    out.report.search = std::move(s);
    return out;
}

struct GalleryRow {
    std::string name;
    std::map<std::string, double> params;
    ExpectedProfile expected;
    ExpectedProfile measured;
    double strong = 0.0;
    double moderate = 0.0;
    double weak = 0.0;
};

inline std::vector<GalleryRow> demo_rows(double tol) {
    std::vector<GalleryRow> rows;
    for (const BuiltinModel &b : gallery()) {
        const ImplicationReport chain = implication_report(b.model, tol);
        rows.push_back({b.descriptor.name, b.descriptor.params, b.descriptor.expected_profile,
                        {chain.reports[0].verdict, chain.reports[1].verdict, chain.reports[2].verdict},
                        chain.reports[0].violation, chain.reports[1].violation, chain.reports[2].violation});
    }
    return rows;
}

// ---- rendering ----

inline std::string sci(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(5) << x;
    return os.str();
}

inline std::string witness_text(const std::vector<std::size_t> &w) {
    if (w.empty()) return "-";
    std::string s = "(";
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? ", " : "") + std::to_string(w[k]);
    return s + ")";
}

inline std::string complex_text(Complex z) {
    std::ostringstream os;
    os << std::showpos << std::scientific << std::setprecision(5) << z.real() << ' ' << z.imag() << 'i';
    return os.str();
}

inline void render_conditions(std::ostream &os, const std::vector<ConditionReport> &reports) {
    for (const ConditionReport &r : reports) {
        os << "  " << std::left << std::setw(22) << to_string(r.condition) << std::setw(6)
           << (r.verdict ? "pass" : "FAIL") << std::right << std::setw(14) << sci(r.violation) << "  witness "
           << witness_text(r.witness);
        if (!r.note.empty()) os << "  [" << r.note << "]";
        os << '\n';
    }
}

inline void render_human(std::ostream &os, const ReportDocument &doc, bool bits) {
    os << "qndsim " << doc.tool_version << "  " << doc.command << "  " << doc.input_digest << '\n';
    os << "tolerance " << sci(doc.tolerance) << '\n';
    for (const std::string &w : doc.warnings) os << "warning: " << w << '\n';
    if (!doc.conditions.empty()) {
        os << "conditions\n";
        render_conditions(os, doc.conditions);
    }
    if (!doc.diagnostics.empty()) {
        os << "diagnostics\n";
        render_conditions(os, doc.diagnostics);
    }
    if (doc.estimation) {
        const EstimationReport &e = *doc.estimation;
        const double info = bits ? nats_to_bits(e.info_nats) : e.info_nats;
        const double floor = bits ? nats_to_bits(e.i_min) : e.i_min;
        const char *unit = bits ? " bits" : " nats";
        os << "estimator     ";
        for (double f : e.estimator.table) os << ' ' << sci(f);
        os << '\n';
        os << "bias           " << sci(e.bias) << '\n';
        os << "squared error  " << sci(e.squared_error) << "  budget " << sci(e.epsilon * e.epsilon) << "  "
           << (e.error_within_budget ? "pass" : "FAIL") << '\n';
        os << "information    " << sci(info) << unit << "  minimum " << sci(floor) << unit << "  "
           << (e.information_sufficient ? "pass" : "FAIL") << '\n';
    }
    if (doc.sampling) {
        const SamplingSummary &s = *doc.sampling;
        os << "samples " << s.n << "  seed " << s.seed << '\n';
        os << "  outcome         count     frequency   probability\n";
        for (std::size_t j = 0; j < s.histogram.size(); ++j) {
            os << "  " << std::setw(7) << j << std::setw(14) << s.histogram[j] << std::setw(14)
               << sci(static_cast<double>(s.histogram[j]) / static_cast<double>(s.n)) << std::setw(14)
               << sci(s.probabilities[j]) << '\n';
        }
    }
    if (doc.search) {
        const SearchSummary &s = *doc.search;
        os << "search target " << s.target << "  restarts " << s.restarts << "  seed " << s.seed << '\n';
        os << "best value " << sci(s.best_value) << '\n';
        os << "best state\n";
        for (std::size_t k = 0; k < s.best_state.size(); ++k) {
            os << "  [" << k << "] " << complex_text(s.best_state[k]) << '\n';
        }
        if (!s.trace.empty()) {
            const auto [lo, hi] = std::minmax_element(s.trace.begin(), s.trace.end());
            os << "restart values min " << sci(*lo) << "  max " << sci(*hi) << '\n';
        }
    }
    if (doc.classification) os << "classification " << *doc.classification << '\n';
}

inline std::string profile_text(const ExpectedProfile &p) {
    std::string s;
    s += p.strong ? 'S' : '-';
    s += p.moderate ? 'M' : '-';
    s += p.weak ? 'W' : '-';
    return s;
}

inline std::string gallery_label(const GalleryRow &r) {
    std::string label = r.name;
    if (r.params.empty()) return label;
    label += "(";
    bool first = true;
    for (const auto &[k, v] : r.params) {
        std::ostringstream val;
        val << v;
        label += (first ? "" : ", ") + k + "=" + val.str();
        first = false;
    }
    return label + ")";
}

inline void render_demo(std::ostream &os, const std::vector<GalleryRow> &rows) {
    std::size_t width = 8;
    for (const GalleryRow &r : rows) width = std::max(width, gallery_label(r).size() + 2);
    const int w = static_cast<int>(width);
    os << std::left << std::setw(w) << "model" << std::setw(10) << "expected" << std::setw(10) << "measured"
       << std::right << std::setw(14) << "strong" << std::setw(14) << "moderate" << std::setw(14) << "weak" << '\n';
    for (const GalleryRow &r : rows) {
        os << std::left << std::setw(w) << gallery_label(r) << std::setw(10) << profile_text(r.expected)
           << std::setw(10) << profile_text(r.measured) << std::right << std::setw(14) << sci(r.strong)
           << std::setw(14) << sci(r.moderate) << std::setw(14) << sci(r.weak)
           << (r.expected == r.measured ? "" : "  MISMATCH") << '\n';
    }
    os << "S strong, M moderate, W weak condition holds\n";
}

inline nlohmann::json demo_json(const std::vector<GalleryRow> &rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const GalleryRow &r : rows) {
        out.push_back({{"name", r.name},
                       {"params", r.params},
                       {"expected", {{"strong", r.expected.strong}, {"moderate", r.expected.moderate},
                                     {"weak", r.expected.weak}}},
                       {"measured", {{"strong", r.measured.strong}, {"moderate", r.measured.moderate},
                                     {"weak", r.measured.weak}}},
                       {"violations", {{"strong", r.strong}, {"moderate", r.moderate}, {"weak", r.weak}}}});
    }
    return out;
}

// ---- argument handling ----

/// Runs one command line (without the program name). Never throws.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum measurement simulator: first-kind and QND condition checks", "qndsim"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string output = "human";
    std::optional<double> tol_flag;
    std::string model_path;

    const auto add_common = [&](CLI::App *sub, bool needs_model) {
        if (needs_model) sub->add_option("model", model_path, "model file (JSON)")->required();
        sub->add_option("--tol", tol_flag, "numerical tolerance (overrides the model file)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--output", output, "report format")->check(CLI::IsMember({"human", "machine"}));
    };

    std::string condition = "all";
    CLI::App *check = app.add_subcommand("check", "run the first-kind condition checks");
    add_common(check, true);
    check->add_option("--condition", condition, "condition to check")
        ->check(CLI::IsMember({"weak", "moderate", "strong", "all"}));

    bool bits = false;
    CLI::App *estimate = app.add_subcommand("estimate", "evaluate the estimator against the error and information budgets");
    add_common(estimate, true);
    estimate->add_flag("--bits", bits, "print information in bits instead of nats");

    std::int64_t samples = 1000;
    std::uint64_t seed = 0;
    CLI::App *simulate = app.add_subcommand("simulate", "sample read-out outcomes");
    add_common(simulate, true);
    simulate->add_option("-n", samples, "number of samples");
    simulate->add_option("--seed", seed, "random seed");

    std::string target = "weak";
    std::size_t restarts = 8;
    CLI::App *search = app.add_subcommand("search", "search for states that break or satisfy a condition");
    add_common(search, true);
    search->add_option("--target", target, "weak: worst system state; moderate, probe: best probe state")
        ->check(CLI::IsMember({"weak", "moderate", "probe"}));
    search->add_option("--restarts", restarts, "number of local-search restarts")->check(CLI::PositiveNumber);
    search->add_option("--seed", seed, "random seed");

    CLI::App *demo = app.add_subcommand("demo", "print the condition table for the builtin model gallery");
    add_common(demo, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitPass;
    } catch (const CLI::CallForVersion &) {
        out << kToolVersion << '\n';
        return kExitPass;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    const bool machine = output == "machine";
    try {
        if (demo->parsed()) {
            const std::vector<GalleryRow> rows = demo_rows(tol_flag.value_or(kDefaultTolerance));
            if (machine) {
                out << demo_json(rows).dump(2) << '\n';
            } else {
                render_demo(out, rows);
            }
            const bool ok = std::all_of(rows.begin(), rows.end(),
                                        [](const GalleryRow &r) { return r.expected == r.measured; });
            return ok ? kExitPass : kExitFail;
        }

        const LoadedModel loaded = load_model_file(model_path);
        const double tol = tol_flag.value_or(loaded.tolerance);
        CommandResult result;
        if (check->parsed()) {
            result = cmd_check(loaded, condition, tol);
        } else if (estimate->parsed()) {
            result = cmd_estimate(loaded, tol);
        } else if (simulate->parsed()) {
            result = cmd_simulate(loaded, samples, seed, tol);
        } else {
            result = cmd_search(loaded, target, restarts, seed, tol);
        }
        if (machine) {
            out << emit_machine(result.report);
        } else {
            render_human(out, result.report, bits);
        }
        return result.exit_code;
    } catch (const ValidationError &e) {
        err << "validation error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InternalConsistencyError &e) {
        err << "internal consistency error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

inline int run(int argc, char **argv, std::ostream &out, std::ostream &err) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
    return run(args, out, err);
}

}  // namespace qnd::cli
