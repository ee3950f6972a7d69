// Copyright 2026 The GTR Model Authors
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

#pragma once

// The `gtr` command-line tool. Kept in a header so tests can run commands
// in-process and inspect output streams and exit codes.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gtr/gtr.hpp"
#include "gtr/io.hpp"

namespace gtr::cli {

using io::json;

struct Options {
    std::string input;
    std::string gauge;
    bool exact = false;
    std::uint64_t seed = 0;
    std::uint64_t trials = 1000000;
    unsigned streams = 1;
    std::string out;
    std::string format = "json";
    std::string normalization;

    std::string sequence = "ABA";
    std::string policy = "minimal-truncation";
    std::optional<double> cCosA;
    std::optional<double> cCosB;
    std::optional<double> cCosPsi;
    double cEpsilon = 1.0;
    double cD = 0.0;
    bool cNonDisruptive = false;
};

/// What a command produced: a document and its file extension.
struct Artifact {
    std::string content;
    std::string ext;
};

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <Scalar T>
struct LoadedModel {
    std::string label;
    ModelParams<T> params;
    io::Provenance provenance;
};

inline std::string label_or(const std::string& label, const std::string& path) {
    if (!label.empty()) return label;
    auto slash = path.find_last_of('/');
    return path.substr(slash == std::string::npos ? 0 : slash + 1);
}

inline std::string require_input(const Options& o) {
    if (o.input.empty()) fail(ErrorKind::validation, "--input is required");
    return o.input;
}

/// Survey file + gauge, or a file with an explicit "params" object.
struct Survey {
    io::SurveyInput raw;
    io::NormalizedTable normalized;
    std::string hash;
};

inline Survey load_survey(const Options& o) {
    const std::string path = require_input(o);
    Survey s{io::load_survey(path), {}, io::hex64(io::fnv1a64(io::read_file(path)))};
    if (!o.normalization.empty()) s.raw.policy = io::parse_normalization_policy(o.normalization);
    s.raw.label = label_or(s.raw.label, path);
    s.normalized = io::normalize_table(s.raw);
    return s;
}

template <Scalar T>
Gauge<T> require_gauge(const Options& o) {
    if (o.gauge.empty()) fail(ErrorKind::validation, "--gauge is required to fit a survey (e.g. --gauge eps-a=0.5)");
    return parse_gauge<T>(o.gauge);
}

template <Scalar T>
LoadedModel<T> load_model(const Options& o) {
    const std::string path = require_input(o);
    const std::string text = io::read_file(path);
    const std::string hash = io::hex64(io::fnv1a64(text));
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    if (!csv) {
        io::JsonSource src(text, path);
        if (src.doc().is_object() && src.doc().contains("params")) {
            std::string label = src.doc().value("label", std::string());
            return {label_or(label, path), io::parse_params<T>(src), {hash, std::nullopt, is_exact_v<T>, std::nullopt}};
        }
    }
    const Survey s = load_survey(o);
    const auto g = require_gauge<T>(o);
    auto f = fit(io::table_as<T>(s.normalized.table), g);
    return {s.raw.label, f.params, {hash, g.describe(), is_exact_v<T>, std::nullopt}};
}

inline std::string csv_rows(const std::vector<std::pair<std::string, std::string>>& rows, const char* header) {
    std::string s = std::string(header) + "\n";
    for (const auto& [k, v] : rows) s += k + "," + v + "\n";
    return s;
}

template <Scalar T>
void params_rows(std::vector<std::pair<std::string, std::string>>& rows, const ModelParams<T>& m) {
    const std::pair<const char*, const T*> fields[] = {
        {"epsA", &m.epsA()},         {"dA", &m.dA()},
        {"epsB", &m.epsB()},         {"dB", &m.dB()},
        {"cosTheta", &m.cosTheta()}, {"cosThetaA", &m.cosThetaA()},
        {"cosThetaB", &m.cosThetaB()}};
    for (const auto& [k, v] : fields) rows.emplace_back(k, format_scalar(*v));
}

template <Scalar T>
void table_rows(std::vector<std::pair<std::string, std::string>>& rows, const SeqProbTable<T>& t) {
    for (std::size_t i = 0; i < 4; ++i) rows.emplace_back(std::string("pAB.") + kQuadKeys[i], format_scalar(t.pAB[i]));
    for (std::size_t i = 0; i < 4; ++i) rows.emplace_back(std::string("pBA.") + kQuadKeys[i], format_scalar(t.pBA[i]));
}

template <Scalar T>
Artifact cmd_fit(const Options& o) {
    const Survey s = load_survey(o);
    const auto g = require_gauge<T>(o);
    const auto f = fit(io::table_as<T>(s.normalized.table), g);
    if (o.format == "csv") {
        std::vector<std::pair<std::string, std::string>> rows;
        params_rows(rows, f.params);
        return {csv_rows(rows, "quantity,value"), "csv"};
    }
    return {dump(io::run_report<T>(s.raw.label, s.normalized, f, {s.hash, g.describe(), is_exact_v<T>, std::nullopt})),
            "json"};
}

template <Scalar T>
Artifact cmd_tests(const Options& o) {
    const Survey s = load_survey(o);
    const auto table = io::table_as<T>(s.normalized.table);
    const auto r = quantum_report(table);
    if (o.format == "csv") {
        std::vector<std::pair<std::string, std::string>> rows{{"q", format_scalar(r.q)},
                                                              {"q1", format_scalar(r.q1)},
                                                              {"q2", format_scalar(r.q2)},
                                                              {"q3", format_scalar(r.q3)}};
        if (r.decomposition) {
            rows.emplace_back("relativeIndeterminism", format_scalar(r.decomposition->relIndeterminism));
            rows.emplace_back("relativeAsymmetry", format_scalar(r.decomposition->relAsymmetry));
        }
        return {csv_rows(rows, "quantity,value"), "csv"};
    }
    json j{{"label", s.raw.label},
           {"provenance", io::provenance_json({s.hash, std::nullopt, is_exact_v<T>, std::nullopt})},
           {"normalization", io::adjustments_json(s.normalized.adjustments)},
           {"table", io::table_json(table)},
           {"tests", io::qtest_json(r)}};
    return {dump(j), "json"};
}

inline Artifact cmd_simulate(const Options& o) {
    // sampling runs in floating point; --exact only changes how the fit is done
    LoadedModel<double> m;
    if (o.exact) {
        auto exact = load_model<Rational>(o);
        m = {exact.label, to_double(exact.params), exact.provenance};
    } else {
        m = load_model<double>(o);
    }
    m.provenance.seed = o.seed;
    const auto analytic = forward(m.params);
    const auto ab = simulate(m.params, Order::AB, o.trials, o.seed, o.streams);
    const auto ba = simulate(m.params, Order::BA, o.trials, o.seed, o.streams);
    if (o.format == "csv") {
        std::ostringstream os;
        os.precision(17);
        os << "order,entry,count,empirical,analytic,z\n";
        for (const auto* c : {&ab, &ba}) {
            const auto& q = c->order == Order::AB ? analytic.pAB : analytic.pBA;
            const auto f = c->frequencies();
            const auto z = c->z_scores(q);
            for (std::size_t i = 0; i < 4; ++i)
                os << to_string(c->order) << ',' << kQuadKeys[i] << ',' << c->counts[i] << ',' << f[i] << ','
                   << q[i] << ',' << z[i] << '\n';
        }
        return {os.str(), "csv"};
    }
    json j{{"label", m.label},
           {"provenance", io::provenance_json(m.provenance)},
           {"params", io::params_json(m.params)},
           {"streams", o.streams},
           {"orders", json::array({io::simulation_json(ab, analytic.pAB), io::simulation_json(ba, analytic.pBA)})}};
    return {dump(j), "json"};
}

template <Scalar T>
std::optional<CAxis<T>> c_axis(const Options& o) {
    if (!o.cCosA && !o.cCosB && !o.cCosPsi) return std::nullopt;
    if (!o.cCosA || !o.cCosB || !o.cCosPsi)
        fail(ErrorKind::validation, "a C axis needs --c-cos-a, --c-cos-b and --c-cos-psi");
    CAxis<T> c;
    c.elastic = {scalar_from_double<T>(o.cEpsilon), scalar_from_double<T>(o.cD)};
    c.cosWithA = scalar_from_double<T>(*o.cCosA);
    c.cosWithB = scalar_from_double<T>(*o.cCosB);
    c.cosWithPsi = scalar_from_double<T>(*o.cCosPsi);
    c.disruptive = !o.cNonDisruptive;
    return c;
}

template <Scalar T>
Artifact cmd_replicate(const Options& o) {
    const auto m = load_model<T>(o);
    const auto tree = run_sequence(o.sequence, m.params, parse_policy(o.policy), c_axis<T>(o));
    if (o.format == "csv") {
        std::vector<std::pair<std::string, std::string>> rows;
        for (const auto& p : tree.paths) rows.emplace_back(p.label(), format_scalar(p.probability));
        return {csv_rows(rows, "path,probability"), "csv"};
    }
    json j{{"label", m.label}, {"provenance", io::provenance_json(m.provenance)}, {"params", io::params_json(m.params)}};
    j["tree"] = io::tree_json(tree);
    return {dump(j), "json"};
}

template <Scalar T>
Artifact cmd_average(const Options& o) {
    const std::string path = require_input(o);
    const std::string text = io::read_file(path);
    io::JsonSource src(text, path);
    const auto e = io::parse_ensemble<T>(src);
    const std::string label = label_or(src.doc().value("label", std::string()), path);
    // default gauge: the shared cos(theta) of the ensemble
    const auto g = o.gauge.empty() ? Gauge<T>::cosTheta(e.angles.cosTheta) : parse_gauge<T>(o.gauge);
    const auto avg = averaged_table(e);
    const auto refit = fit(avg.table, g);

    if (o.format == "csv") {
        std::vector<std::pair<std::string, std::string>> rows;
        table_rows(rows, avg.table);
        params_rows(rows, refit.params);
        return {csv_rows(rows, "quantity,value"), "csv"};
    }
    json respondents = json::array();
    for (std::size_t i = 0; i < e.respondents.size(); ++i)
        respondents.push_back({{"weight", io::scalar_json(e.respondents[i].weight)},
                               {"table", io::table_json(forward(e.params_of(i)))}});
    json flagged = json::array();
    for (auto i : avg.insensitive) flagged.push_back(i);
    json params{{"approx", io::params_json(to_double(refit.params))}};
    if constexpr (is_exact_v<T>) params["exact"] = io::params_json(refit.params);
    json j{{"label", label},
           {"provenance", io::provenance_json({io::hex64(io::fnv1a64(text)), g.describe(), is_exact_v<T>, std::nullopt})},
           {"respondents", respondents},
           {"insensitive_respondents", flagged},
           {"table", io::table_json(avg.table)},
           {"effective_params", params},
           {"effective_sensitivity", io::sensitivity_json(refit.sensitivity)},
           {"symmetric_form_residual", io::scalar_json(symmetric_form_residual(refit.ratios))},
           {"tests", io::qtest_json(quantum_report(avg.table))}};
    return {dump(j), "json"};
}

/// Output path for a command: --out, else $GTR_OUTPUT_DIR/<command>.<ext>,
/// else standard output (empty string).
inline std::string output_path(const Options& o, const std::string& command, const std::string& ext) {
    if (!o.out.empty()) return o.out;
    if (const char* dir = std::getenv("GTR_OUTPUT_DIR"); dir && *dir) return std::string(dir) + "/" + command + "." + ext;
    return {};
}

inline int cmd_figure(const Options& o, std::ostream& out) {
    const auto m = o.exact ? to_double(load_model<Rational>(o).params) : load_model<double>(o).params;
    const auto prims = io::figure_primitives(m);
    std::string prefix = o.out;
    if (prefix.empty()) {
        const char* dir = std::getenv("GTR_OUTPUT_DIR");
        prefix = (dir && *dir) ? std::string(dir) + "/figure" : std::string("figure");
    }
    io::write_file(prefix + ".csv", io::figure_csv(prims));
    io::write_file(prefix + ".svg", io::figure_svg(prims));
    out << prefix << ".csv\n" << prefix << ".svg\n";
    return 0;
}

/// Runs one command line. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sequential two-question measurements on elastic bands: fit, test, simulate."};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool gauge) {
        sub->add_option("--input", o.input, "input file (JSON; CSV for survey tables)")->required();
        if (gauge) sub->add_option("--gauge", o.gauge, "eps-a=<v>, eps-b=<v> or cos-theta=<v>");
        sub->add_flag("--exact", o.exact, "rational arithmetic");
        sub->add_option("--out", o.out, "output file (default: $GTR_OUTPUT_DIR or stdout)");
        sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--normalization", o.normalization, "largest-residual or proportional");
    };
    auto* fit_cmd = app.add_subcommand("fit", "fit model parameters to a survey table");
    common(fit_cmd, true);
    auto* tests_cmd = app.add_subcommand("tests", "parameter-free quantum equalities of a survey table");
    common(tests_cmd, false);
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo runs of the fitted model");
    common(sim_cmd, true);
    sim_cmd->add_option("--seed", o.seed, "random seed");
    sim_cmd->add_option("--trials", o.trials, "trials per order")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--streams", o.streams, "independent random streams (threads)")->check(CLI::PositiveNumber);
    auto* rep_cmd = app.add_subcommand("replicate", "outcome tree of a measurement sequence");
    common(rep_cmd, true);
    rep_cmd->add_option("--sequence", o.sequence, "measurement ids, e.g. ABA or ABCA");
    rep_cmd->add_option("--policy", o.policy, "none, minimal-truncation or dirac-pinning");
    rep_cmd->add_option("--c-cos-a", o.cCosA, "C axis: c_y . a_y");
    rep_cmd->add_option("--c-cos-b", o.cCosB, "C axis: c_y . b_y");
    rep_cmd->add_option("--c-cos-psi", o.cCosPsi, "C axis: c_y . x_psi");
    rep_cmd->add_option("--c-eps", o.cEpsilon, "C elastic half-width");
    rep_cmd->add_option("--c-d", o.cD, "C elastic centre");
    rep_cmd->add_flag("--c-nondisruptive", o.cNonDisruptive, "a yes on C also truncates earlier elastics");
    auto* avg_cmd = app.add_subcommand("average", "ensemble average and effective refit");
    common(avg_cmd, true);
    auto* fig_cmd = app.add_subcommand("figure", "elastic-band geometry as CSV and SVG");
    common(fig_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        Artifact a;
        std::string name;
        if (*fit_cmd) {
            name = "fit";
            a = o.exact ? cmd_fit<Rational>(o) : cmd_fit<double>(o);
        } else if (*tests_cmd) {
            name = "tests";
            a = o.exact ? cmd_tests<Rational>(o) : cmd_tests<double>(o);
        } else if (*sim_cmd) {
            name = "simulate";
            a = cmd_simulate(o);
        } else if (*rep_cmd) {
            name = "replicate";
            a = o.exact ? cmd_replicate<Rational>(o) : cmd_replicate<double>(o);
        } else if (*avg_cmd) {
            name = "average";
            a = o.exact ? cmd_average<Rational>(o) : cmd_average<double>(o);
        } else {
            return cmd_figure(o, out);
        }
        const std::string path = output_path(o, name, a.ext);
        if (path.empty()) {
            out << a.content;
        } else {
            io::write_file(path, a.content);
        }
        return 0;
    } catch (const Error& e) {
        err << "gtr: " << e.what() << "\n";
        return io::exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "gtr: internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace gtr::cli
