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

// Survey ingestion (JSON, CSV), table normalization, and the JSON / CSV /
// SVG artifacts emitted by the command-line tool.
//
// Input probabilities are always read exactly (decimal text becomes a
// fraction) and normalized in rational arithmetic; float mode converts the
// normalized table afterwards.

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gtr/error.hpp"
#include "gtr/forward.hpp"
#include "gtr/geometry.hpp"
#include "gtr/inverse.hpp"
#include "gtr/population.hpp"
#include "gtr/quantum_tests.hpp"
#include "gtr/scalar.hpp"
#include "gtr/sequence.hpp"
#include "gtr/simulate.hpp"

namespace gtr::io {

using json = nlohmann::ordered_json;

/// 0 success, 2 bad input, 3 infeasible model, 4 broken invariant.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation:
        case ErrorKind::parse:
        case ErrorKind::normalization_refused:
        case ErrorKind::degenerate_table:
            return 2;
        case ErrorKind::degenerate_geometry:
        case ErrorKind::infeasible_geometry:
        case ErrorKind::degenerate_density:
        case ErrorKind::empty_support:
        case ErrorKind::closed_form_invalid:
        case ErrorKind::gauge_infeasible:
            return 3;
        case ErrorKind::invariant:
            return 4;
    }
    return 4;
}

/// 64-bit FNV-1a; stable across platforms, used only to identify inputs.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::validation, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::validation, "cannot write '" + path + "'");
    out << content;
}

// ---------------------------------------------------------------------------
// JSON reading with source positions

/// A parsed document plus its text, so field errors can name a line.
class JsonSource {
public:
    JsonSource(std::string text, std::string name) : text_(std::move(text)), name_(std::move(name)) {
        try {
            doc_ = json::parse(text_);
        } catch (const json::parse_error& e) {
            const auto [line, col] = line_col(e.byte == 0 ? 0 : e.byte - 1);
            fail(ErrorKind::parse, name_ + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                       ": malformed JSON (" + strip_prefix(e.what()) + ")");
        }
    }

    const json& doc() const { return doc_; }
    const std::string& text() const { return text_; }
    const std::string& name() const { return name_; }

    /// Line of the last key of `path`, searching keys in sequence; 0 if not found.
    std::size_t line_of(const std::vector<std::string>& path) const {
        std::size_t pos = 0;
        for (const auto& key : path) {
            if (key.empty() || key.front() == '[') continue;
            const std::string quoted = "\"" + key + "\"";
            auto found = text_.find(quoted, pos);
            while (found != std::string::npos) {
                auto after = text_.find_first_not_of(" \t\r\n", found + quoted.size());
                if (after != std::string::npos && text_[after] == ':') break;
                found = text_.find(quoted, found + 1);
            }
            if (found == std::string::npos) return 0;
            pos = found + quoted.size();
        }
        return line_col(pos).first;
    }

    [[noreturn]] void field_error(const std::vector<std::string>& path, const std::string& what,
                                  ErrorKind kind = ErrorKind::parse) const {
        std::string dotted;
        for (const auto& k : path) {
            if (!dotted.empty() && k.front() != '[') dotted += '.';
            dotted += k;
        }
        const std::size_t line = line_of(path);
        fail(kind, name_ + (line ? ":" + std::to_string(line) : std::string()) + ": field '" + dotted + "': " + what);
    }

    const json& require(const json& obj, const std::vector<std::string>& path) const {
        if (!obj.is_object()) field_error({path.begin(), path.end() - 1}, "expected an object");
        auto it = obj.find(path.back());
        if (it == obj.end()) field_error(path, "missing");
        return *it;
    }

    /// Numbers may be JSON numbers or strings ("0.4899", "1447/3200").
    /// JSON numbers are read through their shortest decimal form.
    Rational number(const json& v, const std::vector<std::string>& path) const {
        try {
            if (v.is_string()) return parse_rational(v.get<std::string>());
            if (v.is_number_unsigned()) return Rational(v.get<std::uint64_t>());
            if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
            if (v.is_number_float()) return rational_from_double(v.get<double>());
        } catch (const Error& e) {
            field_error(path, e.what());
        }
        field_error(path, "expected a number or a numeric string");
    }

    Rational number_at(const json& obj, std::vector<std::string> path) const {
        return number(require(obj, path), path);
    }

private:
    std::pair<std::size_t, std::size_t> line_col(std::size_t offset) const {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return {line, col};
    }

    static std::string strip_prefix(const std::string& what) {
        // "[json.exception.parse_error.101] parse error at line 1, column 5: ..."
        auto colon = what.find(": ");
        return colon == std::string::npos ? what : what.substr(colon + 2);
    }

    std::string text_;
    std::string name_;
    json doc_;
};

// ---------------------------------------------------------------------------
// Survey input and normalization

inline constexpr double kNormalizationWindow = 1e-3;

enum class NormalizationPolicy {
    /// Put the whole deficit on one entry: the one whose probability differs
    /// most from its counterpart in the opposite order (AyBy vs ByAy, AyBn vs
    /// BnAy, AnBy vs ByAn, AnBn vs BnAn).
    largest_residual,
    /// Rescale all four entries by 1/sum.
    proportional,
};

inline std::string_view to_string(NormalizationPolicy p) {
    return p == NormalizationPolicy::largest_residual ? "largest-residual" : "proportional";
}

inline NormalizationPolicy parse_normalization_policy(std::string_view s) {
    if (s == "largest-residual") return NormalizationPolicy::largest_residual;
    if (s == "proportional") return NormalizationPolicy::proportional;
    fail(ErrorKind::validation, "unknown normalization policy '" + std::string(s) + "'");
}

inline std::size_t parse_quad_key(std::string_view key) {
    for (std::size_t i = 0; i < 4; ++i)
        if (key == kQuadKeys[i]) return i;
    fail(ErrorKind::validation, "unknown table entry '" + std::string(key) + "' (want yy, yn, ny or nn)");
}

/// Replaces one entry before any automatic normalization.
struct Correction {
    Order order;
    std::size_t entry;
    Rational value;
};

struct SurveyInput {
    std::string label;
    Quad<Rational> pAB;
    Quad<Rational> pBA;
    std::optional<std::array<std::uint64_t, 4>> countsAB;
    std::optional<std::array<std::uint64_t, 4>> countsBA;
    std::vector<Correction> corrections;
    NormalizationPolicy policy = NormalizationPolicy::largest_residual;
};

struct Adjustment {
    Order order;
    std::size_t entry;
    Rational from;
    Rational to;
};

struct NormalizedTable {
    SeqProbTable<Rational> table;
    std::vector<Adjustment> adjustments;
};

/// Index of the matching event in the opposite order: AyBn <-> BnAy.
inline constexpr std::array<std::size_t, 4> kCrossOrderEntry = {0, 2, 1, 3};

/// Result is exactly unitary. Refuses sums outside 1 +- 1e-3 (checked after
/// explicit corrections, which may legitimately repair a worse table).
inline NormalizedTable normalize_table(const SurveyInput& in) {
    NormalizedTable out{{in.pAB, in.pBA}, {}};
    auto quad = [&](Order o) -> Quad<Rational>& { return o == Order::AB ? out.table.pAB : out.table.pBA; };

    for (const auto& c : in.corrections) {
        Rational& slot = quad(c.order)[c.entry];
        if (slot != c.value) out.adjustments.push_back({c.order, c.entry, slot, c.value});
        slot = c.value;
    }
    for (Order o : {Order::AB, Order::BA}) {
        for (std::size_t i = 0; i < 4; ++i)
            if (quad(o)[i] < 0 || quad(o)[i] > 1)
                fail(ErrorKind::validation, "p" + std::string(to_string(o)) + "." + kQuadKeys[i] +
                                                " = " + format_scalar(quad(o)[i]) + " is not a probability");
        const Rational sum = quad(o).sum();
        if (abs_value(Rational(sum - 1)) > parse_rational("0.001"))
            fail(ErrorKind::normalization_refused, "p" + std::string(to_string(o)) + " sums to " +
                                                       std::to_string(to_double(sum)) + ", outside 1 +- 1e-3");
    }

    for (Order o : {Order::AB, Order::BA}) {
        Quad<Rational>& q = quad(o);
        const Rational deficit = Rational(1) - q.sum();
        if (deficit == 0) continue;
        if (in.policy == NormalizationPolicy::proportional) {
            const Rational scale = Rational(1) / q.sum();
            for (std::size_t i = 0; i < 4; ++i) {
                const Rational before = q[i];
                q[i] *= scale;
                if (q[i] != before) out.adjustments.push_back({o, i, before, q[i]});
            }
            continue;
        }
        const Quad<Rational>& other = o == Order::AB ? out.table.pBA : out.table.pAB;
        std::size_t pick = 0;
        Rational worst = -1;
        for (std::size_t i = 0; i < 4; ++i) {
            const Rational r = abs_value(Rational(q[i] - other[kCrossOrderEntry[i]]));
            if (r > worst) {  // first maximum wins ties
                worst = r;
                pick = i;
            }
        }
        const Rational before = q[pick];
        q[pick] += deficit;
        if (q[pick] < 0 || q[pick] > 1)
            fail(ErrorKind::normalization_refused, "correcting p" + std::string(to_string(o)) + "." +
                                                       kQuadKeys[pick] + " would leave [0, 1]");
        out.adjustments.push_back({o, pick, before, q[pick]});
    }
    out.table.validate();
    return out;
}

template <Scalar T>
SeqProbTable<T> table_as(const SeqProbTable<Rational>& t) {
    SeqProbTable<T> out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.pAB[i] = from_rational<T>(t.pAB[i]);
        out.pBA[i] = from_rational<T>(t.pBA[i]);
    }
    return out;
}

/// Schema:
///   {"label": str,
///    "pAB": {"yy": p, "yn": p, "ny": p, "nn": p}, "pBA": {...},
///    "counts": {"AB": {"yy": n, ...}, "BA": {...}},            optional
///    "corrections": [{"order": "AB", "entry": "nn", "value": p}], optional
///    "normalization": "largest-residual" | "proportional"}       optional
inline SurveyInput parse_survey(const JsonSource& src) {
    const json& doc = src.doc();
    if (!doc.is_object()) src.field_error({}, "top level must be an object");
    SurveyInput in;
    if (auto it = doc.find("label"); it != doc.end()) {
        if (!it->is_string()) src.field_error({"label"}, "expected a string");
        in.label = it->get<std::string>();
    }
    for (const char* order : {"pAB", "pBA"}) {
        const json& q = src.require(doc, {order});
        if (!q.is_object()) src.field_error({order}, "expected an object with yy, yn, ny, nn");
        Quad<Rational>& dst = std::string_view(order) == "pAB" ? in.pAB : in.pBA;
        for (std::size_t i = 0; i < 4; ++i) dst[i] = src.number_at(q, {order, kQuadKeys[i]});
        for (const auto& [key, value] : q.items())
            if (key != "yy" && key != "yn" && key != "ny" && key != "nn")
                src.field_error({order, key}, "unknown entry (want yy, yn, ny or nn)");
    }
    if (auto it = doc.find("counts"); it != doc.end()) {
        for (const char* order : {"AB", "BA"}) {
            auto c = it->find(order);
            if (c == it->end()) continue;
            std::array<std::uint64_t, 4> counts{};
            for (std::size_t i = 0; i < 4; ++i) {
                const json& v = src.require(*c, {"counts", order, kQuadKeys[i]});
                if (!v.is_number_unsigned()) src.field_error({"counts", order, kQuadKeys[i]}, "expected a count");
                counts[i] = v.get<std::uint64_t>();
            }
            (std::string_view(order) == "AB" ? in.countsAB : in.countsBA) = counts;
        }
    }
    if (auto it = doc.find("corrections"); it != doc.end()) {
        if (!it->is_array()) src.field_error({"corrections"}, "expected an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const json& c = (*it)[k];
            const std::string idx = "[" + std::to_string(k) + "]";
            try {
                const json& o = src.require(c, {"corrections", idx, "order"});
                const json& e = src.require(c, {"corrections", idx, "entry"});
                if (!o.is_string() || !e.is_string())
                    src.field_error({"corrections", idx}, "order and entry must be strings");
                in.corrections.push_back({parse_order(o.get<std::string>()), parse_quad_key(e.get<std::string>()),
                                          src.number_at(c, {"corrections", idx, "value"})});
            } catch (const Error& err) {
                if (err.kind() == ErrorKind::parse) throw;
                src.field_error({"corrections", idx}, err.what());
            }
        }
    }
    if (auto it = doc.find("normalization"); it != doc.end()) {
        if (!it->is_string()) src.field_error({"normalization"}, "expected a string");
        try {
            in.policy = parse_normalization_policy(it->get<std::string>());
        } catch (const Error& err) {
            src.field_error({"normalization"}, err.what());
        }
    }
    return in;
}

inline SurveyInput parse_survey_json(std::string text, std::string name = "<input>") {
    return parse_survey(JsonSource(std::move(text), std::move(name)));
}

/// Header "order,yy,yn,ny,nn" then one row per order ("AB", "BA").
inline SurveyInput parse_survey_csv(std::string_view text, std::string label, std::string name = "<input>") {
    SurveyInput in;
    in.label = std::move(label);
    bool seen[2] = {false, false};
    std::size_t line_no = 0;
    bool header = true;
    std::istringstream lines{std::string(text)};
    for (std::string line; std::getline(lines, line);) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream row(line);
        for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
        auto where = name + ":" + std::to_string(line_no) + ": ";
        if (header) {
            if (cells != std::vector<std::string>{"order", "yy", "yn", "ny", "nn"})
                fail(ErrorKind::parse, where + "expected header 'order,yy,yn,ny,nn'");
            header = false;
            continue;
        }
        if (cells.size() != 5) fail(ErrorKind::parse, where + "expected 5 columns");
        Order o;
        try {
            o = parse_order(cells[0]);
        } catch (const Error& e) {
            fail(ErrorKind::parse, where + e.what());
        }
        Quad<Rational>& q = o == Order::AB ? in.pAB : in.pBA;
        for (std::size_t i = 0; i < 4; ++i) {
            try {
                q[i] = parse_rational(cells[i + 1]);
            } catch (const Error& e) {
                fail(ErrorKind::parse, where + "column '" + kQuadKeys[i] + "': " + e.what());
            }
        }
        seen[o == Order::AB ? 0 : 1] = true;
    }
    if (!seen[0] || !seen[1]) fail(ErrorKind::parse, name + ": need one AB row and one BA row");
    return in;
}

inline SurveyInput load_survey(const std::string& path) {
    std::string text = read_file(path);
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
        auto slash = path.find_last_of('/');
        std::string stem = path.substr(slash == std::string::npos ? 0 : slash + 1);
        stem.resize(stem.size() - 4);
        return parse_survey_csv(text, stem, path);
    }
    return parse_survey_json(std::move(text), path);
}

/// Ensemble schema:
///   {"label": str,
///    "angles": {"cosTheta": c, "cosThetaA": c, "cosThetaB": c},
///    "respondents": [{"A": {"epsilon": e, "d": d}, "B": {...},
///                     "weight": w, "policy": "minimal-truncation"}, ...]}
/// Weights are all given or all omitted (uniform).
template <Scalar T>
Ensemble<T> parse_ensemble(const JsonSource& src) {
    const json& doc = src.doc();
    if (!doc.is_object()) src.field_error({}, "top level must be an object");
    Ensemble<T> e;
    const json& a = src.require(doc, {"angles"});
    e.angles = {from_rational<T>(src.number_at(a, {"angles", "cosTheta"})),
                from_rational<T>(src.number_at(a, {"angles", "cosThetaA"})),
                from_rational<T>(src.number_at(a, {"angles", "cosThetaB"}))};
    const json& rs = src.require(doc, {"respondents"});
    if (!rs.is_array() || rs.empty()) src.field_error({"respondents"}, "expected a non-empty array");
    std::size_t weighted = 0;
    for (std::size_t k = 0; k < rs.size(); ++k) {
        const json& r = rs[k];
        const std::string idx = "[" + std::to_string(k) + "]";
        Respondent<T> resp;
        for (const char* q : {"A", "B"}) {
            const json& el = src.require(r, {"respondents", idx, q});
            ElasticParams<T> p{from_rational<T>(src.number_at(el, {"respondents", idx, q, "epsilon"})),
                               from_rational<T>(src.number_at(el, {"respondents", idx, q, "d"}))};
            (std::string_view(q) == "A" ? resp.elasticA : resp.elasticB) = p;
        }
        if (auto w = r.find("weight"); w != r.end()) {
            resp.weight = from_rational<T>(src.number(*w, {"respondents", idx, "weight"}));
            ++weighted;
        }
        if (auto p = r.find("policy"); p != r.end()) {
            try {
                resp.policy = parse_policy(p->get<std::string>());
            } catch (const std::exception& err) {
                src.field_error({"respondents", idx, "policy"}, err.what());
            }
        }
        e.respondents.push_back(resp);
    }
    if (weighted == 0) return Ensemble<T>::uniform(std::move(e.respondents), e.angles);
    if (weighted != rs.size()) src.field_error({"respondents"}, "give a weight for every respondent or for none");
    return e;
}

/// {"label": str, "params": {"epsA", "dA", "epsB", "dB", "cosTheta", "cosThetaA", "cosThetaB"}}
template <Scalar T>
ModelParams<T> parse_params(const JsonSource& src) {
    const json& p = src.require(src.doc(), {"params"});
    auto get = [&](const char* key) { return from_rational<T>(src.number_at(p, {"params", key})); };
    ModelParams<T> m{{get("epsA"), get("dA")}, {get("epsB"), get("dB")},
                     {get("cosTheta"), get("cosThetaA"), get("cosThetaB")}};
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// Serialization

/// Rationals as "num/den" strings, doubles as JSON numbers.
template <Scalar T>
json scalar_json(const T& x) {
    if constexpr (is_exact_v<T>) {
        return format_scalar(x);
    } else {
        return x;
    }
}

template <Scalar T>
json quad_json(const Quad<T>& q) {
    json j = json::object();
    for (std::size_t i = 0; i < 4; ++i) j[kQuadKeys[i]] = scalar_json(q[i]);
    return j;
}

template <Scalar T>
json table_json(const SeqProbTable<T>& t) {
    return {{"pAB", quad_json(t.pAB)}, {"pBA", quad_json(t.pBA)}};
}

template <Scalar T>
json params_json(const ModelParams<T>& m) {
    return {{"epsA", scalar_json(m.epsA())},         {"dA", scalar_json(m.dA())},
            {"epsB", scalar_json(m.epsB())},         {"dB", scalar_json(m.dB())},
            {"cosTheta", scalar_json(m.cosTheta())}, {"cosThetaA", scalar_json(m.cosThetaA())},
            {"cosThetaB", scalar_json(m.cosThetaB())}};
}

template <Scalar T>
json ratios_json(const RatioSet<T>& r) {
    return {{"dA/epsA", scalar_json(r.dA_over_epsA)},
            {"dB/epsB", scalar_json(r.dB_over_epsB)},
            {"cosTheta/epsA", scalar_json(r.cosTheta_over_epsA)},
            {"cosTheta/epsB", scalar_json(r.cosTheta_over_epsB)},
            {"cosThetaA/epsA", scalar_json(r.cosThetaA_over_epsA)},
            {"cosThetaB/epsB", scalar_json(r.cosThetaB_over_epsB)}};
}

template <Scalar T>
json qtest_json(const QTestReport<T>& r) {
    json j{{"q", scalar_json(r.q)}};
    if (r.decomposition) {
        j["decomposition"] = {{"relativeIndeterminism", scalar_json(r.decomposition->relIndeterminism)},
                              {"relativeAsymmetry", scalar_json(r.decomposition->relAsymmetry)}};
    } else {
        j["decomposition"] = nullptr;
    }
    j["q1"] = scalar_json(r.q1);
    j["q2"] = scalar_json(r.q2);
    j["q3"] = scalar_json(r.q3);
    j["percentOfMax"] = {{"q", r.pctOfMax[0]}, {"q1", r.pctOfMax[1]}, {"q2", r.pctOfMax[2]}, {"q3", r.pctOfMax[3]}};
    if constexpr (is_exact_v<T>) {
        j["approx"] = {{"q", to_double(r.q)}, {"q1", to_double(r.q1)}, {"q2", to_double(r.q2)}, {"q3", to_double(r.q3)}};
    }
    return j;
}

inline json sensitivity_json(const SensitivityReport& s) {
    return {{"ok", s.ok()},
            {"cosTheta_in_A", s.cosTheta_in_A},
            {"minusCosTheta_in_A", s.minusCosTheta_in_A},
            {"cosThetaA_in_A", s.cosThetaA_in_A},
            {"cosTheta_in_B", s.cosTheta_in_B},
            {"minusCosTheta_in_B", s.minusCosTheta_in_B},
            {"cosThetaB_in_B", s.cosThetaB_in_B}};
}

inline json vector_json(const UnitVector3& v) { return json::array({v.x1(), v.x2(), v.x3()}); }

inline json adjustments_json(const std::vector<Adjustment>& adj) {
    json j = json::array();
    for (const auto& a : adj)
        j.push_back({{"entry", "p" + std::string(to_string(a.order)) + "." + kQuadKeys[a.entry]},
                     {"from", format_scalar(a.from)},
                     {"to", format_scalar(a.to)}});
    return j;
}

struct Provenance {
    std::string input_hash;
    std::optional<std::string> gauge;
    bool exact = false;
    std::optional<std::uint64_t> seed;
};

inline json provenance_json(const Provenance& p) {
    json j{{"input_hash", "fnv1a64:" + p.input_hash}};
    j["gauge"] = p.gauge ? json(*p.gauge) : json(nullptr);
    j["mode"] = p.exact ? "exact" : "float";
    j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
    return j;
}

/// Tolerance for the fit report's forward-reproduces-input check in float mode.
inline constexpr double kRoundTripTolerance = 1e-12;

/// Full fit report. Throws invariant if the fitted parameters do not
/// reproduce the normalized table.
template <Scalar T>
json run_report(const std::string& label, const NormalizedTable& input, const FitResult<T>& f,
                const Provenance& prov) {
    const auto table = table_as<T>(input.table);
    const auto back = forward(f.params);
    T worst(0);
    for (std::size_t i = 0; i < 4; ++i) {
        worst = std::max(worst, abs_value(T(back.pAB[i] - table.pAB[i])));
        worst = std::max(worst, abs_value(T(back.pBA[i] - table.pBA[i])));
    }
    if (!nearly_equal(worst, T(0), kRoundTripTolerance))
        fail(ErrorKind::invariant, "fitted parameters reproduce the input only to " + format_scalar(worst));

    json j{{"label", label}, {"provenance", provenance_json(prov)}};
    j["normalization"] = adjustments_json(input.adjustments);
    j["table"] = table_json(table);
    j["ratios"] = ratios_json(f.ratios);
    json params{{"approx", params_json(to_double(f.params))}};
    if constexpr (is_exact_v<T>) params["exact"] = params_json(f.params);
    j["params"] = params;
    j["bounds"] = {{"epsA_max", scalar_json(f.epsA_bound)}, {"epsB_max", scalar_json(f.epsB_bound)}};

    json diag{{"sensitivity", sensitivity_json(f.sensitivity)}, {"round_trip_residual", to_double(worst)}};
    const auto qc = quantum_compatibility(f.ratios);
    diag["quantum_compatible"] = qc.compatible;
    diag["quantum_residuals"] = {{"dA/epsA", to_double(qc.dA_residual)},
                                 {"dB/epsB", to_double(qc.dB_residual)},
                                 {"cosTheta/epsA-cosTheta/epsB", to_double(qc.cosTheta_residual)}};
    j["diagnostics"] = diag;

    try {
        const auto frame = reconstruct_state(f.params.angles);
        j["reconstruction"] = {{"psi", vector_json(frame.psi)},
                               {"ay", vector_json(frame.ay)},
                               {"by", vector_json(frame.by)}};
    } catch (const Error& e) {
        j["reconstruction"] = {{"error", e.what()}};
    }
    j["tests"] = qtest_json(quantum_report(table));
    return j;
}

template <Scalar T>
json tree_json(const OutcomeTree<T>& tree) {
    json paths = json::array();
    for (const auto& p : tree.paths) {
        json cond = json::array();
        for (const auto& c : p.conditional) cond.push_back(scalar_json(c));
        paths.push_back({{"path", p.label()},
                         {"probability", scalar_json(p.probability)},
                         {"conditional", cond},
                         {"replicates", p.replicates()}});
    }
    return {{"sequence", tree.sequence}, {"policy", to_string(tree.policy)}, {"paths", paths},
            {"total", scalar_json(tree.total())}};
}

inline json simulation_json(const SimulationCounts& c, const Quad<double>& analytic) {
    const auto f = c.frequencies();
    const auto z = c.z_scores(analytic);
    json rows = json::object();
    double max_z = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        rows[kQuadKeys[i]] = {{"count", c.counts[i]}, {"empirical", f[i]}, {"analytic", analytic[i]}, {"z", z[i]}};
        max_z = std::max(max_z, std::fabs(z[i]));
    }
    return {{"order", to_string(c.order)}, {"trials", c.trials}, {"entries", rows}, {"max_abs_z", max_z}};
}

// ---------------------------------------------------------------------------
// Elastic-band figure

/// One geometric primitive in the plane spanned by a_y and b_y, with a_y
/// along the x axis. Segments use both points; points repeat (x1, y1).
struct FigurePrimitive {
    std::string kind;  // elastic | breakable | anchor | landing | projection
    char elastic;      // 'A' or 'B'
    double x1, y1, x2, y2;
    std::string label;
};

inline std::vector<FigurePrimitive> figure_primitives(const ModelParams<double>& m) {
    m.validate();
    const double c = m.cosTheta();
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double axis[2][2] = {{1.0, 0.0}, {c, s}};
    std::vector<FigurePrimitive> out;
    auto at = [&](int k, double t) { return std::pair{t * axis[k][0] + 0.0, t * axis[k][1] + 0.0}; };  // no -0
    for (int k = 0; k < 2; ++k) {
        const char id = k == 0 ? 'A' : 'B';
        const auto& e = k == 0 ? m.A : m.B;
        const std::string q(1, id);
        auto [yx, yy] = at(k, 1.0);
        auto [nx, ny] = at(k, -1.0);
        out.push_back({"elastic", id, nx, ny, yx, yy, q});
        auto [lx, ly] = at(k, e.lower());
        auto [ux, uy] = at(k, e.upper());
        out.push_back({"breakable", id, lx, ly, ux, uy, "breakable"});
        out.push_back({"anchor", id, yx, yy, yx, yy, q + "y"});
        out.push_back({"anchor", id, nx, ny, nx, ny, q + "n"});
        // psi lands at cos(theta_X); the other elastic's anchors at +-cos(theta)
        const double psi_t = k == 0 ? m.cosThetaA() : m.cosThetaB();
        auto [px, py] = at(k, psi_t);
        out.push_back({"landing", id, px, py, px, py, "psi"});
        const std::string other(1, k == 0 ? 'B' : 'A');
        for (double sign : {1.0, -1.0}) {
            auto [tx, ty] = at(k, sign * c);
            auto [fx, fy] = at(1 - k, sign);
            const std::string from = other + (sign > 0 ? "y" : "n");
            out.push_back({"landing", id, tx, ty, tx, ty, from});
            out.push_back({"projection", id, fx, fy, tx, ty, from});
        }
    }
    return out;
}

inline std::string figure_csv(const std::vector<FigurePrimitive>& prims) {
    std::ostringstream os;
    os.precision(17);
    os << "kind,elastic,x1,y1,x2,y2,label\n";
    for (const auto& p : prims)
        os << p.kind << ',' << p.elastic << ',' << p.x1 << ',' << p.y1 << ',' << p.x2 << ',' << p.y2 << ','
           << p.label << '\n';
    return os.str();
}

/// Standalone SVG drawn only from the primitives.
inline std::string figure_svg(const std::vector<FigurePrimitive>& prims) {
    constexpr double kScale = 160.0;
    constexpr double kSize = 400.0;
    auto X = [&](double x) { return kSize / 2 + kScale * x; };
    auto Y = [&](double y) { return kSize / 2 - kScale * y; };
    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
       << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& p : prims) {
        const char* colour = p.elastic == 'A' ? "#1f4e9c" : "#b0351f";
        if (p.kind == "elastic") {
            os << "<line x1=\"" << X(p.x1) << "\" y1=\"" << Y(p.y1) << "\" x2=\"" << X(p.x2) << "\" y2=\""
               << Y(p.y2) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        } else if (p.kind == "breakable") {
            os << "<line x1=\"" << X(p.x1) << "\" y1=\"" << Y(p.y1) << "\" x2=\"" << X(p.x2) << "\" y2=\""
               << Y(p.y2) << "\" stroke=\"" << colour << "\" stroke-width=\"7\" stroke-opacity=\"0.35\"/>\n";
        } else if (p.kind == "projection") {
            os << "<line x1=\"" << X(p.x1) << "\" y1=\"" << Y(p.y1) << "\" x2=\"" << X(p.x2) << "\" y2=\""
               << Y(p.y2) << "\" stroke=\"grey\" stroke-width=\"0.8\" stroke-dasharray=\"4 3\"/>\n";
        } else if (p.kind == "anchor") {
            os << "<circle cx=\"" << X(p.x1) << "\" cy=\"" << Y(p.y1) << "\" r=\"4\" fill=\"" << colour << "\"/>\n"
               << "<text x=\"" << X(p.x1) + 6 << "\" y=\"" << Y(p.y1) - 6 << "\" font-size=\"12\">" << p.label
               << "</text>\n";
        } else if (p.kind == "landing") {
            const bool psi = p.label == "psi";
            os << "<circle cx=\"" << X(p.x1) << "\" cy=\"" << Y(p.y1) << "\" r=\"" << (psi ? 4 : 2.5)
               << "\" fill=\"" << (psi ? "black" : "white") << "\" stroke=\"black\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace gtr::io
