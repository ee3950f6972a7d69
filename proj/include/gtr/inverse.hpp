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

// Closed-form inversion of the sequential table.
//
// The eight probabilities fix six scale-free ratios; one scale (the gauge)
// is free. Picking eps_A, eps_B or cos(theta) determines the rest.

#include <string>
#include <string_view>
#include <utility>

#include "gtr/error.hpp"
#include "gtr/forward.hpp"
#include "gtr/scalar.hpp"

namespace gtr {

template <Scalar T>
struct RatioSet {
    T dB_over_epsB;
    T cosTheta_over_epsB;
    T dA_over_epsA;
    T cosTheta_over_epsA;
    T cosThetaA_over_epsA;
    T cosThetaB_over_epsB;

    friend bool operator==(const RatioSet&, const RatioSet&) = default;
};

/// Solves the AB quadruple for the B ratios and the BA quadruple for the A
/// ratios. All four first-measurement marginals must be non-zero.
template <Scalar T>
RatioSet<T> extract_ratios(const SeqProbTable<T>& t) {
    t.validate();
    const T abY = t.pAB.yy + t.pAB.yn;  // P(Ay)
    const T abN = t.pAB.ny + t.pAB.nn;  // P(An)
    const T baY = t.pBA.yy + t.pBA.yn;  // P(By)
    const T baN = t.pBA.ny + t.pBA.nn;  // P(Bn)
    if (!(abY > T(0)) || !(abN > T(0)) || !(baY > T(0)) || !(baN > T(0)))
        fail(ErrorKind::degenerate_table, "a first-measurement outcome has probability 0");

    const T half = T(1) / T(2);
    // bias of the second answer after a yes / after a no on the first question
    const T afterAy = (t.pAB.yy - t.pAB.yn) / abY;
    const T afterAn = (t.pAB.nn - t.pAB.ny) / abN;
    const T afterBy = (t.pBA.yy - t.pBA.yn) / baY;
    const T afterBn = (t.pBA.nn - t.pBA.ny) / baN;

    RatioSet<T> r;
    r.cosTheta_over_epsB = half * (afterAn + afterAy);
    r.dB_over_epsB = half * (afterAn - afterAy);
    r.cosTheta_over_epsA = half * (afterBn + afterBy);
    r.dA_over_epsA = half * (afterBn - afterBy);
    r.cosThetaA_over_epsA = (T(2) * abY - T(1)) + r.dA_over_epsA;
    r.cosThetaB_over_epsB = (T(2) * baY - T(1)) + r.dB_over_epsB;
    return r;
}

template <Scalar T>
struct Gauge {
    enum class Kind { epsilonA, epsilonB, cosTheta };
    Kind kind;
    T value;

    static Gauge epsilonA(T v) { return {Kind::epsilonA, std::move(v)}; }
    static Gauge epsilonB(T v) { return {Kind::epsilonB, std::move(v)}; }
    static Gauge cosTheta(T v) { return {Kind::cosTheta, std::move(v)}; }

    std::string describe() const {
        const char* name = kind == Kind::epsilonA ? "eps-a" : kind == Kind::epsilonB ? "eps-b" : "cos-theta";
        return std::string(name) + "=" + format_scalar(value);
    }
};

/// Parses "eps-a=<v>", "eps-b=<v>" or "cos-theta=<v>".
template <Scalar T>
Gauge<T> parse_gauge(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail(ErrorKind::validation, "gauge must look like eps-a=<value>");
    const auto key = text.substr(0, eq);
    const T v = scalar_from_text<T>(text.substr(eq + 1));
    if (key == "eps-a") return Gauge<T>::epsilonA(v);
    if (key == "eps-b") return Gauge<T>::epsilonB(v);
    if (key == "cos-theta") return Gauge<T>::cosTheta(v);
    fail(ErrorKind::validation, "unknown gauge '" + std::string(key) + "'");
}

/// Largest admissible eps: the breakable region [d - eps, d + eps] must stay
/// inside [-1, 1], i.e. eps (1 + |d/eps|) <= 1.
template <Scalar T>
T epsilon_bound(const T& d_over_eps) {
    return T(1) / (T(1) + abs_value(d_over_eps));
}

template <Scalar T>
struct FitResult {
    ModelParams<T> params;
    RatioSet<T> ratios;
    SensitivityReport sensitivity;
    T epsA_bound;
    T epsB_bound;
};

template <Scalar T>
FitResult<T> resolve(const RatioSet<T>& r, const Gauge<T>& g) {
    const T boundA = epsilon_bound(r.dA_over_epsA);
    const T boundB = epsilon_bound(r.dB_over_epsB);
    T eA{};
    T eB{};
    T c{};
    switch (g.kind) {
        case Gauge<T>::Kind::epsilonA:
            eA = g.value;
            c = r.cosTheta_over_epsA * eA;
            if (r.cosTheta_over_epsB == T(0))
                fail(ErrorKind::gauge_infeasible, "cos(theta) = 0: an eps-a gauge leaves eps_B undetermined");
            eB = c / r.cosTheta_over_epsB;
            break;
        case Gauge<T>::Kind::epsilonB:
            eB = g.value;
            c = r.cosTheta_over_epsB * eB;
            if (r.cosTheta_over_epsA == T(0))
                fail(ErrorKind::gauge_infeasible, "cos(theta) = 0: an eps-b gauge leaves eps_A undetermined");
            eA = c / r.cosTheta_over_epsA;
            break;
        case Gauge<T>::Kind::cosTheta:
            c = g.value;
            if (r.cosTheta_over_epsA == T(0) || r.cosTheta_over_epsB == T(0))
                fail(ErrorKind::gauge_infeasible, "the table forces cos(theta) = 0; use an eps gauge");
            eA = c / r.cosTheta_over_epsA;
            eB = c / r.cosTheta_over_epsB;
            break;
    }

    auto check_eps = [](const T& e, const T& bound, const char* name) {
        if (!(e > T(0)) || !leq_tol(e, bound, kMassTolerance)) {
            fail(ErrorKind::gauge_infeasible, std::string(name) + " = " + format_scalar(e) +
                                                  " outside (0, " + format_scalar(bound) + "] (~" +
                                                  std::to_string(to_double(bound)) + ")");
        }
    };
    check_eps(eA, boundA, "eps_A");
    check_eps(eB, boundB, "eps_B");

    FitResult<T> out{
        ModelParams<T>{{eA, r.dA_over_epsA * eA},
                       {eB, r.dB_over_epsB * eB},
                       {c, r.cosThetaA_over_epsA * eA, r.cosThetaB_over_epsB * eB}},
        r, {}, boundA, boundB};
    const auto& a = out.params.angles;
    for (const T* v : {&a.cosTheta, &a.cosThetaA, &a.cosThetaB})
        if (*v < T(-1) || *v > T(1))
            fail(ErrorKind::gauge_infeasible, "gauge " + g.describe() + " gives a cosine outside [-1, 1]");
    out.sensitivity = check_sensitivity(out.params);
    return out;
}

template <Scalar T>
FitResult<T> fit(const SeqProbTable<T>& t, const Gauge<T>& g) {
    return resolve(extract_ratios(t), g);
}

template <Scalar T>
struct QuantumCompatibility {
    bool compatible;
    T dA_residual;        // d_A / eps_A
    T dB_residual;        // d_B / eps_B
    T cosTheta_residual;  // cos/eps_A - cos/eps_B
};

/// A Born-rule model needs both elastics globally uniform: both d ratios
/// zero and equal cos(theta) ratios.
template <Scalar T>
QuantumCompatibility<T> quantum_compatibility(const RatioSet<T>& r, double tol = 1e-9) {
    QuantumCompatibility<T> q{false, r.dA_over_epsA, r.dB_over_epsB, r.cosTheta_over_epsA - r.cosTheta_over_epsB};
    q.compatible = nearly_equal(q.dA_residual, T(0), tol) && nearly_equal(q.dB_residual, T(0), tol) &&
                   nearly_equal(q.cosTheta_residual, T(0), tol);
    return q;
}

}  // namespace gtr
