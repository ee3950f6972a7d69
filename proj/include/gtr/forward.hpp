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

// Outcome probabilities of single and sequential two-outcome measurements.
//
// Convention: the particle lands at x on the elastic; a break at lambda < x
// draws it to the yes anchor, lambda > x to the no anchor. After A gives
// yes the particle sits at a_y and lands on the B elastic at cos(theta);
// after no it sits at a_n and lands at -cos(theta).

#include <array>
#include <string>
#include <utility>

#include "gtr/distributions.hpp"
#include "gtr/error.hpp"
#include "gtr/geometry.hpp"
#include "gtr/scalar.hpp"

namespace gtr {

inline constexpr double kUnitarityTolerance = 1e-9;

/// Joint outcome probabilities in measurement order: yy, yn, ny, nn.
/// For the BA order, "yn" means B yes then A no.
template <Scalar T>
struct Quad {
    T yy{};
    T yn{};
    T ny{};
    T nn{};

    T sum() const { return yy + yn + ny + nn; }
    std::array<T, 4> values() const { return {yy, yn, ny, nn}; }
    T& operator[](std::size_t i) { return i == 0 ? yy : i == 1 ? yn : i == 2 ? ny : nn; }
    const T& operator[](std::size_t i) const { return i == 0 ? yy : i == 1 ? yn : i == 2 ? ny : nn; }

    friend bool operator==(const Quad&, const Quad&) = default;
};

inline constexpr std::array<const char*, 4> kQuadKeys = {"yy", "yn", "ny", "nn"};

template <Scalar T>
struct SeqProbTable {
    Quad<T> pAB;
    Quad<T> pBA;

    /// Each quadruple non-negative and summing to one (exactly in rational mode).
    void validate() const {
        for (const Quad<T>* q : {&pAB, &pBA}) {
            for (std::size_t i = 0; i < 4; ++i) {
                if ((*q)[i] < T(0) || (*q)[i] > T(1))
                    fail(ErrorKind::validation, "probability outside [0, 1]: " + format_scalar((*q)[i]));
            }
            if (!nearly_equal(q->sum(), T(1), kUnitarityTolerance))
                fail(ErrorKind::validation, "quadruple does not sum to 1: " + format_scalar(q->sum()));
        }
    }

    friend bool operator==(const SeqProbTable&, const SeqProbTable&) = default;
};

template <Scalar T>
SeqProbTable<double> to_double(const SeqProbTable<T>& t) {
    SeqProbTable<double> out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.pAB[i] = to_double(t.pAB[i]);
        out.pBA[i] = to_double(t.pBA[i]);
    }
    return out;
}

/// The seven scalars of a fitted two-measurement model.
template <Scalar T>
struct ModelParams {
    ElasticParams<T> A;
    ElasticParams<T> B;
    AngleTriple<T> angles;

    const T& epsA() const { return A.epsilon; }
    const T& dA() const { return A.d; }
    const T& epsB() const { return B.epsilon; }
    const T& dB() const { return B.d; }
    const T& cosTheta() const { return angles.cosTheta; }
    const T& cosThetaA() const { return angles.cosThetaA; }
    const T& cosThetaB() const { return angles.cosThetaB; }

    void validate() const {
        A.validate();
        B.validate();
        angles.validate();
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

template <Scalar T>
ModelParams<double> to_double(const ModelParams<T>& m) {
    return {{to_double(m.epsA()), to_double(m.dA())},
            {to_double(m.epsB()), to_double(m.dB())},
            {to_double(m.cosTheta()), to_double(m.cosThetaA()), to_double(m.cosThetaB())}};
}

template <Scalar T>
ModelParams<T> quantum_params(const AngleTriple<T>& angles) {
    return {ElasticParams<T>::globally_uniform(), ElasticParams<T>::globally_uniform(), angles};
}

/// Which landing points fall inside the breakable regions. The second
/// question lands at +cos(theta) after a yes and at -cos(theta) after a no;
/// the closed form needs both inside, or its linear pieces leave [0, 1].
struct SensitivityReport {
    bool cosTheta_in_A = true;
    bool minusCosTheta_in_A = true;
    bool cosThetaA_in_A = true;
    bool cosTheta_in_B = true;
    bool minusCosTheta_in_B = true;
    bool cosThetaB_in_B = true;

    bool ok() const {
        return cosTheta_in_A && minusCosTheta_in_A && cosThetaA_in_A && cosTheta_in_B && minusCosTheta_in_B &&
               cosThetaB_in_B;
    }

    std::string describe() const {
        if (ok()) return "all landing points inside the breakable regions";
        std::string s;
        auto add = [&](bool good, const char* what) {
            if (!good) s += (s.empty() ? "" : "; ") + std::string(what);
        };
        add(cosTheta_in_A, "cos(theta) outside A's breakable region");
        add(minusCosTheta_in_A, "-cos(theta) outside A's breakable region");
        add(cosThetaA_in_A, "cos(theta_A) outside A's breakable region");
        add(cosTheta_in_B, "cos(theta) outside B's breakable region");
        add(minusCosTheta_in_B, "-cos(theta) outside B's breakable region");
        add(cosThetaB_in_B, "cos(theta_B) outside B's breakable region");
        return s;
    }
};

template <Scalar T>
SensitivityReport check_sensitivity(const ModelParams<T>& m, double tol = kMassTolerance) {
    auto inside = [tol](const T& x, const ElasticParams<T>& e) {
        return leq_tol(e.lower(), x, tol) && leq_tol(x, e.upper(), tol);
    };
    const T minus = -m.cosTheta();
    return {inside(m.cosTheta(), m.A), inside(minus, m.A), inside(m.cosThetaA(), m.A),
            inside(m.cosTheta(), m.B), inside(minus, m.B), inside(m.cosThetaB(), m.B)};
}

template <Scalar T>
struct OutcomePair {
    T pYes;
    T pNo;
};

template <Scalar T>
OutcomePair<T> single_outcome_prob(const BreakDensity<T>& rho, const T& landing) {
    if (landing < T(-1) || landing > T(1))
        fail(ErrorKind::validation, "landing point outside [-1, 1]: " + format_scalar(landing));
    T yes = cdf(rho, landing);
    return {yes, T(1) - yes};
}

/// Explicit solution under weak compatibility, local uniformity and
/// sensitivity. Throws closed_form_invalid if sensitivity does not hold.
template <Scalar T>
SeqProbTable<T> sequential_probs_closed_form(const ModelParams<T>& m) {
    m.validate();
    if (auto s = check_sensitivity(m); !s.ok()) fail(ErrorKind::closed_form_invalid, s.describe());

    const T& eA = m.epsA();
    const T& eB = m.epsB();
    const T& c = m.cosTheta();
    const T uA = (m.cosThetaA() - m.dA()) / eA;  // 2 P(Ay) - 1
    const T uB = (m.cosThetaB() - m.dB()) / eB;  // 2 P(By) - 1
    const T quarter = T(1) / T(4);

    SeqProbTable<T> t;
    // B after A lands at +c (from a_y) or -c (from a_n)
    t.pAB.yy = quarter * (T(1) + (c - m.dB()) / eB) * (T(1) + uA);
    t.pAB.yn = quarter * (T(1) - (c - m.dB()) / eB) * (T(1) + uA);
    t.pAB.ny = quarter * (T(1) - (c + m.dB()) / eB) * (T(1) - uA);
    t.pAB.nn = quarter * (T(1) + (c + m.dB()) / eB) * (T(1) - uA);

    t.pBA.yy = quarter * (T(1) + (c - m.dA()) / eA) * (T(1) + uB);
    t.pBA.yn = quarter * (T(1) - (c - m.dA()) / eA) * (T(1) + uB);
    t.pBA.ny = quarter * (T(1) - (c + m.dA()) / eA) * (T(1) - uB);
    t.pBA.nn = quarter * (T(1) + (c + m.dA()) / eA) * (T(1) - uB);
    return t;
}

/// One order of the sequential measurement with arbitrary densities for the
/// first and second elastic.
template <Scalar T>
Quad<T> sequential_quad_integral(const BreakDensity<T>& first, const BreakDensity<T>& second,
                                 const T& firstLanding, const T& cosTheta) {
    const auto p1 = single_outcome_prob(first, firstLanding);
    const auto afterYes = single_outcome_prob(second, cosTheta);
    const auto afterNo = single_outcome_prob(second, T(-cosTheta));
    return {afterYes.pYes * p1.pYes, afterYes.pNo * p1.pYes, afterNo.pYes * p1.pNo, afterNo.pNo * p1.pNo};
}

/// Integral form valid for any densities; weak compatibility makes each
/// density independent of which measurement ran first.
template <Scalar T>
SeqProbTable<T> sequential_probs_integral(const BreakDensity<T>& rhoA, const BreakDensity<T>& rhoB,
                                          const AngleTriple<T>& angles) {
    angles.validate();
    return {sequential_quad_integral(rhoA, rhoB, angles.cosThetaA, angles.cosTheta),
            sequential_quad_integral(rhoB, rhoA, angles.cosThetaB, angles.cosTheta)};
}

template <Scalar T>
SeqProbTable<T> sequential_probs_integral(const ModelParams<T>& m) {
    return sequential_probs_integral(locally_uniform(m.A), locally_uniform(m.B), m.angles);
}

/// Closed form where it applies, integral path otherwise.
template <Scalar T>
SeqProbTable<T> forward(const ModelParams<T>& m) {
    m.validate();
    if (check_sensitivity(m).ok()) return sequential_probs_closed_form(m);
    return sequential_probs_integral(m);
}

}  // namespace gtr
