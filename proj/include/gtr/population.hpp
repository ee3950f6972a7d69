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

// Ensembles of respondents. All respondents share the state and the axes;
// each has its own pair of elastics. Survey statistics are the weighted
// average of the individual tables.

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gtr/error.hpp"
#include "gtr/forward.hpp"
#include "gtr/inverse.hpp"
#include "gtr/scalar.hpp"
#include "gtr/sequence.hpp"

namespace gtr {

template <Scalar T>
struct Respondent {
    ElasticParams<T> elasticA;
    ElasticParams<T> elasticB;
    T weight{};
    UpdatePolicy policy = UpdatePolicy::minimal_truncation;
};

template <Scalar T>
struct Ensemble {
    std::vector<Respondent<T>> respondents;
    AngleTriple<T> angles;

    /// Same elastics, weights 1/n.
    static Ensemble uniform(std::vector<Respondent<T>> rs, const AngleTriple<T>& angles) {
        if (rs.empty()) fail(ErrorKind::validation, "ensemble needs at least one respondent");
        const T w = T(1) / T(static_cast<long>(rs.size()));
        for (auto& r : rs) r.weight = w;
        return {std::move(rs), angles};
    }

    void validate() const {
        if (respondents.empty()) fail(ErrorKind::validation, "ensemble needs at least one respondent");
        angles.validate();
        T total(0);
        for (const auto& r : respondents) {
            r.elasticA.validate();
            r.elasticB.validate();
            if (r.weight < T(0)) fail(ErrorKind::validation, "negative respondent weight");
            total += r.weight;
        }
        if (!nearly_equal(total, T(1), kMassTolerance))
            fail(ErrorKind::validation, "respondent weights sum to " + format_scalar(total) + ", not 1");
    }

    ModelParams<T> params_of(std::size_t i) const {
        return {respondents[i].elasticA, respondents[i].elasticB, angles};
    }
};

template <Scalar T>
struct AveragedTable {
    SeqProbTable<T> table;
    /// Respondents whose landing points miss their breakable regions; their
    /// tables came from the integral path.
    std::vector<std::size_t> insensitive;
};

template <Scalar T>
AveragedTable<T> averaged_table(const Ensemble<T>& e) {
    e.validate();
    AveragedTable<T> out;
    for (std::size_t i = 0; i < e.respondents.size(); ++i) {
        const auto m = e.params_of(i);
        const bool sensitive = check_sensitivity(m).ok();
        if (!sensitive) out.insensitive.push_back(i);
        const auto t = sensitive ? sequential_probs_closed_form(m) : sequential_probs_integral(m);
        const T& w = e.respondents[i].weight;
        for (std::size_t k = 0; k < 4; ++k) {
            out.table.pAB[k] += w * t.pAB[k];
            out.table.pBA[k] += w * t.pBA[k];
        }
    }
    return out;
}

template <Scalar T>
FitResult<T> effective_refit(const Ensemble<T>& e, const Gauge<T>& g) {
    return fit(averaged_table(e).table, g);
}

/// Whether two symmetric respondents (eps_i for both questions, d = 0)
/// average to a table of the same single symmetric form. That needs
/// (e1 + e2)^2 = 2 (e1^2 + e2^2), i.e. (e1 - e2)^2 = 0. `tol` bounds
/// |e1 - e2|; 0 asks for exact equality.
template <Scalar T>
bool symmetry_breaking_check(const T& eps1, const T& eps2, double tol = 0.0) {
    for (const T* e : {&eps1, &eps2})
        if (!(*e > T(0)) || *e > T(1)) fail(ErrorKind::validation, "eps must lie in (0, 1]");
    const T lhs = (eps1 + eps2) * (eps1 + eps2);
    const T rhs = T(2) * (eps1 * eps1 + eps2 * eps2);
    const T gap = rhs - lhs;  // == (eps1 - eps2)^2 >= 0
    if (tol == 0.0) return gap == T(0);
    return to_double(gap) <= tol * tol;
}

/// How far a table is from every model with eps_A = eps_B and d_A = d_B = 0.
/// The ratios are gauge invariant, so such a model exists only if both d
/// ratios vanish and the two cos(theta) ratios agree.
template <Scalar T>
T symmetric_form_residual(const RatioSet<T>& r) {
    return std::max({abs_value(r.dA_over_epsA), abs_value(r.dB_over_epsB),
                     abs_value(T(r.cosTheta_over_epsA - r.cosTheta_over_epsB))});
}

template <Scalar T>
struct EnsembleSequence {
    std::map<std::string, T> path_probability;
    /// Total probability of paths where a repeated question changed answer.
    T non_replicating_mass{};
};

/// Weighted mixture of the respondents' outcome trees.
template <Scalar T>
EnsembleSequence<T> ensemble_sequence(const Ensemble<T>& e, std::string_view sequence,
                                      const std::optional<CAxis<T>>& c = std::nullopt) {
    e.validate();
    EnsembleSequence<T> out;
    for (std::size_t i = 0; i < e.respondents.size(); ++i) {
        const auto tree = run_sequence(sequence, e.params_of(i), e.respondents[i].policy, c);
        for (const auto& p : tree.paths) {
            const T contrib = e.respondents[i].weight * p.probability;
            out.path_probability[p.label()] += contrib;
            if (!p.replicates()) out.non_replicating_mass += contrib;
        }
    }
    return out;
}

/// True when the ensemble repeats every earlier answer with certainty, so
/// that e.g. P(AyByAy) = P(AyBy) at the collective level.
template <Scalar T>
bool replicability_lifts(const Ensemble<T>& e, std::string_view sequence,
                         const std::optional<CAxis<T>>& c = std::nullopt, double tol = 1e-12) {
    return nearly_equal(ensemble_sequence(e, sequence, c).non_replicating_mass, T(0), tol);
}

}  // namespace gtr
