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

// Longer measurement sequences (AA, ABA, BAB, ABCA, ...) with the breaking
// densities allowed to change as outcomes accumulate.
//
// The full outcome tree is enumerated analytically. Each node carries the
// current state (psi, or the anchor of the last outcome) and the current
// density of every elastic.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtr/distributions.hpp"
#include "gtr/error.hpp"
#include "gtr/forward.hpp"
#include "gtr/scalar.hpp"

namespace gtr {

enum class UpdatePolicy {
    /// Densities never change (weak compatibility everywhere).
    none,
    /// After each outcome, every previously answered elastic is truncated to
    /// the part that reproduces its last answer from the new state.
    minimal_truncation,
    /// A measurement's density becomes a point mass at the end opposite to its
    /// outcome after the first execution.
    dirac_pinning,
};

inline std::string_view to_string(UpdatePolicy p) {
    switch (p) {
        case UpdatePolicy::none: return "none";
        case UpdatePolicy::minimal_truncation: return "minimal-truncation";
        case UpdatePolicy::dirac_pinning: return "dirac-pinning";
    }
    return "none";
}

inline UpdatePolicy parse_policy(std::string_view s) {
    if (s == "none") return UpdatePolicy::none;
    if (s == "minimal-truncation" || s == "truncation") return UpdatePolicy::minimal_truncation;
    if (s == "dirac-pinning" || s == "pinning") return UpdatePolicy::dirac_pinning;
    fail(ErrorKind::validation, "unknown update policy '" + std::string(s) + "'");
}

/// A third measurement C given through its scalar products with the other
/// axes and the state. A disruptive C leaves the other densities untouched
/// after a yes answer, so a repeated earlier question can become open again.
template <Scalar T>
struct CAxis {
    ElasticParams<T> elastic = ElasticParams<T>::globally_uniform();
    T cosWithA{};    // c_y . a_y
    T cosWithB{};    // c_y . b_y
    T cosWithPsi{};  // c_y . x_psi
    bool disruptive = true;
};

template <Scalar T>
struct MeasurementAxis {
    char id;
    BreakDensity<T> density;
    bool disruptive = false;
};

/// Measurements plus the Gram data between their yes-axes and the state.
template <Scalar T>
class SequenceModel {
public:
    static SequenceModel from_params(const ModelParams<T>& m, const std::optional<CAxis<T>>& c = std::nullopt) {
        m.validate();
        SequenceModel s;
        s.axes_.push_back({'A', locally_uniform(m.A), false});
        s.axes_.push_back({'B', locally_uniform(m.B), false});
        s.psi_ = {m.cosThetaA(), m.cosThetaB()};
        s.gram_ = {{T(1), m.cosTheta()}, {m.cosTheta(), T(1)}};
        if (c) {
            c->elastic.validate();
            for (const T* v : {&c->cosWithA, &c->cosWithB, &c->cosWithPsi})
                if (*v < T(-1) || *v > T(1)) fail(ErrorKind::validation, "C-axis cosine outside [-1, 1]");
            s.axes_.push_back({'C', locally_uniform(c->elastic), c->disruptive});
            s.psi_.push_back(c->cosWithPsi);
            s.gram_[0].push_back(c->cosWithA);
            s.gram_[1].push_back(c->cosWithB);
            s.gram_.push_back({c->cosWithA, c->cosWithB, T(1)});
        }
        return s;
    }

    /// Replaces the density of one measurement (e.g. to start from a pinned elastic).
    void set_density(char id, BreakDensity<T> rho) { axes_[index_of(id)].density = std::move(rho); }

    std::size_t index_of(char id) const {
        for (std::size_t i = 0; i < axes_.size(); ++i)
            if (axes_[i].id == id) return i;
        fail(ErrorKind::validation, std::string("unknown measurement '") + id + "'");
    }

    const std::vector<MeasurementAxis<T>>& axes() const { return axes_; }
    const T& psi_dot(std::size_t i) const { return psi_[i]; }
    const T& axis_dot(std::size_t i, std::size_t j) const { return gram_[i][j]; }

private:
    std::vector<MeasurementAxis<T>> axes_;
    std::vector<T> psi_;
    std::vector<std::vector<T>> gram_;
};

struct Step {
    char measurement;
    Outcome outcome;
};

template <Scalar T>
struct SequencePath {
    std::vector<Step> steps;
    /// Conditional probability of each step given the prefix.
    std::vector<T> conditional;
    T probability;

    /// e.g. "AyByAy"
    std::string label() const {
        std::string s;
        for (const auto& st : steps) {
            s += st.measurement;
            s += outcome_char(st.outcome);
        }
        return s;
    }

    /// True when every repeated measurement reproduced its previous answer.
    bool replicates() const {
        for (std::size_t i = 0; i < steps.size(); ++i)
            for (std::size_t j = i + 1; j < steps.size(); ++j)
                if (steps[j].measurement == steps[i].measurement) {
                    if (steps[j].outcome != steps[i].outcome) return false;
                    break;
                }
        return true;
    }
};

template <Scalar T>
struct OutcomeTree {
    std::string sequence;
    UpdatePolicy policy;
    std::vector<SequencePath<T>> paths;

    const SequencePath<T>& path(std::string_view label) const {
        for (const auto& p : paths)
            if (p.label() == label) return p;
        fail(ErrorKind::validation, "no path labelled '" + std::string(label) + "'");
    }

    T total() const {
        T s(0);
        for (const auto& p : paths) s += p.probability;
        return s;
    }
};

namespace detail {

template <Scalar T>
struct SequenceNode {
    std::optional<Step> state;  // nullopt: still at psi
    std::vector<BreakDensity<T>> densities;
    std::vector<std::optional<Outcome>> answered;
    SequencePath<T> path;
};

template <Scalar T>
T landing_on(const SequenceModel<T>& model, const std::optional<Step>& state, std::size_t target) {
    if (!state) return model.psi_dot(target);
    const T& c = model.axis_dot(model.index_of(state->measurement), target);
    return state->outcome == Outcome::yes ? c : T(-c);
}

}  // namespace detail

/// Enumerates every outcome path of `sequence` (a string of measurement ids).
/// Throws empty_support when a density must be conditioned on a region it
/// gives no mass to along a branch of positive probability.
template <Scalar T>
OutcomeTree<T> run_sequence(std::string_view sequence, const SequenceModel<T>& model, UpdatePolicy policy) {
    if (sequence.empty()) fail(ErrorKind::validation, "empty measurement sequence");
    std::vector<std::size_t> ids;
    for (char c : sequence) ids.push_back(model.index_of(c));

    const std::size_t n_axes = model.axes().size();
    std::vector<detail::SequenceNode<T>> frontier(1);
    for (const auto& ax : model.axes()) frontier[0].densities.push_back(ax.density);
    frontier[0].answered.assign(n_axes, std::nullopt);
    frontier[0].path.probability = T(1);

    for (std::size_t j : ids) {
        std::vector<detail::SequenceNode<T>> next;
        next.reserve(frontier.size() * 2);
        const char id = model.axes()[j].id;
        for (const auto& node : frontier) {
            const T landing = detail::landing_on(model, node.state, j);
            const auto probs = single_outcome_prob(node.densities[j], landing);
            for (Outcome o : {Outcome::yes, Outcome::no}) {
                detail::SequenceNode<T> child = node;
                const T& cond = o == Outcome::yes ? probs.pYes : probs.pNo;
                child.path.steps.push_back({id, o});
                child.path.conditional.push_back(cond);
                child.path.probability = node.path.probability * cond;
                child.state = Step{id, o};
                const bool live = child.path.probability > T(0);

                if (policy == UpdatePolicy::dirac_pinning && !node.answered[j]) {
                    child.densities[j] = pin<T>(o);
                } else if (policy == UpdatePolicy::minimal_truncation && live &&
                           !(model.axes()[j].disruptive && o == Outcome::yes)) {
                    for (std::size_t i = 0; i < n_axes; ++i) {
                        if (i == j || !child.answered[i]) continue;
                        const T land = detail::landing_on(model, child.state, i);
                        const Interval<T> keep = *child.answered[i] == Outcome::yes ? Interval<T>{T(-1), land}
                                                                                    : Interval<T>{land, T(1)};
                        child.densities[i] = truncate_renormalize(child.densities[i], keep);
                    }
                }
                child.answered[j] = o;
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }

    OutcomeTree<T> tree{std::string(sequence), policy, {}};
    tree.paths.reserve(frontier.size());
    for (auto& node : frontier) tree.paths.push_back(std::move(node.path));
    return tree;
}

template <Scalar T>
OutcomeTree<T> run_sequence(std::string_view sequence, const ModelParams<T>& m, UpdatePolicy policy,
                            const std::optional<CAxis<T>>& c = std::nullopt) {
    return run_sequence(sequence, SequenceModel<T>::from_params(m, c), policy);
}

}  // namespace gtr
