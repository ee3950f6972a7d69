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

// Breaking densities of an elastic band on [-1, 1].
//
// A density is a finite sum of constant segments and point masses. The
// class is closed under everything the model does to a density (locally
// uniform construction, truncation to an interval followed by
// renormalization, pinning to an end point), so every probability is an
// exact piecewise sum and no quadrature is ever needed.

#include <algorithm>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "gtr/error.hpp"
#include "gtr/scalar.hpp"

namespace gtr {

inline constexpr double kMassTolerance = 1e-12;

enum class Outcome { yes, no };

inline char outcome_char(Outcome o) { return o == Outcome::yes ? 'y' : 'n'; }

template <Scalar T>
struct Segment {
    T lo;
    T hi;
    T height;

    T mass() const { return height * (hi - lo); }
    friend bool operator==(const Segment&, const Segment&) = default;
};

template <Scalar T>
struct Atom {
    T position;
    T mass;
    friend bool operator==(const Atom&, const Atom&) = default;
};

template <Scalar T>
struct Interval {
    T lo;
    T hi;
};

/// Locally uniform breakability: half-width `epsilon`, centre `d`.
template <Scalar T>
struct ElasticParams {
    T epsilon;
    T d;

    /// epsilon in (0, 1] and epsilon + |d| <= 1.
    void validate() const {
        if (!(epsilon > T(0)) || epsilon > T(1)) {
            fail(epsilon == T(0) ? ErrorKind::degenerate_density : ErrorKind::validation,
                 "epsilon must lie in (0, 1], got " + format_scalar(epsilon));
        }
        if (!leq_tol(T(epsilon + abs_value(d)), T(1), kMassTolerance))
            fail(ErrorKind::validation, "breakable region [d - eps, d + eps] leaves [-1, 1]: eps = " +
                                            format_scalar(epsilon) + ", d = " + format_scalar(d));
    }

    T lower() const { return d - epsilon; }
    T upper() const { return d + epsilon; }

    static ElasticParams globally_uniform() { return {T(1), T(0)}; }

    friend bool operator==(const ElasticParams&, const ElasticParams&) = default;
};

template <Scalar T>
class BreakDensity {
public:
    /// Validates ordering, domain and unit total mass.
    BreakDensity(std::vector<Segment<T>> segments, std::vector<Atom<T>> atoms)
        : segments_(std::move(segments)), atoms_(std::move(atoms)) {
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom<T>& a, const Atom<T>& b) { return a.position < b.position; });
        T total(0);
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            const auto& s = segments_[i];
            if (s.lo < T(-1) || s.hi > T(1) || !(s.lo < s.hi) || s.height < T(0))
                fail(ErrorKind::validation, "segment outside [-1, 1] or with negative height");
            if (i > 0 && segments_[i - 1].hi > s.lo)
                fail(ErrorKind::validation, "segments must be sorted and non-overlapping");
            total += s.mass();
        }
        for (const auto& a : atoms_) {
            if (a.position < T(-1) || a.position > T(1) || !(a.mass > T(0)))
                fail(ErrorKind::validation, "atom outside [-1, 1] or with non-positive mass");
            total += a.mass;
        }
        if (!nearly_equal(total, T(1), kMassTolerance))
            fail(ErrorKind::validation, "total mass must be 1, got " + format_scalar(total));
    }

    const std::vector<Segment<T>>& segments() const { return segments_; }
    const std::vector<Atom<T>>& atoms() const { return atoms_; }

    /// Smallest and largest points carrying mass.
    T support_lo() const {
        T lo(1);
        for (const auto& s : segments_)
            if (s.height > T(0)) lo = std::min(lo, s.lo);
        for (const auto& a : atoms_) lo = std::min(lo, a.position);
        return lo;
    }
    T support_hi() const {
        T hi(-1);
        for (const auto& s : segments_)
            if (s.height > T(0)) hi = std::max(hi, s.hi);
        for (const auto& a : atoms_) hi = std::max(hi, a.position);
        return hi;
    }

    bool has_atom_at(const T& x) const {
        return std::any_of(atoms_.begin(), atoms_.end(), [&](const Atom<T>& a) { return a.position == x; });
    }

    /// Mass on [-1, x]; atoms at x are included.
    T cdf_unchecked(const T& x) const {
        if (x >= support_hi()) return T(1);
        if (x < support_lo()) return T(0);
        T acc(0);
        for (const auto& s : segments_) {
            if (x <= s.lo) break;
            acc += s.height * (std::min(x, s.hi) - s.lo);
        }
        for (const auto& a : atoms_)
            if (a.position <= x) acc += a.mass;
        return acc;
    }

    /// Mass on the closed interval [lo, hi].
    T mass_in(const T& lo, const T& hi) const {
        T acc(0);
        for (const auto& s : segments_) {
            T a = std::max(lo, s.lo);
            T b = std::min(hi, s.hi);
            if (a < b) acc += s.height * (b - a);
        }
        for (const auto& at : atoms_)
            if (at.position >= lo && at.position <= hi) acc += at.mass;
        return acc;
    }

    friend bool operator==(const BreakDensity&, const BreakDensity&) = default;

private:
    std::vector<Segment<T>> segments_;
    std::vector<Atom<T>> atoms_;
};

template <Scalar T>
BreakDensity<T> locally_uniform(const ElasticParams<T>& p) {
    p.validate();
    T lo = p.lower();
    T hi = p.upper();
    // float slack allowed by validate() must not push the segment outside the domain
    if (lo < T(-1)) lo = T(-1);
    if (hi > T(1)) hi = T(1);
    return BreakDensity<T>({Segment<T>{lo, hi, T(1) / (T(2) * p.epsilon)}}, {});
}

template <Scalar T>
BreakDensity<T> globally_uniform() {
    return locally_uniform(ElasticParams<T>::globally_uniform());
}

/// Probability that the elastic breaks in [-1, x]. Atoms at x count.
template <Scalar T>
T cdf(const BreakDensity<T>& rho, const T& x) {
    if (x < T(-1) || x > T(1)) fail(ErrorKind::validation, "cdf argument outside [-1, 1]: " + format_scalar(x));
    return rho.cdf_unchecked(x);
}

/// Restriction to the closed interval, rescaled to unit mass.
template <Scalar T>
BreakDensity<T> truncate_renormalize(const BreakDensity<T>& rho, const Interval<T>& interval) {
    const T lo = std::max(interval.lo, T(-1));
    const T hi = std::min(interval.hi, T(1));
    const T mass = lo <= hi ? rho.mass_in(lo, hi) : T(0);
    if (!(mass > T(0))) {
        fail(ErrorKind::empty_support, "no breaking mass in [" + format_scalar(interval.lo) + ", " +
                                           format_scalar(interval.hi) + "]");
    }
    std::vector<Segment<T>> segments;
    for (const auto& s : rho.segments()) {
        T a = std::max(lo, s.lo);
        T b = std::min(hi, s.hi);
        if (a < b && s.height > T(0)) segments.push_back({a, b, s.height / mass});
    }
    std::vector<Atom<T>> atoms;
    for (const auto& at : rho.atoms())
        if (at.position >= lo && at.position <= hi) atoms.push_back({at.position, at.mass / mass});
    return BreakDensity<T>(std::move(segments), std::move(atoms));
}

/// Deterministic elastic that reproduces `outcome` from every landing point:
/// yes pins the break to -1, no pins it to +1.
template <Scalar T>
BreakDensity<T> pin(Outcome outcome) {
    return BreakDensity<T>({}, {Atom<T>{outcome == Outcome::yes ? T(-1) : T(1), T(1)}});
}

/// Inverse-CDF draw of a breaking point. Always inside the support.
template <class URBG>
double sample_break_point(const BreakDensity<double>& rho, URBG& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);

    struct Piece {
        double lo;
        double hi;
        double mass;
        bool atom;
    };
    std::vector<Piece> pieces;
    pieces.reserve(rho.segments().size() + rho.atoms().size());
    for (const auto& s : rho.segments())
        if (s.height > 0.0) pieces.push_back({s.lo, s.hi, s.mass(), false});
    for (const auto& a : rho.atoms()) pieces.push_back({a.position, a.position, a.mass, true});
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });

    double acc = 0.0;
    for (const auto& p : pieces) {
        if (u < acc + p.mass) {
            if (p.atom) return p.lo;
            double x = p.lo + (u - acc) / p.mass * (p.hi - p.lo);
            return std::clamp(x, p.lo, p.hi);
        }
        acc += p.mass;
    }
    // rounding left u beyond the accumulated mass
    const Piece& last = pieces.back();
    return last.hi;
}

/// True when a break at `lambda` sends a particle landed at `landing` to
/// the yes anchor. Continuous ties are measure zero and go to no; a tie with
/// an atom counts as yes, matching the cdf convention.
template <Scalar T>
bool breaks_to_yes(const BreakDensity<T>& rho, const T& lambda, const T& landing) {
    if (lambda < landing) return true;
    return lambda == landing && rho.has_atom_at(lambda);
}

}  // namespace gtr
