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

// Shared fixtures and random generators for the test suite.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gtr/gtr.hpp"

namespace gtr::testing {

inline Rational Q(const char* s) { return parse_rational(s); }

/// Survey tables after the single-entry unitarity corrections.
template <Scalar T>
SeqProbTable<T> clinton_gore() {
    auto v = [](const char* s) { return from_rational<T>(parse_rational(s)); };
    return {{v("0.4899"), v("0.0447"), v("0.1767"), v("0.2887")}, {v("0.5625"), v("0.1991"), v("0.0255"), v("0.2129")}};
}

template <Scalar T>
SeqProbTable<T> rose_jackson() {
    auto v = [](const char* s) { return from_rational<T>(parse_rational(s)); };
    return {{v("0.3379"), v("0.3241"), v("0.0178"), v("0.3202")}, {v("0.4156"), v("0.0671"), v("0.1234"), v("0.3939")}};
}

inline std::string data_path(const std::string& name) { return std::string(GTR_DATA_DIR) + "/" + name; }

/// A random model satisfying sensitivity: eps and d first, then landing
/// points (+-c included) drawn inside the breakable regions, then a feasible psi.
class ModelSampler {
public:
    explicit ModelSampler(std::uint64_t seed) : rng_(seed) {}

    ModelParams<double> sensitive() {
        for (;;) {
            const ElasticParams<double> A = elastic();
            const ElasticParams<double> B = elastic();
            // both +c and -c must land inside both regions
            const double reach = std::min({-A.lower(), -B.lower(), A.upper(), B.upper(), 0.95});
            if (!(reach > 0.05)) continue;
            const double c = uniform(-reach, reach);
            const double ca = uniform(A.lower(), A.upper());
            const double cb = uniform(B.lower(), B.upper());
            const double s2 = 1.0 - c * c;
            const double y = (cb - c * ca) / std::sqrt(s2);
            if (1.0 - ca * ca - y * y < 1e-6) continue;  // psi must exist
            return {A, B, {c, ca, cb}};
        }
    }

    /// Realizable cosines (built from actual unit vectors).
    AngleTriple<double> angles() {
        auto v = [&] {
            std::normal_distribution<double> n;
            return UnitVector3::normalized(n(rng_), n(rng_), n(rng_));
        };
        return angles_from_vectors(v(), v(), v());
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    std::mt19937_64& rng() { return rng_; }

private:
    ElasticParams<double> elastic() {
        const double eps = uniform(0.2, 1.0);
        const double dmax = 1.0 - eps;
        return {eps, uniform(-dmax, dmax)};
    }

    std::mt19937_64 rng_;
};

}  // namespace gtr::testing
