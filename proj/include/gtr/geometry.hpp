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

// Bloch-sphere vectors. A two-outcome measurement is an axis through the
// sphere; the state is a point on its surface. Only the three scalar
// products between state and axes enter any probability.

#include <cmath>
#include <sstream>

#include "gtr/error.hpp"
#include "gtr/scalar.hpp"

namespace gtr {

inline constexpr double kUnitNormTolerance = 1e-12;
inline constexpr double kFeasibilityClamp = 1e-10;

class UnitVector3 {
public:
    /// Throws validation if |v| differs from 1 by more than 1e-12.
    UnitVector3(double x1, double x2, double x3) : x1_(x1), x2_(x2), x3_(x3) {
        double n2 = x1 * x1 + x2 * x2 + x3 * x3;
        if (!std::isfinite(n2) || std::fabs(n2 - 1.0) > kUnitNormTolerance) {
            std::ostringstream os;
            os.precision(17);
            os << "not a unit vector: (" << x1 << ", " << x2 << ", " << x3 << "), |v|^2 = " << n2;
            fail(ErrorKind::validation, os.str());
        }
    }

    /// Scales an arbitrary non-zero vector onto the sphere.
    static UnitVector3 normalized(double x1, double x2, double x3) {
        double n = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
        if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::validation, "cannot normalize a zero vector");
        return UnitVector3(x1 / n, x2 / n, x3 / n);
    }

    double x1() const { return x1_; }
    double x2() const { return x2_; }
    double x3() const { return x3_; }

    double dot(const UnitVector3& o) const { return x1_ * o.x1_ + x2_ * o.x2_ + x3_ * o.x3_; }

    /// The antipodal outcome point (a_n = -a_y).
    UnitVector3 operator-() const { return UnitVector3(-x1_, -x2_, -x3_, Unchecked{}); }

    friend bool operator==(const UnitVector3&, const UnitVector3&) = default;

private:
    struct Unchecked {};
    UnitVector3(double x1, double x2, double x3, Unchecked) : x1_(x1), x2_(x2), x3_(x3) {}

    double x1_;
    double x2_;
    double x3_;
};

/// cosTheta = a_y . b_y, cosThetaA = psi . a_y, cosThetaB = psi . b_y.
template <Scalar T>
struct AngleTriple {
    T cosTheta;
    T cosThetaA;
    T cosThetaB;

    void validate() const {
        auto in_range = [](const T& c) { return c >= T(-1) && c <= T(1); };
        if (!in_range(cosTheta) || !in_range(cosThetaA) || !in_range(cosThetaB))
            fail(ErrorKind::validation, "cosines must lie in [-1, 1]");
    }

    friend bool operator==(const AngleTriple&, const AngleTriple&) = default;
};

inline AngleTriple<double> angles_from_vectors(const UnitVector3& psi, const UnitVector3& ay,
                                               const UnitVector3& by) {
    auto clamp = [](double c) { return c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c); };
    return {clamp(ay.dot(by)), clamp(psi.dot(ay)), clamp(psi.dot(by))};
}

struct BlochFrame {
    UnitVector3 psi;
    UnitVector3 ay;
    UnitVector3 by;

    UnitVector3 an() const { return -ay; }
    UnitVector3 bn() const { return -by; }
};

/// Concrete vectors realizing the given cosines: a_y on the first axis,
/// b_y in the 1-2 plane, psi with a non-negative third component.
template <Scalar T>
BlochFrame reconstruct_state(const AngleTriple<T>& angles) {
    angles.validate();
    const double c = to_double(angles.cosTheta);
    const double ca = to_double(angles.cosThetaA);
    const double cb = to_double(angles.cosThetaB);

    const double s2 = 1.0 - c * c;
    if (!(s2 > 0.0)) fail(ErrorKind::degenerate_geometry, "a_y and b_y are (anti)parallel: sin(theta) = 0");
    const double s = std::sqrt(s2);

    const double y = (cb - c * ca) / s;
    double rest = 1.0 - ca * ca - y * y;
    if (rest < 0.0) {
        if (rest < -kFeasibilityClamp) {
            std::ostringstream os;
            os.precision(17);
            os << "no unit state vector has these projections (norm excess " << -rest << ")";
            fail(ErrorKind::infeasible_geometry, os.str());
        }
        rest = 0.0;
    }
    const double x3 = std::sqrt(rest);
    return BlochFrame{UnitVector3::normalized(ca, y, x3), UnitVector3(1.0, 0.0, 0.0), UnitVector3(c, s, 0.0)};
}

}  // namespace gtr
