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

#include <gtest/gtest.h>

#include <cmath>

#include "gtr/geometry.hpp"
#include "test_support.hpp"

namespace gtr {
namespace {

TEST(UnitVector, RejectsNonUnit) {
    EXPECT_NO_THROW(UnitVector3(1, 0, 0));
    EXPECT_NO_THROW(UnitVector3(0.6, 0.8, 0));
    EXPECT_THROW(UnitVector3(1, 1, 0), Error);
    EXPECT_THROW(UnitVector3(0, 0, 0), Error);
    EXPECT_THROW(UnitVector3::normalized(0, 0, 0), Error);
}

TEST(UnitVector, AntipodeIsOppositeOutcome) {
    UnitVector3 a(0.6, 0.8, 0);
    EXPECT_DOUBLE_EQ(a.dot(-a), -1.0);
}

TEST(AngleTriple, RangeChecked) {
    EXPECT_NO_THROW((AngleTriple<double>{1, -1, 0}.validate()));
    EXPECT_THROW((AngleTriple<double>{1.5, 0, 0}.validate()), Error);
    EXPECT_THROW((AngleTriple<Rational>{Rational(-3, 2), 0, 0}.validate()), Error);
}

TEST(Reconstruct, ClintonGoreAngles) {
    // fitted cosines for the first survey at eps_A = 1/2
    const AngleTriple<double> a{0.31580679671197337, 0.11183011603970447, 0.13365161932360164};
    const auto f = reconstruct_state(a);
    EXPECT_NEAR(f.psi.dot(f.ay), a.cosThetaA, 1e-12);
    EXPECT_NEAR(f.psi.dot(f.by), a.cosThetaB, 1e-12);
    EXPECT_NEAR(f.ay.dot(f.by), a.cosTheta, 1e-12);
    EXPECT_GE(f.psi.x3(), 0.0);
}

TEST(Reconstruct, ParallelAxesAreDegenerate) {
    try {
        reconstruct_state(AngleTriple<double>{1.0, 0.2, 0.2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate_geometry);
    }
}

TEST(Reconstruct, InfeasibleProjections) {
    // orthogonal axes cannot both be at cos 0.9 from a unit vector
    try {
        reconstruct_state(AngleTriple<double>{0.0, 0.9, 0.9});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::infeasible_geometry);
    }
}

TEST(Reconstruct, BoundaryStateLiesInPlane) {
    // psi = a_y: cosThetaA = 1, cosThetaB = cosTheta
    const auto f = reconstruct_state(AngleTriple<double>{0.3, 1.0, 0.3});
    EXPECT_NEAR(f.psi.x3(), 0.0, 1e-7);
    EXPECT_NEAR(f.psi.x1(), 1.0, 1e-12);
}

TEST(Reconstruct, RoundTripProperty) {
    testing::ModelSampler s(11);
    for (int i = 0; i < 1000; ++i) {
        const auto a = s.angles();
        if (std::fabs(a.cosTheta) > 1.0 - 1e-6) continue;
        const auto f = reconstruct_state(a);
        EXPECT_NEAR(f.ay.dot(f.by), a.cosTheta, 1e-12);
        EXPECT_NEAR(f.psi.dot(f.ay), a.cosThetaA, 1e-9);
        EXPECT_NEAR(f.psi.dot(f.by), a.cosThetaB, 1e-9);
        const auto back = angles_from_vectors(f.psi, f.ay, f.by);
        EXPECT_NEAR(back.cosThetaB, a.cosThetaB, 1e-9);
    }
}

TEST(Reconstruct, AcceptsRationalAngles) {
    const AngleTriple<Rational> a{Rational(3, 10), Rational(1, 10), Rational(1, 5)};
    const auto f = reconstruct_state(a);
    EXPECT_NEAR(f.psi.dot(f.by), 0.2, 1e-12);
}

}  // namespace
}  // namespace gtr
