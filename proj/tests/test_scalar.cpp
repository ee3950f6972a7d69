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

#include "gtr/scalar.hpp"

namespace gtr {
namespace {

TEST(ParseRational, DecimalsAreExact) {
    EXPECT_EQ(parse_rational("0.4899"), Rational(4899, 10000));
    EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
    EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
    EXPECT_EQ(parse_rational("2.5E+2"), Rational(250));
    EXPECT_EQ(parse_rational(" 7 "), Rational(7));
}

TEST(ParseRational, Fractions) {
    EXPECT_EQ(parse_rational("1447/3200"), Rational(1447, 3200));
    EXPECT_EQ(parse_rational("-62852085795/360795494528"), Rational(BigInt(-62852085795LL), BigInt(360795494528LL)));
}

TEST(ParseRational, RejectsGarbage) {
    for (const char* bad : {"", "abc", "1.2.3", "1/0", "3x", "1e", "--1"}) {
        try {
            parse_rational(bad);
            ADD_FAILURE() << "accepted '" << bad << "'";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::parse) << bad;
        }
    }
}

TEST(RationalFromDouble, UsesShortestDecimal) {
    EXPECT_EQ(rational_from_double(0.4899), Rational(4899, 10000));
    EXPECT_EQ(rational_from_double(0.1), Rational(1, 10));
}

TEST(ToDouble, CorrectlyRoundedForSmallFractions) {
    EXPECT_EQ(to_double(Rational(4899, 10000)), 0.4899);
    EXPECT_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
    EXPECT_EQ(to_double(Rational(-2887, 10000)), -0.2887);
}

TEST(ScalarFromText, FloatModeMatchesStrtod) {
    EXPECT_EQ(scalar_from_text<double>("0.2129"), 0.2129);
    EXPECT_EQ(scalar_from_text<double>("1/4"), 0.25);
    EXPECT_EQ(scalar_from_text<Rational>("0.2129"), Rational(2129, 10000));
}

TEST(FormatScalar, RationalAlwaysHasDenominator) {
    EXPECT_EQ(format_scalar(Rational(1, 2)), "1/2");
    EXPECT_EQ(format_scalar(Rational(3)), "3/1");
    EXPECT_EQ(format_scalar(Rational(-2, 625)), "-2/625");
}

TEST(FormatScalar, DoubleRoundTripsAt17Digits) {
    for (double x : {0.1, 1.0 / 3.0, -0.0032000000000000084, 1e-300}) {
        EXPECT_EQ(std::stod(format_scalar(x)), x);
    }
}

TEST(NearlyEqual, ExactModeIgnoresTolerance) {
    EXPECT_FALSE(nearly_equal(Rational(1, 3), Rational(1, 3) + Rational(1, 1000000000), 1e-3));
    EXPECT_TRUE(nearly_equal(1.0 / 3.0, 0.3333333, 1e-6));
}

}  // namespace
}  // namespace gtr
