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

#include "gtr/forward.hpp"
#include "test_support.hpp"

namespace gtr {
namespace {

using testing::Q;

ModelParams<Rational> clinton_params() {
    return {{Rational(1, 2), Q("175279/2269568")},
            {Q("1486068262965/2525568461696"), Q("-62852085795/360795494528")},
            {Q("716745/2269568"), Q("158628783/1418480000"), Q("21096644663643/157848028856000")}};
}

TEST(SingleOutcome, BornRule) {
    for (double c : {-1.0, -0.4, 0.0, 0.1118, 0.9, 1.0}) {
        const auto p = single_outcome_prob(globally_uniform<double>(), c);
        EXPECT_NEAR(p.pYes, (1 + c) / 2, 1e-15);
        EXPECT_NEAR(p.pNo, (1 - c) / 2, 1e-15);
    }
}

TEST(SingleOutcome, ClintonA) {
    const auto p = single_outcome_prob(locally_uniform(ElasticParams<double>{0.5, 0.0772}), 0.1118);
    EXPECT_NEAR(p.pYes, 0.5346, 1e-12);
    EXPECT_NEAR(p.pNo, 0.4654, 1e-12);
}

TEST(SingleOutcome, LandingAtTopIsCertainYes) {
    for (const auto& rho : {globally_uniform<double>(), locally_uniform(ElasticParams<double>{0.2, 0.3}),
                            pin<double>(Outcome::no)}) {
        const auto p = single_outcome_prob(rho, 1.0);
        EXPECT_EQ(p.pYes, 1.0);
        EXPECT_EQ(p.pNo, 0.0);
    }
    EXPECT_THROW(single_outcome_prob(globally_uniform<double>(), -1.01), Error);
}

TEST(ClosedForm, ClintonGoreExact) {
    EXPECT_EQ(sequential_probs_closed_form(clinton_params()), testing::clinton_gore<Rational>());
}

TEST(ClosedForm, ClintonGoreFloat) {
    const auto t = sequential_probs_closed_form(to_double(clinton_params()));
    const auto want = testing::clinton_gore<double>();
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(t.pAB[i], want.pAB[i], 1e-12);
        EXPECT_NEAR(t.pBA[i], want.pBA[i], 1e-12);
    }
}

TEST(ClosedForm, BornSubstitution) {
    testing::ModelSampler s(21);
    for (int i = 0; i < 200; ++i) {
        const auto a = s.angles();
        const auto t = sequential_probs_closed_form(quantum_params(a));
        EXPECT_NEAR(t.pAB.yy, 0.25 * (1 + a.cosTheta) * (1 + a.cosThetaA), 1e-15);
        EXPECT_NEAR(t.pBA.nn, 0.25 * (1 + a.cosTheta) * (1 - a.cosThetaB), 1e-15);
    }
}

TEST(ClosedForm, InsensitiveModelRejected) {
    // cos(theta_A) = 0.9 lies above A's region [-0.2, 0.2]
    const ModelParams<double> m{{0.2, 0.0}, {1.0, 0.0}, {0.1, 0.9, 0.1}};
    try {
        sequential_probs_closed_form(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::closed_form_invalid);
    }
    // the integral path still works and saturates: A is certainly yes
    const auto t = forward(m);
    EXPECT_EQ(t.pAB.ny + t.pAB.nn, 0.0);
    EXPECT_NEAR(t.pAB.sum(), 1.0, 1e-15);
}

TEST(ClosedForm, ExactUnitarity) {
    const ModelParams<Rational> m{{Q("0.45"), Q("0.05")}, {Q("0.6"), Q("-0.2")}, {Q("0.3"), Q("0.05"), Q("-0.1")}};
    const auto t = sequential_probs_closed_form(m);
    EXPECT_EQ(t.pAB.sum(), 1);
    EXPECT_EQ(t.pBA.sum(), 1);
}

TEST(Integral, PinnedFirstElastic) {
    const AngleTriple<double> a{0.3, 0.1, 0.2};
    const auto rhoB = locally_uniform(ElasticParams<double>{0.6, 0.1});
    const auto t = sequential_probs_integral(pin<double>(Outcome::yes), rhoB, a);
    const auto b = single_outcome_prob(rhoB, 0.3);
    EXPECT_EQ(t.pAB.yy, b.pYes);
    EXPECT_EQ(t.pAB.yn, b.pNo);
    EXPECT_EQ(t.pAB.ny, 0.0);
    EXPECT_EQ(t.pAB.nn, 0.0);
}

TEST(Integral, ClintonGoreExact) {
    EXPECT_EQ(sequential_probs_integral(clinton_params()), testing::clinton_gore<Rational>());
}

TEST(Integral, MatchesClosedFormProperty) {
    testing::ModelSampler s(99);
    for (int i = 0; i < 1000; ++i) {
        const auto m = s.sensitive();
        const auto a = sequential_probs_closed_form(m);
        const auto b = sequential_probs_integral(m);
        for (std::size_t k = 0; k < 4; ++k) {
            ASSERT_NEAR(a.pAB[k], b.pAB[k], 1e-12);
            ASSERT_NEAR(a.pBA[k], b.pBA[k], 1e-12);
        }
    }
}

TEST(Forward, MarginalConsistencyProperty) {
    testing::ModelSampler s(123);
    for (int i = 0; i < 500; ++i) {
        const auto m = s.sensitive();
        const auto t = forward(m);
        EXPECT_NEAR(single_outcome_prob(locally_uniform(m.A), m.cosThetaA()).pYes, t.pAB.yy + t.pAB.yn, 1e-12);
        EXPECT_NEAR(single_outcome_prob(locally_uniform(m.B), m.cosThetaB()).pYes, t.pBA.yy + t.pBA.yn, 1e-12);
        EXPECT_NEAR(t.pAB.sum(), 1.0, 1e-12);
        EXPECT_NEAR(t.pBA.sum(), 1.0, 1e-12);
    }
}

TEST(Sensitivity, ReportNamesViolations) {
    const ModelParams<double> m{{0.2, 0.0}, {1.0, 0.0}, {0.1, 0.9, 0.1}};
    const auto r = check_sensitivity(m);
    EXPECT_FALSE(r.ok());
    EXPECT_FALSE(r.cosThetaA_in_A);
    EXPECT_TRUE(r.cosTheta_in_A);
    EXPECT_NE(r.describe().find("cos(theta_A)"), std::string::npos);
}

TEST(Sensitivity, NoBranchLandingCounts) {
    // +cos(theta) inside B's region [-0.1, 0.7] but -cos(theta) is not
    const ModelParams<double> m{{1.0, 0.0}, {0.4, 0.3}, {0.5, 0.1, 0.4}};
    const auto r = check_sensitivity(m);
    EXPECT_TRUE(r.cosTheta_in_B);
    EXPECT_FALSE(r.minusCosTheta_in_B);
    EXPECT_FALSE(r.ok());
    EXPECT_THROW(sequential_probs_closed_form(m), Error);
    const auto t = forward(m);
    EXPECT_EQ(t.pAB.ny, 0.0);  // after An, B lands below its region: always no
    EXPECT_NEAR(t.pAB.sum(), 1.0, 1e-15);
}

TEST(SeqProbTable, ValidateRejectsNonUnitary) {
    SeqProbTable<double> t{{0.5, 0.5, 0.1, 0.0}, {0.25, 0.25, 0.25, 0.25}};
    EXPECT_THROW(t.validate(), Error);
}

}  // namespace
}  // namespace gtr
