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

#include "gtr/inverse.hpp"
#include "test_support.hpp"

namespace gtr {
namespace {

using testing::Q;

TEST(ExtractRatios, ClintonGore) {
    const auto r = extract_ratios(testing::clinton_gore<Rational>());
    EXPECT_EQ(r.cosTheta_over_epsB, Q("1112797/2073357"));
    EXPECT_EQ(r.dB_over_epsB, Q("-613837/2073357"));
    EXPECT_EQ(r.cosTheta_over_epsA, Q("716745/1134784"));
    EXPECT_EQ(r.dA_over_epsA, Q("175279/1134784"));
    EXPECT_EQ(r.cosThetaA_over_epsA, Q("158628783/709240000"));
    EXPECT_EQ(r.cosThetaB_over_epsB, Q("294339614/1295848125"));
}

TEST(ExtractRatios, RoseJackson) {
    const auto r = extract_ratios(testing::rose_jackson<Rational>());
    EXPECT_EQ(r.dA_over_epsA, Q("-2485435/24970071"));
    EXPECT_EQ(r.dB_over_epsB, Q("488811/1118780"));
    EXPECT_EQ(r.cosTheta_over_epsA, Q("15542470/24970071"));
    EXPECT_EQ(r.cosTheta_over_epsB, Q("512133/1118780"));
}

TEST(ExtractRatios, DifferenceIdentitiesHoldExactly) {
    for (const auto& t : {testing::clinton_gore<Rational>(), testing::rose_jackson<Rational>()}) {
        const auto r = extract_ratios(t);
        EXPECT_EQ(r.cosThetaA_over_epsA - r.dA_over_epsA, 2 * (t.pAB.yy + t.pAB.yn) - 1);
        EXPECT_EQ(r.cosThetaB_over_epsB - r.dB_over_epsB, 2 * (t.pBA.yy + t.pBA.yn) - 1);
    }
}

TEST(ExtractRatios, BornTableIsQuantumCompatible) {
    testing::ModelSampler s(8);
    for (int i = 0; i < 100; ++i) {
        const auto a = s.angles();
        if (std::fabs(a.cosThetaA) > 0.999 || std::fabs(a.cosThetaB) > 0.999) continue;
        const auto r = extract_ratios(forward(quantum_params(a)));
        EXPECT_NEAR(r.dA_over_epsA, 0.0, 1e-12);
        EXPECT_NEAR(r.dB_over_epsB, 0.0, 1e-12);
        EXPECT_NEAR(r.cosTheta_over_epsA, r.cosTheta_over_epsB, 1e-12);
        EXPECT_TRUE(quantum_compatibility(r).compatible);
    }
}

TEST(ExtractRatios, ZeroMarginalIsDegenerate) {
    const SeqProbTable<Rational> t{{1, 0, 0, 0}, {Rational(1, 2), 0, 0, Rational(1, 2)}};
    try {
        extract_ratios(t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate_table);
    }
}

TEST(Resolve, ClintonEpsAHalfExact) {
    const auto f = fit(testing::clinton_gore<Rational>(), Gauge<Rational>::epsilonA(Rational(1, 2)));
    const auto& m = f.params;
    EXPECT_EQ(m.epsA(), Rational(1, 2));
    EXPECT_EQ(m.epsB(), Q("1486068262965/2525568461696"));
    EXPECT_EQ(m.dA(), Q("175279/2269568"));
    EXPECT_EQ(m.dB(), Q("-62852085795/360795494528"));
    EXPECT_EQ(m.cosTheta(), Q("716745/2269568"));
    EXPECT_EQ(m.cosThetaA(), Q("158628783/1418480000"));
    EXPECT_EQ(m.cosThetaB(), Q("21096644663643/157848028856000"));
    EXPECT_TRUE(f.sensitivity.ok());
    EXPECT_EQ(f.epsA_bound, Q("1134784/1310063"));
    EXPECT_NEAR(to_double(f.epsA_bound), 0.87, 5e-3);
}

TEST(Resolve, RoseJacksonApproximate) {
    const auto m = fit(testing::rose_jackson<double>(), Gauge<double>::epsilonA(0.5)).params;
    EXPECT_NEAR(m.epsB(), 0.68, 5e-3);
    EXPECT_NEAR(m.dA(), -0.05, 5e-3);
    EXPECT_NEAR(m.dB(), 0.30, 5e-3);
    EXPECT_NEAR(m.cosTheta(), 0.31, 5e-3);
    EXPECT_NEAR(m.cosThetaA(), 0.11, 5e-3);
    EXPECT_NEAR(m.cosThetaB(), 0.27, 5e-3);
}

TEST(Resolve, EpsilonAboveBoundIsInfeasible) {
    try {
        fit(testing::clinton_gore<double>(), Gauge<double>::epsilonA(0.9));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::gauge_infeasible);
    }
    EXPECT_THROW(fit(testing::clinton_gore<double>(), Gauge<double>::epsilonA(0.0)), Error);
    EXPECT_THROW(fit(testing::clinton_gore<double>(), Gauge<double>::epsilonB(-0.1)), Error);
}

TEST(Resolve, CosThetaZeroLeavesEpsUndetermined) {
    // a table whose ratios force cos(theta) = 0
    const auto t = forward(ModelParams<Rational>{{Rational(1, 2), 0}, {Rational(1, 2), 0}, {0, Rational(1, 10), 0}});
    try {
        fit(t, Gauge<Rational>::epsilonA(Rational(1, 2)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::gauge_infeasible);
    }
}

TEST(Resolve, SensitivityViolationIsReportedNotFatal) {
    // cos(theta)/eps_A = 1.5 with d_A = 0: cos(theta) lies beyond A's region
    const RatioSet<double> r{0.0, 1.0, 0.0, 1.5, 0.2, 0.2};
    const auto f = resolve(r, Gauge<double>::epsilonA(0.5));
    EXPECT_DOUBLE_EQ(f.params.cosTheta(), 0.75);
    EXPECT_FALSE(f.sensitivity.ok());
    EXPECT_FALSE(f.sensitivity.cosTheta_in_A);
    EXPECT_TRUE(f.sensitivity.cosTheta_in_B);
}

TEST(Gauge, ParseAndDescribe) {
    const auto g = parse_gauge<Rational>("eps-a=0.5");
    EXPECT_EQ(g.kind, Gauge<Rational>::Kind::epsilonA);
    EXPECT_EQ(g.value, Rational(1, 2));
    EXPECT_EQ(g.describe(), "eps-a=1/2");
    EXPECT_EQ(parse_gauge<double>("cos-theta=0.3").kind, Gauge<double>::Kind::cosTheta);
    EXPECT_EQ(parse_gauge<double>("eps-b=1/4").value, 0.25);
    EXPECT_THROW(parse_gauge<double>("theta=1"), Error);
    EXPECT_THROW(parse_gauge<double>("eps-a"), Error);
}

TEST(InversionIdentity, RandomModelsProperty) {
    testing::ModelSampler s(4242);
    for (int i = 0; i < 1000; ++i) {
        const auto m = s.sensitive();
        const auto back = fit(sequential_probs_closed_form(m), Gauge<double>::epsilonA(m.epsA())).params;
        ASSERT_NEAR(back.epsB(), m.epsB(), 1e-12);
        ASSERT_NEAR(back.dA(), m.dA(), 1e-12);
        ASSERT_NEAR(back.dB(), m.dB(), 1e-12);
        ASSERT_NEAR(back.cosTheta(), m.cosTheta(), 1e-12);
        ASSERT_NEAR(back.cosThetaA(), m.cosThetaA(), 1e-12);
        ASSERT_NEAR(back.cosThetaB(), m.cosThetaB(), 1e-12);
    }
}

TEST(InversionIdentity, ExactForRationalModels) {
    const ModelParams<Rational> m{{Q("0.45"), Q("0.05")}, {Q("0.6"), Q("-0.2")}, {Q("0.3"), Q("0.05"), Q("-0.1")}};
    EXPECT_EQ(fit(forward(m), Gauge<Rational>::epsilonA(m.epsA())).params, m);
    EXPECT_EQ(fit(forward(m), Gauge<Rational>::cosTheta(m.cosTheta())).params, m);
    EXPECT_EQ(fit(forward(m), Gauge<Rational>::epsilonB(m.epsB())).params, m);
}

TEST(GaugeCovariance, ForwardTableIsGaugeFree) {
    const auto t = testing::clinton_gore<Rational>();
    const auto r = extract_ratios(t);
    for (const char* g : {"eps-a=1/2", "eps-a=0.3", "eps-a=0.6", "eps-b=0.4", "cos-theta=0.2"}) {
        const auto f = resolve(r, parse_gauge<Rational>(g));
        ASSERT_TRUE(f.sensitivity.ok()) << g;
        EXPECT_EQ(forward(f.params), t) << g;
    }
}

TEST(GaugeCovariance, RandomGaugesProperty) {
    testing::ModelSampler s(31);
    for (int i = 0; i < 200; ++i) {
        const auto m = s.sensitive();
        const auto t = forward(m);
        const auto r = extract_ratios(t);
        const double scale = s.uniform(0.5, 1.0);
        const auto f = resolve(r, Gauge<double>::epsilonA(m.epsA() * scale));
        if (!f.sensitivity.ok()) continue;
        const auto t2 = forward(f.params);
        for (std::size_t k = 0; k < 4; ++k) {
            ASSERT_NEAR(t2.pAB[k], t.pAB[k], 1e-12);
            ASSERT_NEAR(t2.pBA[k], t.pBA[k], 1e-12);
        }
    }
}

TEST(QuantumCompatibility, Fixtures) {
    const auto cg = quantum_compatibility(extract_ratios(testing::clinton_gore<double>()));
    EXPECT_FALSE(cg.compatible);
    EXPECT_NEAR(cg.dA_residual, 0.15, 5e-3);
    const auto rj = quantum_compatibility(extract_ratios(testing::rose_jackson<double>()));
    EXPECT_FALSE(rj.compatible);
    EXPECT_NEAR(rj.dB_residual, 0.44, 5e-3);
}

TEST(EpsilonBound, SymmetricInSign) {
    EXPECT_EQ(epsilon_bound(Rational(1, 4)), Rational(4, 5));
    EXPECT_EQ(epsilon_bound(Rational(-1, 4)), Rational(4, 5));
}

}  // namespace
}  // namespace gtr
