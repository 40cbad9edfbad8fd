#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace plmqm;
using testing_support::quadrature_echo_amplitude;
using testing_support::ref_efficiency;

TEST(SymmetryParameter, TanHalfAngle)
{
    EXPECT_NEAR(symmetry_parameter(1.0, pi / 2), 1.0, 1e-15);
    EXPECT_NEAR(symmetry_parameter(1.0, pi / 3), 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(symmetry_parameter(2.0, 2 * pi / 3), 2.0 * std::sqrt(3.0), 1e-13);
    EXPECT_TRUE(symmetry_condition_met(symmetry_parameter(1.0, pi / 2)));
    EXPECT_FALSE(symmetry_condition_met(symmetry_parameter(1.0, pi / 3)));
}

TEST(SymmetryParameter, SingularAtEnds)
{
    EXPECT_THROW(symmetry_parameter(1.0, 0.0), SingularArgument);
    EXPECT_THROW(symmetry_parameter(1.0, pi), SingularArgument);
    EXPECT_THROW(retrieval_efficiency(-1.0, 1, 1), InvalidArgument);
    EXPECT_THROW(retrieval_efficiency(1.0, -1, 1), InvalidArgument);
}

TEST(RetrievalEfficiency, KnownValues)
{
    EXPECT_NEAR(retrieval_efficiency(1.0, 2.0, 2.0), std::pow(1 - std::exp(-2.0), 2), 1e-15);
    EXPECT_NEAR(retrieval_efficiency(1.0, 2.0, 2.0), 0.747645, 1e-6);
    EXPECT_EQ(retrieval_efficiency(0.0, 3.0, 3.0), 0.0);
    EXPECT_EQ(retrieval_efficiency(INFINITY, 3.0, 3.0), 0.0);
    EXPECT_EQ(retrieval_efficiency(1.0, 0.0, 0.0), 0.0);
    EXPECT_NEAR(retrieval_efficiency(1.0, 200.0, 200.0), 1.0, 1e-15);
}

TEST(RetrievalEfficiency, MatchesIndependentFormulaOnRandomInputs)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<real> ux(0.01, 20.0), ud(0.0, 30.0);
    for (int i = 0; i < 1000; ++i) {
        const real x = ux(rng), a = ud(rng), b = ud(rng);
        const real eta = retrieval_efficiency(x, a, b);
        EXPECT_NEAR(eta, ref_efficiency(x, a, b), 1e-12);
        EXPECT_GE(eta, 0.0);
        EXPECT_LE(eta, 1.0);
    }
}

TEST(RetrievalEfficiency, InversionSymmetryInX)
{
    for (real x : {0.05, 0.3, 0.9, 1.0, 1.7, 4.0, 25.0}) {
        for (real D : {0.5, 3.0, 12.0}) {
            EXPECT_NEAR(retrieval_efficiency(x, D / 2, D / 2), retrieval_efficiency(1 / x, D / 2, D / 2), 1e-14);
        }
    }
}

TEST(RetrievalEfficiency, MaximumAtSymmetricPoint)
{
    const real D = 4.0;
    const real top = retrieval_efficiency(1.0, D / 2, D / 2);
    for (int k = -200; k <= 200; ++k) {
        if (k == 0) continue;
        const real x = std::exp(0.02 * k);
        EXPECT_LT(retrieval_efficiency(x, D / 2, D / 2), top);
    }
}

TEST(RetrievalEfficiency, MonotoneInDepth)
{
    for (real x : {0.4, 1.0, 2.5}) {
        real prev = -1.0;
        for (int k = 0; k <= 100; ++k) {
            const auto d = split_depth(x, 0.2 * k);
            const real eta = retrieval_efficiency(x, d.alpha_sL, d.alpha_eL);
            EXPECT_GE(eta, prev);
            prev = eta;
        }
        EXPECT_NEAR(prev, std::pow(2 * x / (1 + x * x), 2) * std::pow(1 - std::exp(-10.0), 2), 1e-12);
    }
}

TEST(SplitDepth, RatioIsXSquared)
{
    for (real x : {0.5, 1.0, 2.0}) {
        const auto d = split_depth(x, 6.0);
        EXPECT_NEAR(d.alpha_sL + d.alpha_eL, 6.0, 1e-14);
        EXPECT_NEAR(d.alpha_sL / d.alpha_eL, x * x, 1e-14);
    }
    EXPECT_THROW(split_depth(0.0, 1.0), InvalidArgument);
}

TEST(EchoClosedForm, AgreesWithQuadrature)
{
    for (real th : {pi / 3, pi / 2, 2 * pi / 3}) {
        for (real a0 : {50.0, 400.0, 1500.0}) {
            OracleParams p;
            p.theta0 = th;
            p.alpha0_s = a0;
            p.alpha0_e = a0;
            p.L = 0.01;
            p.phase = 0.4;
            const cplx e = echo_closed_form(p, 0.0, 1.0);
            const real q = quadrature_echo_amplitude(p.alpha_s(), p.alpha_e(), p.L);
            EXPECT_NEAR(std::abs(e), q, 1e-9 * std::max(1.0, q));
            EXPECT_NEAR(std::norm(e), retrieval_efficiency(symmetry_parameter(1.0, th), p.alpha_s() * p.L, p.alpha_e() * p.L),
                        1e-12);
            EXPECT_NEAR(std::abs(e / std::abs(e) - (-I) * std::polar(1.0, 0.4)), 0.0, 1e-12);
        }
    }
}

TEST(EchoClosedForm, VanishesAtExitFaceAndIsLinear)
{
    OracleParams p;
    p.alpha0_s = p.alpha0_e = 300.0;
    p.L = 0.01;
    EXPECT_NEAR(std::abs(echo_closed_form(p, p.L, 1.0)), 0.0, 1e-15);
    const cplx a{0.3, -1.2};
    EXPECT_NEAR(std::abs(echo_closed_form(p, 0.002, a) - a * echo_closed_form(p, 0.002, 1.0)), 0.0, 1e-15);
}

TEST(TransmittedAmplitude, BeerLambert)
{
    OracleParams p;
    p.alpha0_s = 400.0;
    p.L = 0.01;
    p.theta0 = pi / 2;
    EXPECT_NEAR(transmitted_amplitude(p, p.L), std::exp(-0.5 * 200.0 * 0.01), 1e-15);
    EXPECT_EQ(transmitted_amplitude(p, 0.0), 1.0);
}

TEST(StoredCoherences, RatioIsCotHalfAngle)
{
    for (int k = 1; k < 20; ++k) {
        OracleParams p;
        p.theta0 = pi * k / 20.0;
        p.alpha0_s = 100.0;
        p.alpha0_e = 100.0;
        p.L = 0.01;
        p.T = 10e-6;
        const auto s = stored_coherences(p, 2 * pi * 1e5, 0.003, {0.2, 0.1});
        EXPECT_NEAR(std::abs(s.s13) / std::abs(s.s23), 1.0 / std::tan(p.theta0 / 2), 1e-12);
    }
}
