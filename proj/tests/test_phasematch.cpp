#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace plmqm;

namespace {

WaveVector random_vec(std::mt19937& rng, real scale)
{
    std::normal_distribution<real> nd(0.0, scale);
    return {nd(rng), nd(rng), nd(rng)};
}

// Rotation about an arbitrary axis by Rodrigues' formula.
WaveVector rotate(WaveVector v, WaveVector axis, real angle)
{
    const real n = axis.norm();
    const WaveVector u = (1.0 / n) * axis;
    const WaveVector cross{u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
    return std::cos(angle) * v + std::sin(angle) * cross + (u.dot(v) * (1 - std::cos(angle))) * u;
}

}  // namespace

TEST(PhaseMatch, DegenerateCollinearBackward)
{
    const real k = 1.07e7;
    const auto g = backward_geometry(k, 0.0, k, k, k, 0.01);
    const auto m = echo_wavevector(g);
    EXPECT_EQ(m.residual, 0.0);
    EXPECT_TRUE(m.matched);
    EXPECT_TRUE(m.backward);
    EXPECT_TRUE(m.matched_backward);
    EXPECT_EQ(m.k_e, (WaveVector{0, 0, -k}));
}

TEST(PhaseMatch, EchoIsSignalPlusScatteredOnRandomGeometries)
{
    std::mt19937 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        Geometry g;
        g.k_s = random_vec(rng, 1e7);
        g.k0 = random_vec(rng, 10.0);
        g.k1 = random_vec(rng, 1e7);
        g.k2 = random_vec(rng, 1e7);
        g.k31 = 1e7;
        g.L = 0.01;
        const auto m = echo_wavevector(g);
        const WaveVector want{g.k_s.x + (g.k0.x - g.k1.x + g.k2.x), g.k_s.y + (g.k0.y - g.k1.y + g.k2.y),
                              g.k_s.z + (g.k0.z - g.k1.z + g.k2.z)};
        EXPECT_EQ(m.k_e, want);
        const real res = std::abs(std::sqrt(want.dot(want)) - g.k31) * g.L;
        EXPECT_NEAR(m.residual, res, 1e-9 * std::max(1.0, res));
        EXPECT_EQ(m.matched, m.residual <= g.tolerance);
        EXPECT_EQ(m.backward, want.z < 0);
    }
}

TEST(PhaseMatch, RotationInvariantResidual)
{
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        Geometry g;
        g.k_s = random_vec(rng, 1e7);
        g.k0 = random_vec(rng, 1e3);
        g.k1 = random_vec(rng, 1e7);
        g.k2 = random_vec(rng, 1e7);
        g.k31 = 1.2e7;
        g.L = 0.005;
        const WaveVector axis = random_vec(rng, 1.0);
        const real ang = std::uniform_real_distribution<real>(0, 2 * pi)(rng);
        Geometry r = g;
        for (auto* v : {&r.k_s, &r.k0, &r.k1, &r.k2}) *v = rotate(*v, axis, ang);
        EXPECT_NEAR(echo_wavevector(r).residual, echo_wavevector(g).residual, 1e-6);
    }
}

TEST(PhaseMatch, ToleranceMonotone)
{
    std::mt19937 rng(9);
    for (int i = 0; i < 200; ++i) {
        Geometry g = backward_geometry(1e7, 1e7, 1e7, 1e7, 1e7, 0.01);
        g.k2 = g.k2 + random_vec(rng, 20.0);
        bool prev = false;
        for (real eps : {1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0}) {
            g.tolerance = eps;
            const bool now = echo_wavevector(g).matched;
            EXPECT_TRUE(!prev || now);
            prev = now;
        }
    }
}

TEST(PhaseMatch, MismatchedForwardGeometry)
{
    // Co-propagating preparation pulses: delta k_sc ~ 0, echo forward along k_s.
    const real k = 1e7;
    Geometry g;
    g.k_s = {0, 0, k};
    g.k1 = {0, 0, k};
    g.k2 = {0, 0, k};
    g.k31 = k * 1.0001;
    g.L = 0.01;
    const auto m = echo_wavevector(g);
    EXPECT_FALSE(m.backward);
    EXPECT_FALSE(m.matched);
    EXPECT_NEAR(m.residual, 10.0, 1e-6);
}

TEST(PhaseMatch, RamanOutputs)
{
    Geometry g = backward_geometry(1e7, 0.0, 1e7, 1e7, 1e7, 0.01);
    EXPECT_THROW(raman_output_wavevectors(g), InvalidArgument);
    g.k_W = WaveVector{0, 0, 1e7};
    g.k_R1 = WaveVector{0, 0, -1e7};
    const auto r = raman_output_wavevectors(g);
    EXPECT_EQ(r.k_out1, (WaveVector{0, 0, -1e7}));
    EXPECT_EQ(r.k_out2, r.k_out1 + scattered_wavevector(g.k0, g.k1, g.k2));
}

TEST(PhaseMatch, InvalidInputs)
{
    Geometry g = backward_geometry(1, 1, 1, 1, 1, 0.01);
    g.k31 = 0.0;
    EXPECT_THROW(echo_wavevector(g), InvalidArgument);
    g.k31 = 1.0;
    g.tolerance = 0.0;
    EXPECT_THROW(echo_wavevector(g), InvalidArgument);
}
