// phasematch.hpp - wavevector bookkeeping for the echo and Raman outputs.

#pragma once

#include <cmath>
#include <optional>

#include "plmqm/types.hpp"

namespace plmqm {

struct Geometry {
    WaveVector k_s{}, k0{}, k1{}, k2{};
    std::optional<WaveVector> k_W;
    std::optional<WaveVector> k_R1;
    real k31 = 0.0;  // |k(omega31)|, rad/m
    real k32 = 0.0;  // |k(omega32)|, rad/m
    real L = 1.0;    // m
    real tolerance = 0.1;
};

/// delta k_sc = k0 - k1 + k2.
inline WaveVector scattered_wavevector(const WaveVector& k0, const WaveVector& k1,
                                       const WaveVector& k2)
{
    return k0 - k1 + k2;
}

struct EchoMatch {
    WaveVector k_e{};
    real residual = 0.0;   // | |k_e| - |k(omega31)| | L
    bool matched = false;  // residual within tolerance
    bool backward = false;
    bool matched_backward = false;
};

inline EchoMatch echo_wavevector(const Geometry& g)
{
    if (!(g.k31 > 0.0)) throw InvalidArgument("target |k(omega31)| must be positive");
    if (!(g.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (!(g.L > 0.0)) throw InvalidArgument("medium length must be positive");
    EchoMatch m;
    m.k_e = g.k_s + scattered_wavevector(g.k0, g.k1, g.k2);
    m.residual = std::abs(m.k_e.norm() - g.k31) * g.L;
    m.matched = m.residual <= g.tolerance;
    m.backward = m.k_e.z < 0.0;
    m.matched_backward = m.matched && m.backward;
    return m;
}

struct RamanOutputs {
    WaveVector k_out1{};
    WaveVector k_out2{};
};

/// k_out1 = k_s - k_W + k_R1, k_out2 = k_out1 + delta k_sc.
inline RamanOutputs raman_output_wavevectors(const Geometry& g)
{
    if (!g.k_W || !g.k_R1) throw InvalidArgument("Raman geometry needs k_W and k_R1");
    RamanOutputs r;
    r.k_out1 = g.k_s - *g.k_W + *g.k_R1;
    r.k_out2 = r.k_out1 + scattered_wavevector(g.k0, g.k1, g.k2);
    return r;
}

/// Collinear backward layout: k_s, k0, k1 along +z, k2 along -z.
inline Geometry backward_geometry(real ks, real k0, real k1, real k2, real k31, real L,
                                  real tolerance = 0.1)
{
    Geometry g;
    g.k_s = {0.0, 0.0, ks};
    g.k0 = {0.0, 0.0, k0};
    g.k1 = {0.0, 0.0, k1};
    g.k2 = {0.0, 0.0, -k2};
    g.k31 = k31;
    g.L = L;
    g.tolerance = tolerance;
    return g;
}

}  // namespace plmqm
