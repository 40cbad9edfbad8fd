// oracle.hpp - closed-form storage and echo solutions.

#pragma once

#include <cmath>

#include "plmqm/types.hpp"

namespace plmqm {

struct OracleParams {
    real theta0 = pi / 2;
    real coupling_ratio = 1.0;  // |g_s / g_e|
    real alpha0_s = 0.0;        // 1/m
    real alpha0_e = 0.0;        // 1/m
    real L = 1.0;               // m
    real T = 0.0;               // s
    real phase = 0.0;           // composite phase phi
    real v_g = 1.0;             // m/s

    real alpha_s() const
    {
        const real s = std::sin(0.5 * theta0);
        return alpha0_s * s * s;
    }
    real alpha_e() const
    {
        const real c = std::cos(0.5 * theta0);
        return alpha0_e * c * c;
    }
};

inline void validate_oracle_params(const OracleParams& p)
{
    if (!(p.coupling_ratio > 0.0)) throw InvalidArgument("coupling ratio must be positive");
    if (!(p.L > 0.0)) throw InvalidArgument("medium length must be positive");
    if (p.alpha0_s < 0.0 || p.alpha0_e < 0.0) throw InvalidArgument("absorption must be non-negative");
}

/// x = |g_s/g_e| tan(theta0 / 2).
inline real symmetry_parameter(real coupling_ratio, real theta0)
{
    if (!(coupling_ratio > 0.0)) throw InvalidArgument("coupling ratio must be positive");
    if (theta0 <= 0.0 || theta0 >= pi) {
        throw SingularArgument("symmetry parameter needs theta0 strictly inside (0, pi)");
    }
    return coupling_ratio * std::tan(0.5 * theta0);
}

inline bool symmetry_condition_met(real x, real tolerance = 1e-9)
{
    return std::abs(x - 1.0) < tolerance;
}

/// Signal amplitude envelope factor exp(-alpha_s z / 2).
inline real transmitted_amplitude(const OracleParams& p, real z)
{
    validate_oracle_params(p);
    if (z < 0.0 || z > p.L) throw InvalidArgument("z outside the medium");
    return std::exp(-0.5 * p.alpha_s() * z);
}

struct StoredCoherences {
    cplx s23;
    cplx s13;
};

/// Stored optical coherences right after the signal (t = t_s), unit coupling.
/// `spectrum` is the input Fourier component at detuning delta.
inline StoredCoherences stored_coherences(const OracleParams& p, real delta, real z, cplx spectrum)
{
    if (!std::isfinite(spectrum.real()) || !std::isfinite(spectrum.imag())) {
        throw InvalidArgument("input spectrum value must be finite");
    }
    const real att = std::exp(-0.5 * p.alpha_s() * z);
    const real s = std::sin(0.5 * p.theta0);
    StoredCoherences out;
    out.s23 = -I * s * s * att * spectrum;
    out.s13 = 0.5 * std::sin(p.theta0) * std::polar(1.0, p.phase + delta * p.T) * att * spectrum;
    return out;
}

/// Echo prefactor -i 2x e^{i phi} / (1 + x^2) times the spatial bracket.
/// `input` is the signal envelope evaluated at t - t_s - T + z / v_g.
inline cplx echo_closed_form(const OracleParams& p, real z, cplx input)
{
    validate_oracle_params(p);
    if (z < 0.0 || z > p.L) throw InvalidArgument("z outside the medium");
    const real half = 0.5 * p.theta0;
    const real rt = p.coupling_ratio * std::tan(half);
    const real pref = 2.0 * rt / (1.0 + rt * rt);
    const real as = p.alpha_s();
    const real ae = p.alpha_e();
    const real bracket =
        std::exp(0.5 * ae * z) * (std::exp(-0.5 * (ae + as) * z) - std::exp(-0.5 * (ae + as) * p.L));
    return -I * pref * std::polar(1.0, p.phase) * input * bracket;
}

/// Energy efficiency at z = 0: [2x / (1 + x^2)]^2 (1 - e^{-(a_s L + a_e L)/2})^2.
inline real retrieval_efficiency(real x, real alpha_sL, real alpha_eL)
{
    if (!(x >= 0.0)) throw InvalidArgument("symmetry parameter must be non-negative");
    if (alpha_sL < 0.0 || alpha_eL < 0.0) throw InvalidArgument("optical depth must be non-negative");
    if (std::isinf(x)) return 0.0;
    const real pref = 2.0 * x / (1.0 + x * x);
    const real b = -std::expm1(-0.5 * (alpha_sL + alpha_eL));
    return pref * pref * b * b;
}

/// Depth split for a given x and total depth D: alpha_s L = D x^2/(1+x^2).
struct DepthSplit {
    real alpha_sL;
    real alpha_eL;
};

inline DepthSplit split_depth(real x, real total_depth)
{
    if (!(x > 0.0) || !(total_depth >= 0.0)) throw InvalidArgument("need x > 0 and depth >= 0");
    const real f = x * x / (1.0 + x * x);
    return {total_depth * f, total_depth * (1.0 - f)};
}

}  // namespace plmqm
