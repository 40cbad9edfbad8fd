// pulse_algebra.hpp - instantaneous RF rotations and optical pi-pulses.
//
// A pulse of area theta and phase phi on a transition lo <-> hi acts on the
// amplitudes as
//
//     c_lo' = cos(theta/2) c_lo - i e^{-i phi} sin(theta/2) c_hi
//     c_hi' = -i e^{+i phi} sin(theta/2) c_lo + cos(theta/2) c_hi
//
// and on coherences <P_ab> = c_a^* c_b as R' = conj(U) R U^T. The spatial
// factor exp(i k.r) is not stored per cell: each ground level carries a
// wavevector tag that is updated alongside the amplitudes.

#pragma once

#include <array>
#include <cmath>

#include "plmqm/ensemble.hpp"

namespace plmqm {

struct RfPulse {
    real area = 0.0;   // theta_0, rad in [0, 2 pi]
    real phase = 0.0;  // phi_0, rad
    WaveVector k{};
};

struct OpticalPiPulse {
    Transition transition = Transition::t14;  // 1-4, 2-4 or 3-s
    real phase = 0.0;
    WaveVector k{};
};

/// RF pulse followed after `tau` by two pi-pulses on 1-4 separated by `T`.
struct PlmPrep {
    RfPulse rf;
    OpticalPiPulse pulse1;
    OpticalPiPulse pulse2;
    real tau = 0.0;
    real T = 0.0;

    /// Phase carried by <P_12> in the simulation frame: phi_0 - phi_1 + phi_2.
    real frame_phase() const { return rf.phase - pulse1.phase + pulse2.phase; }
};

/// Lab-frame composite phase phi_0 - (phi_1 - phi_2) + omega31 T - omega21 tau.
/// The carrier terms are absorbed by the rotating frame and never enter the
/// simulated amplitudes.
inline real composite_phase(const PlmPrep& prep, const LevelScheme& scheme)
{
    return prep.frame_phase() + scheme.omega31 * prep.T - scheme.omega21 * prep.tau;
}

namespace detail {

using Mat2 = std::array<std::array<cplx, 2>, 2>;
using Mat3 = std::array<std::array<cplx, 3>, 3>;

inline Mat2 rotation(real area, real phase)
{
    const real c = std::cos(0.5 * area);
    const real s = std::sin(0.5 * area);
    return {{{cplx{c, 0.0}, -I * std::polar(s, -phase)},
             {-I * std::polar(s, phase), cplx{c, 0.0}}}};
}

// Ground-manifold indices: level 1 -> 0, level 2 -> 1, level 4 -> 2.
inline Mat3 embed(const Mat2& u, int lo, int hi)
{
    Mat3 m{};
    for (int i = 0; i < 3; ++i) m[i][i] = 1.0;
    m[lo][lo] = u[0][0];
    m[lo][hi] = u[0][1];
    m[hi][lo] = u[1][0];
    m[hi][hi] = u[1][1];
    return m;
}

inline Mat3 ground_block(const Site& s)
{
    return {{{cplx{s.n1, 0.0}, s.r12, s.r14},
             {std::conj(s.r12), cplx{s.n2, 0.0}, s.r24},
             {std::conj(s.r14), std::conj(s.r24), cplx{s.n4, 0.0}}}};
}

inline void store_ground_block(Site& s, const Mat3& r)
{
    s.n1 = r[0][0].real();
    s.n2 = r[1][1].real();
    s.n4 = r[2][2].real();
    s.r12 = r[0][1];
    s.r14 = r[0][2];
    s.r24 = r[1][2];
}

// R' = conj(U) R U^T, X' = conj(U) X for a pulse inside {1,2,4}.
inline void apply_ground_unitary(Site& s, const Mat3& u)
{
    const Mat3 r = ground_block(s);
    Mat3 tmp{};
    for (int a = 0; a < 3; ++a)
        for (int d = 0; d < 3; ++d) {
            cplx acc{};
            for (int c = 0; c < 3; ++c) acc += std::conj(u[a][c]) * r[c][d];
            tmp[a][d] = acc;
        }
    Mat3 out{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            cplx acc{};
            for (int d = 0; d < 3; ++d) acc += tmp[a][d] * u[b][d];
            out[a][b] = acc;
        }
    store_ground_block(s, out);

    const std::array<cplx, 3> x3{s.s13, s.s23, s.s43};
    const std::array<cplx, 3> xs{s.s1s, s.s2s, s.s4s};
    std::array<cplx, 3> y3{}, ys{};
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) {
            y3[a] += std::conj(u[a][c]) * x3[c];
            ys[a] += std::conj(u[a][c]) * xs[c];
        }
    s.s13 = y3[0];
    s.s23 = y3[1];
    s.s43 = y3[2];
    s.s1s = ys[0];
    s.s2s = ys[1];
    s.s4s = ys[2];
}

// X' = X U^T for a pulse inside {3, s}; u is written in the (s, 3) basis.
inline void apply_excited_unitary(Site& s, const Mat2& u)
{
    auto mix = [&](cplx& x3, cplx& xs) {
        const cplx new_s = u[0][0] * xs + u[0][1] * x3;
        const cplx new_3 = u[1][0] * xs + u[1][1] * x3;
        xs = new_s;
        x3 = new_3;
    };
    mix(s.s13, s.s1s);
    mix(s.s23, s.s2s);
    mix(s.s43, s.s4s);
}

inline void update_tags(std::array<WaveVector, 3>& tags, int lo, int hi, real area, WaveVector k,
                        real n_lo, real n_hi)
{
    const real c = std::cos(0.5 * area);
    const real s = std::sin(0.5 * area);
    if (std::abs(s) < 1e-15) return;
    if (std::abs(c) < 1e-15) {
        const WaveVector old_lo = tags[lo];
        tags[lo] = tags[hi] - k;
        tags[hi] = old_lo + k;
        return;
    }
    if (n_lo >= n_hi) {
        tags[hi] = tags[lo] + k;
    } else {
        tags[lo] = tags[hi] - k;
    }
}

inline void rotate_ground(EnsembleState& state, int lo, int hi, real area, real phase,
                          WaveVector k)
{
    const Site& ref = state.sites.front();
    const std::array<real, 3> pops{ref.n1, ref.n2, ref.n4};
    const Mat3 u = embed(rotation(area, phase), lo, hi);
    for (auto& s : state.sites) apply_ground_unitary(s, u);
    update_tags(state.ground_k, lo, hi, area, k, pops[lo], pops[hi]);
    state.fresh = false;
}

}  // namespace detail

/// Exact two-level rotation on the 1-2 spin transition.
inline EnsembleState apply_rf_rotation(EnsembleState state, const RfPulse& pulse)
{
    if (!std::isfinite(pulse.area) || !std::isfinite(pulse.phase) || !pulse.k.finite()) {
        throw InvalidArgument("RF pulse parameters must be finite");
    }
    if (pulse.area == 0.0) return state;
    detail::rotate_ground(state, 0, 1, pulse.area, pulse.phase, pulse.k);
    return state;
}

/// Optical pi-pulse on 1-4, 2-4 (ground manifold) or 3-s (shelving).
inline EnsembleState apply_optical_pi(EnsembleState state, const OpticalPiPulse& pulse)
{
    if (!std::isfinite(pulse.phase) || !pulse.k.finite()) {
        throw InvalidArgument("optical pulse parameters must be finite");
    }
    switch (pulse.transition) {
    case Transition::t14: detail::rotate_ground(state, 0, 2, pi, pulse.phase, pulse.k); break;
    case Transition::t24: detail::rotate_ground(state, 1, 2, pi, pulse.phase, pulse.k); break;
    case Transition::t3s: {
        const auto u = detail::rotation(pi, pulse.phase);
        for (auto& s : state.sites) detail::apply_excited_unitary(s, u);
        state.fresh = false;
        break;
    }
    default:
        throw InvalidArgument("optical pi-pulses act on 1-4, 2-4 or 3-s, not " +
                              std::string(to_string(pulse.transition)));
    }
    return state;
}

namespace detail {

inline void check_prep(const PlmPrep& prep)
{
    if (!(prep.T > 0.0) || !(prep.tau >= 0.0) || !std::isfinite(prep.T) ||
        !std::isfinite(prep.tau)) {
        throw InvalidArgument("PLM preparation needs T > 0 and tau >= 0");
    }
    if (prep.pulse1.transition != Transition::t14 || prep.pulse2.transition != Transition::t14) {
        throw InvalidArgument("PLM preparation pulses act on the 1-4 transition");
    }
}

inline bool is_ground_product_state(const EnsembleState& state)
{
    if (!state.fresh) return false;
    for (const auto& s : state.sites) {
        if (s.n1 != 1.0 || s.n2 != 0.0 || s.n4 != 0.0 || s.r12 != cplx{} || s.r14 != cplx{} ||
            s.r24 != cplx{} || s.s13 != cplx{} || s.s23 != cplx{} || s.s43 != cplx{} ||
            s.s1s != cplx{} || s.s2s != cplx{} || s.s4s != cplx{}) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Closed-form PLM preparation starting at the state clock:
///   <P_12> = (i/2) sin(theta_0) exp(i Delta T) exp(i phi),
///   n1 = cos^2(theta_0/2), n2 = sin^2(theta_0/2).
/// Equal (to rounding) to RF, free evolution tau, pi(1-4), free evolution T,
/// pi(1-4) applied one by one.
inline EnsembleState prepare_plm(EnsembleState state, const PlmPrep& prep)
{
    detail::check_prep(prep);
    if (!detail::is_ground_product_state(state)) {
        throw PreconditionViolation("PLM preparation requires a fresh ensemble in level 1");
    }
    const real half = 0.5 * prep.rf.area;
    const real n1 = std::cos(half) * std::cos(half);
    const real n2 = std::sin(half) * std::sin(half);
    const cplx amp = 0.5 * I * std::sin(prep.rf.area) * std::polar(1.0, prep.frame_phase());
    const std::size_t nb = state.bins();
    std::vector<cplx> r12(nb);
    for (std::size_t m = 0; m < nb; ++m) {
        r12[m] = amp * std::polar(1.0, state.spectral.detunings[m] * prep.T);
    }
    for (std::size_t c = 0; c < state.cells(); ++c) {
        for (std::size_t m = 0; m < nb; ++m) {
            Site& s = state.site(c, m);
            s = Site{};
            s.n1 = n1;
            s.n2 = n2;
            s.r12 = r12[m];
        }
    }
    if (prep.rf.area != 0.0) {
        detail::update_tags(state.ground_k, 0, 1, prep.rf.area, prep.rf.k, 1.0, 0.0);
    }
    detail::update_tags(state.ground_k, 0, 2, pi, prep.pulse1.k, n1, 0.0);
    detail::update_tags(state.ground_k, 0, 2, pi, prep.pulse2.k, 0.0, n1);
    state.fresh = false;
    state.clock += prep.tau + prep.T;
    state.prep_time = state.clock;
    return state;
}

/// Two identical pi-pulses on 1-4 (storage time T -> T + T') or 2-4
/// (T -> T - T') separated by free evolution T'.
inline EnsembleState apply_rephasing_pair(EnsembleState state, Transition pair, real t_prime,
                                          const DecayRates& rates = {}, real phase = 0.0,
                                          WaveVector k = {})
{
    if (pair != Transition::t14 && pair != Transition::t24) {
        throw InvalidArgument("rephasing pairs act on 1-4 or 2-4");
    }
    if (!(t_prime > 0.0) || !std::isfinite(t_prime)) {
        throw InvalidArgument("rephasing pair separation must be positive");
    }
    for (const auto& s : state.sites) {
        if (std::abs(s.n4) > 1e-12) {
            throw PreconditionViolation("rephasing pair requires an empty level 4");
        }
    }
    const OpticalPiPulse p{pair, phase, k};
    state = apply_optical_pi(std::move(state), p);
    state = free_evolve(std::move(state), t_prime, rates);
    return apply_optical_pi(std::move(state), p);
}

}  // namespace plmqm
