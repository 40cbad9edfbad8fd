// protocols.hpp - timeline builders for the memory variants, timescale
// checks and the luminescence noise estimate.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "plmqm/field.hpp"
#include "plmqm/timeline.hpp"

namespace plmqm {

enum class SignalShape { gaussian, gaussian_pair };

inline std::string_view to_string(SignalShape s)
{
    return s == SignalShape::gaussian ? "gaussian" : "gaussian_pair";
}

inline SignalShape signal_shape_from_string(std::string_view s)
{
    if (s == "gaussian") return SignalShape::gaussian;
    if (s == "gaussian_pair") return SignalShape::gaussian_pair;
    throw InvalidConfig("unknown signal shape '" + std::string(s) + "'");
}

struct ProtocolParams {
    real theta0 = pi / 2;
    real rf_phase = 0.0;
    real phase1 = 0.0;
    real phase2 = 0.0;
    WaveVector k0{}, k1{}, k2{};
    real tau = 1e-6;       // RF -> first pi-pulse, s
    real T = 100e-6;       // pi-pulse separation, s
    real t0 = 5e-6;        // last preparation pulse -> first signal sample, s
    real signal_fwhm = 10e-6;
    real dt = 0.8e-6;
    real half_window = 2.5;      // signal half-window in units of the FWHM
    real echo_margin = 3.0;      // recorded time after the expected echo, FWHM units
    SignalShape shape = SignalShape::gaussian;
    real pair_ratio = 0.5;
    cplx amplitude = 1.0;
};

inline void validate_params(const ProtocolParams& p)
{
    auto positive = [](real v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidConfig(std::string(name) + " must be positive");
    };
    positive(p.T, "T");
    positive(p.signal_fwhm, "signal FWHM");
    positive(p.dt, "time step");
    positive(p.half_window, "signal half-window");
    positive(p.echo_margin, "echo margin");
    if (!(p.tau >= 0.0) || !std::isfinite(p.tau)) throw InvalidConfig("tau must be non-negative");
    if (!(p.t0 >= 2.0 * p.dt)) throw InvalidConfig("t0 must span at least two time steps");
    if (!(p.theta0 >= 0.0 && p.theta0 <= 2.0 * pi)) throw InvalidConfig("theta0 must lie in [0, 2 pi]");
    if (!std::isfinite(p.rf_phase) || !std::isfinite(p.phase1) || !std::isfinite(p.phase2)) {
        throw InvalidConfig("pulse phases must be finite");
    }
}

namespace detail {

inline FieldEnvelope make_signal(const ProtocolParams& p, real start)
{
    const real hw = p.half_window * p.signal_fwhm;
    const auto half_steps = static_cast<std::size_t>(std::ceil(hw / p.dt - 1e-9));
    const real center = start + static_cast<real>(half_steps) * p.dt;
    FieldEnvelope f = p.shape == SignalShape::gaussian
                          ? gaussian_pulse(center, p.signal_fwhm, p.dt, hw, p.amplitude)
                          : gaussian_pair_pulse(center, p.signal_fwhm, p.dt, hw, p.pair_ratio, p.amplitude);
    f.start_time = start;
    return f;
}

struct Builder {
    const ProtocolParams& p;
    ProtocolTimeline tl;
    real cursor = 0.0;  // time of the last instantaneous pulse

    void prep()
    {
        tl.events.push_back({0.0, RfPulse{p.theta0, p.rf_phase, p.k0}});
        tl.events.push_back({p.tau > 0.0 ? p.tau : 0.5 * p.dt,
                             OpticalPiPulse{Transition::t14, p.phase1, p.k1}});
        cursor = tl.events.back().time + p.T;
        tl.events.push_back({cursor, OpticalPiPulse{Transition::t14, p.phase2, p.k2}});
    }

    void pulse(real t, Action a)
    {
        tl.events.push_back({t, std::move(a)});
        cursor = t;
    }

    // Hold until the signal, then absorb; returns a copy of the signal.
    FieldEnvelope absorb()
    {
        const real start = cursor + p.t0;
        FieldEnvelope sig = make_signal(p, start);
        tl.events.push_back({cursor + p.dt, Hold{p.t0 - p.dt}});
        tl.events.push_back({start, Absorb{sig}});
        return sig;
    }

    void retrieve(real at, real expected, Transition carrier)
    {
        const real end = expected + p.echo_margin * p.signal_fwhm;
        if (!(end > at)) throw InvalidConfig("echo would be emitted before the retrieval stage");
        tl.events.push_back({at, Retrieve{end - at, carrier}});
        tl.expected_echo_time = expected;
        tl.echo_carrier = carrier;
    }
};

inline void check_echo_after_absorb(const FieldEnvelope& f, real expected)
{
    if (!(expected > f.end_time())) {
        throw InvalidConfig("expected echo falls inside the signal window");
    }
}

}  // namespace detail

inline ProtocolTimeline build_basic(const ProtocolParams& p)
{
    validate_params(p);
    detail::Builder b{p, {}};
    b.tl.variant = Variant::basic;
    b.prep();
    const FieldEnvelope sig = b.absorb();
    const real expected = sig.reference_time + p.T;
    detail::check_echo_after_absorb(sig, expected);
    b.retrieve(sig.end_time(), expected, Transition::t13);
    validate_timeline(b.tl);
    return b.tl;
}

/// RF pi-pulse after absorption moves the stored coherence onto 2-3.
inline ProtocolTimeline build_frequency_preserving(const ProtocolParams& p)
{
    if (std::abs(p.theta0 - pi / 2) > 1e-12) {
        throw InvalidConfig("frequency-preserving variant requires theta0 = pi/2");
    }
    validate_params(p);
    detail::Builder b{p, {}};
    b.tl.variant = Variant::frequency_preserving;
    b.prep();
    const FieldEnvelope sig = b.absorb();
    const real expected = sig.reference_time + p.T;
    detail::check_echo_after_absorb(sig, expected);
    const real t_rf = sig.end_time();
    b.pulse(t_rf, RfPulse{pi, 0.0, {}});
    b.retrieve(t_rf + p.dt, expected, Transition::t23);
    validate_timeline(b.tl);
    return b.tl;
}

/// A pi-pulse pair separated by t_prime before the signal: 1-4 lengthens the
/// storage time to T + T', 2-4 shortens it to T - T'.
inline ProtocolTimeline build_reprogrammed(const ProtocolParams& p, real t_prime, Transition pair,
                                           real pair_delay = 0.0)
{
    if (pair != Transition::t14 && pair != Transition::t24) {
        throw InvalidConfig("reprogramming pair must act on 1-4 or 2-4");
    }
    if (!(t_prime >= 0.0) || !std::isfinite(t_prime)) throw InvalidConfig("T' must be non-negative");
    if (t_prime == 0.0) return build_basic(p);
    if (pair == Transition::t24 && !(t_prime < p.T)) {
        throw InvalidConfig("2-4 pair needs T' < T so the echo follows the signal");
    }
    validate_params(p);
    detail::Builder b{p, {}};
    b.tl.variant = Variant::reprogrammed;
    b.prep();
    const real first = b.cursor + std::max(pair_delay, p.dt);
    b.pulse(first, OpticalPiPulse{pair, 0.0, {}});
    b.pulse(first + t_prime, OpticalPiPulse{pair, 0.0, {}});
    const FieldEnvelope sig = b.absorb();
    const real expected = sig.reference_time + (pair == Transition::t14 ? p.T + t_prime : p.T - t_prime);
    detail::check_echo_after_absorb(sig, expected);
    b.retrieve(sig.end_time(), expected, Transition::t13);
    validate_timeline(b.tl);
    return b.tl;
}

/// Shelving pi-pulses on 3-s at t_s + t1 and at the absolute time t_read.
inline ProtocolTimeline build_on_demand(const ProtocolParams& p, real t1, real t_read)
{
    validate_params(p);
    if (!(t1 < p.T)) throw InvalidConfig("on-demand readout needs t1 < T");
    if (!(t1 > 0.0)) throw InvalidConfig("t1 must be positive");
    detail::Builder b{p, {}};
    b.tl.variant = Variant::on_demand;
    b.prep();
    const FieldEnvelope sig = b.absorb();
    const real t_s = sig.reference_time;
    const real sig_end = sig.end_time();
    const real t_shelf = t_s + t1;
    if (t_shelf < sig_end - 1e-9 * std::abs(sig_end)) {
        throw InvalidConfig("first shelving pulse overlaps the signal window");
    }
    if (!(t_read > t_shelf)) throw InvalidConfig("readout pulse must follow the shelving pulse");
    b.pulse(t_shelf, OpticalPiPulse{Transition::t3s, 0.0, {}});
    b.pulse(t_read, OpticalPiPulse{Transition::t3s, 0.0, {}});
    const real expected = t_read + (p.T - t1);
    b.retrieve(t_read + p.dt, expected, Transition::t13);
    validate_timeline(b.tl);
    return b.tl;
}

// ---------------------------------------------------------------------------

struct TimescaleBudget {
    std::optional<real> T2_star;
    std::optional<real> dt_s;
    std::optional<real> dt_pulse;
    std::optional<real> T;
    std::optional<real> T_prime;
    std::optional<real> tau;
    std::optional<real> t0;
    std::optional<real> T2_opt;
    std::optional<real> T2_spin;
    std::optional<real> T1_opt;
};

struct ConstraintResult {
    std::string name;
    bool passed = true;
    bool skipped = false;
    real lhs = 0.0;
    real rhs = 0.0;
};

struct TimescaleReport {
    std::vector<ConstraintResult> rows;

    bool all_passed() const
    {
        for (const auto& r : rows)
            if (!r.skipped && !r.passed) return false;
        return true;
    }

    std::vector<std::string> failed() const
    {
        std::vector<std::string> out;
        for (const auto& r : rows)
            if (!r.skipped && !r.passed) out.push_back(r.name);
        return out;
    }
};

inline TimescaleReport validate_timescales(const TimescaleBudget& b, real margin = 10.0)
{
    if (!(margin > 0.0)) throw InvalidArgument("margin must be positive");
    TimescaleReport rep;
    // lhs <= rhs (or < when strict); rhs already scaled by the margin.
    auto row = [&](const char* name, const std::optional<real>& a, const std::optional<real>& c,
                   real scale_a, real scale_c, bool strict) {
        ConstraintResult r;
        r.name = name;
        if (!a || !c) {
            r.skipped = true;
        } else {
            r.lhs = *a * scale_a;
            r.rhs = *c * scale_c;
            r.passed = strict ? r.lhs < r.rhs : r.lhs <= r.rhs;
        }
        rep.rows.push_back(r);
    };
    row("T2_star << dt_s", b.T2_star, b.dt_s, 1.0, 1.0 / margin, false);
    row("dt_pulse << dt_s", b.dt_pulse, b.dt_s, 1.0, 1.0 / margin, false);
    row("T >> T2_star", b.T2_star, b.T, margin, 1.0, false);
    row("T < T2_opt", b.T, b.T2_opt, 1.0, 1.0, true);
    row("tau << T2_spin", b.tau, b.T2_spin, 1.0, 1.0 / margin, false);
    row("t0 < T2_spin", b.t0, b.T2_spin, 1.0, 1.0, true);
    return rep;
}

struct NoiseConfig {
    real pulse_error = 0.0;   // residual excited fraction per imperfect pi-pulse
    real atom_number = 0.0;   // N
    real t0 = 0.0;            // s
    real T1_opt = 1.0;        // s
    real gate = 0.0;          // detection gate, s
    real collection = 1.0;    // geometric collection factor
};

struct NoiseEstimate {
    real mu_noise = 0.0;
    real snr = 0.0;
};

inline NoiseEstimate estimate_noise(const NoiseConfig& n, real eta, real n_signal_photons)
{
    if (!(n.pulse_error >= 0.0 && n.pulse_error <= 1.0)) throw InvalidArgument("pulse error must lie in [0, 1]");
    if (!(n.collection > 0.0 && n.collection <= 1.0)) throw InvalidArgument("collection factor must lie in (0, 1]");
    if (!(n.T1_opt > 0.0)) throw InvalidArgument("T1_opt must be positive");
    if (n.atom_number < 0.0 || n.gate < 0.0 || n.t0 < 0.0) {
        throw InvalidArgument("atom number, gate and t0 must be non-negative");
    }
    NoiseEstimate e;
    e.mu_noise = n.atom_number * n.pulse_error * n.collection * (n.gate / n.T1_opt) *
                 std::exp(-n.t0 / n.T1_opt);
    e.snr = e.mu_noise == 0.0 ? std::numeric_limits<real>::infinity()
                              : eta * n_signal_photons / e.mu_noise;
    return e;
}

/// Incomplete initial spin polarization p scales the stored amplitude by p.
inline real polarization_limited_efficiency(real eta, real polarization)
{
    if (!(polarization >= 0.0 && polarization <= 1.0)) {
        throw InvalidArgument("spin polarization must lie in [0, 1]");
    }
    return eta * polarization * polarization;
}

}  // namespace plmqm
