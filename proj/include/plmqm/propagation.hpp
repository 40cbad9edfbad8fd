// propagation.hpp - coupled light-atom propagation for the storage (forward,
// 2-3) and retrieval (backward, 1-3 or 2-3) stages, plus timeline execution.
//
// Model, in the retarded frame of the travelling field:
//
//     +-d_z b = i g P,          P = sum_m w_m <P_k3>(Delta_m)
//     d_t <P_a3> = -(i Delta + gamma_o) <P_a3> + i g R_ak b
//
// where k is the ground level coupled by the field (2 for the signal, 1 for
// the echo on 1-3) and R_ak = <P_ak>. The coupling g is calibrated from the
// resonant absorption coefficient, g^2 = alpha_0 / (2 pi G(0)), so that a
// spectrally narrow pulse decays as exp(-alpha_0 n_k z / 2).
//
// Scheme: exponential time differencing per spectral bin with the field taken
// piecewise linear in time (exact for any Delta dt), and an implicit midpoint
// update of the field across each cell. Each time step is one bin-summation
// pass over all cells (parallel over cells, fixed bin order inside a cell) and
// one scalar sweep along z, so results do not depend on the worker count.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "plmqm/ensemble.hpp"
#include "plmqm/field.hpp"
#include "plmqm/pulse_algebra.hpp"
#include "plmqm/timeline.hpp"

namespace plmqm {

struct StageConfig {
    real alpha0_s = 0.0;  // resonant absorption coefficient on 2-3, 1/m
    real alpha0_e = 0.0;  // resonant absorption coefficient on 1-3, 1/m
    real dt = 0.0;        // s
    int threads = 1;

    /// |g_s / g_e| implied by the two absorption coefficients.
    real coupling_ratio() const { return std::sqrt(alpha0_s / alpha0_e); }
};

inline void validate_stage_config(const StageConfig& cfg)
{
    if (!(cfg.alpha0_s >= 0.0) || !(cfg.alpha0_e >= 0.0) || !std::isfinite(cfg.alpha0_s) ||
        !std::isfinite(cfg.alpha0_e)) {
        throw InvalidConfig("absorption coefficients must be finite and non-negative");
    }
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
        throw InvalidConfig("time step must be positive");
    }
    if (cfg.threads < 1) {
        throw InvalidConfig("thread count must be at least 1");
    }
}

/// Broadband threshold on delta_in * (pulse FWHM) below which a warning is raised.
inline constexpr real broadband_threshold = 20.0;

struct AbsorptionResult {
    EnsembleState state;
    FieldEnvelope transmitted;
    std::vector<std::string> warnings;
};

struct RetrievalResult {
    EnsembleState state;
    FieldEnvelope echo;
};

namespace detail {

// f1(h) = (1 - e^-h)/h, f2(h) = (1 - e^-h (1 + h))/h^2.
inline void etd_weights(cplx h, cplx& f1, cplx& f2)
{
    if (std::abs(h) < 0.1) {
        cplx term = 1.0;
        f1 = 0.0;
        f2 = 0.0;
        for (int k = 0; k <= 10; ++k) {
            f1 += term / static_cast<real>(k + 1);
            f2 += term / static_cast<real>(k + 2);
            term *= -h / static_cast<real>(k + 1);
        }
        return;
    }
    const cplx e = std::exp(-h);
    f1 = (1.0 - e) / h;
    f2 = (1.0 - e * (1.0 + h)) / (h * h);
}

inline real line_center_density(const SpectralGrid& g)
{
    const real d = g.density_at(0.0);
    if (!(d > 0.0)) throw InvalidConfig("spectral grid has no weight at line centre");
    return d;
}

inline real coupling_from_alpha(const SpectralGrid& g, real alpha0)
{
    return std::sqrt(alpha0 / (2.0 * pi * line_center_density(g)));
}

inline int worker_count(int requested)
{
    return std::max(1, requested);
}

inline void require_empty_level4(const EnsembleState& state)
{
    for (const auto& s : state.sites) {
        if (std::abs(s.n4) > 1e-12 || std::abs(s.r14) > 1e-12 || std::abs(s.r24) > 1e-12) {
            throw InvalidConfig("level 4 must be empty during a propagation stage");
        }
    }
}

/// One propagation stage of `steps` time steps. `entry` gives the field at
/// the entry face for each time level 0..steps (missing entries are zero).
/// Returns the field at the exit face for each time level.
inline std::vector<cplx> run_stage(EnsembleState& state, Transition carrier, Direction dir,
                                   const std::vector<cplx>& entry, std::size_t steps, real dt,
                                   real g, const DecayRates& rates, int threads)
{
    const std::size_t nc = state.cells();
    const std::size_t nb = state.bins();
    const std::size_t n = nc * nb;
    const real dz = state.spatial.dz();
    const bool on_level1 = carrier == Transition::t13;

    // Per-bin ETD coefficients, shared by <P_13> and <P_23>.
    std::vector<cplx> E(nb), phi0(nb), phi1(nb), psi(nb);
    for (std::size_t m = 0; m < nb; ++m) {
        const cplx lambda{rates.gamma_o, state.spectral.detunings[m]};
        const cplx h = lambda * dt;
        cplx f1, f2;
        etd_weights(h, f1, f2);
        E[m] = std::exp(-h);
        phi0[m] = dt * f2;
        phi1[m] = dt * (f1 - f2);
        psi[m] = E[m] * phi1[m] + phi0[m];
    }
    const auto& w = state.spectral.weights;

    // Structure-of-arrays working copy. xk is the coherence that radiates into
    // the field, xo the passive partner driven through the spin coherence.
    std::vector<cplx> xk(n), xo(n), dk(n), do_(n);
    std::vector<cplx> kcell(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        cplx ksum{};
        for (std::size_t m = 0; m < nb; ++m) {
            const std::size_t j = c * nb + m;
            const Site& s = state.sites[j];
            if (on_level1) {
                xk[j] = s.s13;
                xo[j] = s.s23;
                dk[j] = I * g * s.n1;               // R_11
                do_[j] = I * g * std::conj(s.r12);  // R_21
            } else {
                xk[j] = s.s23;
                xo[j] = s.s13;
                dk[j] = I * g * s.n2;  // R_22
                do_[j] = I * g * s.r12;  // R_12
            }
            ksum += w[m] * dk[j] * phi1[m];
        }
        kcell[c] = ksum;
    }

    std::vector<cplx> face(nc + 1), center(nc), acell(nc);
    std::vector<cplx> exit(steps + 1);
    auto entry_at = [&](std::size_t k) { return k < entry.size() ? entry[k] : cplx{}; };

    // Field at time level 0 from the initial polarization (fully known).
    for (std::size_t c = 0; c < nc; ++c) {
        cplx p{};
        for (std::size_t m = 0; m < nb; ++m) p += w[m] * xk[c * nb + m];
        acell[c] = p;
    }
    auto sweep = [&](std::size_t level, bool implicit) {
        if (dir == Direction::forward) {
            face[0] = entry_at(level);
            for (std::size_t c = 0; c < nc; ++c) {
                const cplx kk = implicit ? kcell[c] : cplx{};
                const cplx a = I * g * dz * 0.5 * kk;
                face[c + 1] = (face[c] * (1.0 + a) + I * g * dz * acell[c]) / (1.0 - a);
                center[c] = 0.5 * (face[c] + face[c + 1]);
            }
            exit[level] = face[nc];
        } else {
            face[nc] = entry_at(level);
            for (std::size_t c = nc; c-- > 0;) {
                const cplx kk = implicit ? kcell[c] : cplx{};
                const cplx a = I * g * dz * 0.5 * kk;
                face[c] = (face[c + 1] * (1.0 + a) + I * g * dz * acell[c]) / (1.0 - a);
                center[c] = 0.5 * (face[c] + face[c + 1]);
            }
            exit[level] = face[0];
        }
    };
    sweep(0, false);

    // Spin coherence driving xo, decayed to the middle of each step.
    auto spin_at = [&](std::size_t step) {
        return rates.gamma_s != 0.0 ? std::exp(-rates.gamma_s * (static_cast<real>(step) + 0.5) * dt) : 1.0;
    };
    const int workers = worker_count(threads);
    const auto ncells = static_cast<long>(nc);
    for (std::size_t step = 0; step < steps; ++step) {
        // x holds the complete coherences on the first step and the
        // partial update (missing the phi1 * b_c^{n} term) afterwards.
        const std::vector<cplx>& coef = step == 0 ? phi0 : psi;
        const real sf = spin_at(step);
#pragma omp parallel for schedule(static) num_threads(workers)
        for (long cl = 0; cl < ncells; ++cl) {
            const auto c = static_cast<std::size_t>(cl);
            const cplx bc = center[c];
            cplx p{};
            const std::size_t base = c * nb;
            for (std::size_t m = 0; m < nb; ++m) {
                const std::size_t j = base + m;
                const cplx cb = coef[m] * bc;
                xk[j] = E[m] * xk[j] + dk[j] * cb;
                xo[j] = E[m] * xo[j] + sf * do_[j] * cb;
                p += w[m] * xk[j];
            }
            acell[c] = p;
        }
        sweep(step + 1, true);
        for (std::size_t c = 0; c < nc; ++c) {
            if (!std::isfinite(acell[c].real()) || !std::isfinite(acell[c].imag())) {
                throw NumericalFailure("non-finite polarization in propagation stage");
            }
        }
    }
    // Complete the last partial update.
    if (steps > 0) {
        const real sf = spin_at(steps - 1);
#pragma omp parallel for schedule(static) num_threads(workers)
        for (long cl = 0; cl < ncells; ++cl) {
            const auto c = static_cast<std::size_t>(cl);
            const cplx bc = center[c];
            const std::size_t base = c * nb;
            for (std::size_t m = 0; m < nb; ++m) {
                const std::size_t j = base + m;
                xk[j] += dk[j] * phi1[m] * bc;
                xo[j] += sf * do_[j] * phi1[m] * bc;
            }
        }
    }
    for (const auto& v : exit) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalFailure("non-finite field in propagation stage");
        }
    }

    // Write back; spin coherences precess trivially and only decay.
    const real duration = static_cast<real>(steps) * dt;
    const real spin = rates.gamma_s != 0.0 ? std::exp(-rates.gamma_s * duration) : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        Site& s = state.sites[j];
        if (on_level1) {
            s.s13 = xk[j];
            s.s23 = xo[j];
        } else {
            s.s23 = xk[j];
            s.s13 = xo[j];
        }
        s.r12 *= spin;
        s.s1s *= spin;
        s.s2s *= spin;
    }
    state.clock += duration;
    return exit;
}

/// Per-cell field-free evolution by durations[c] (light-transit frame shifts).
inline void evolve_cells(EnsembleState& state, const std::vector<real>& durations,
                         const DecayRates& rates)
{
    const std::size_t nb = state.bins();
    for (std::size_t c = 0; c < state.cells(); ++c) {
        const real d = durations[c];
        if (d <= 0.0) continue;
        const auto f = decay_factors(rates, {d, d});
        for (std::size_t m = 0; m < nb; ++m) {
            Site& s = state.site(c, m);
            precess_site(s, state.spectral.detunings[m], d);
            if (!rates.ideal()) scale_site(s, f);
        }
    }
}

}  // namespace detail

/// Excitation stored in the medium, in units of the field energy sum |b|^2 dt.
inline real stored_excitation(const EnsembleState& state)
{
    const real dz = state.spatial.dz();
    real acc = 0.0;
    for (std::size_t c = 0; c < state.cells(); ++c) {
        for (std::size_t m = 0; m < state.bins(); ++m) {
            const Site& s = state.site(c, m);
            acc += state.spectral.weights[m] *
                   (std::norm(s.s13) + std::norm(s.s23) + std::norm(s.s43) + std::norm(s.s1s) +
                    std::norm(s.s2s) + std::norm(s.s4s));
        }
    }
    return acc * dz;
}

/// Forward propagation of the signal through the prepared medium.
inline AbsorptionResult propagate_absorption(EnsembleState state, const FieldEnvelope& input,
                                             const StageConfig& cfg, const DecayRates& rates = {})
{
    validate_stage_config(cfg);
    if (input.carrier != Transition::t23 || input.direction != Direction::forward) {
        throw InvalidConfig("signal must be a forward field on the 2-3 transition");
    }
    if (!input.finite()) throw InvalidConfig("signal samples must be finite");
    AbsorptionResult out;
    if (!input.samples.empty()) {
        if (std::abs(input.dt - cfg.dt) > 1e-9 * cfg.dt) {
            throw InvalidConfig("signal sampling step differs from the stage time step");
        }
        const real lead = input.start_time - state.clock;
        if (lead < -1e-9 * std::max(cfg.dt, std::abs(state.clock))) {
            throw InvalidConfig("signal starts before the ensemble clock");
        }
        if (lead > 0.0) state = free_evolve(std::move(state), lead, rates);
        state.clock = input.start_time;

        const real width = 2.0 * std::sqrt(2.0 * std::log(2.0)) * rms_duration(input);
        if (width > 0.0 && state.spectral.delta_in * width < broadband_threshold) {
            out.warnings.push_back("signal bandwidth is not small against the inhomogeneous line "
                                   "(delta_in * duration = " +
                                   std::to_string(state.spectral.delta_in * width) + ")");
        }
    }
    detail::require_empty_level4(state);

    const real g = detail::coupling_from_alpha(state.spectral, cfg.alpha0_s);
    const std::size_t steps = input.samples.empty() ? 0 : input.samples.size() - 1;
    FieldEnvelope tr;
    tr.dt = cfg.dt;
    tr.start_time = input.start_time;
    tr.direction = Direction::forward;
    tr.carrier = Transition::t23;
    tr.reference_time = input.reference_time;
    if (!input.samples.empty()) {
        tr.samples = detail::run_stage(state, Transition::t23, Direction::forward, input.samples,
                                       steps, cfg.dt, g, rates, cfg.threads);
    }
    out.state = std::move(state);
    out.transmitted = std::move(tr);
    return out;
}

/// Backward emission stage starting at the ensemble clock. The echo is
/// recorded at z = 0; its time axis is lab time at the input face.
inline RetrievalResult propagate_retrieval(EnsembleState state, const StageConfig& cfg,
                                           real duration, Transition carrier = Transition::t13,
                                           const DecayRates& rates = {})
{
    validate_stage_config(cfg);
    if (carrier != Transition::t13 && carrier != Transition::t23) {
        throw InvalidConfig("echo carrier must be 1-3 or 2-3");
    }
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
        throw InvalidConfig("retrieval duration must be non-negative");
    }
    detail::require_empty_level4(state);

    const real L = state.spatial.length;
    const real vg = state.scheme.v_g;
    const std::size_t nc = state.cells();
    std::vector<real> shift(nc);

    // Forward frame (cell at t = clock + z/v_g) -> backward frame
    // (cell at t = start - z/v_g) with start = clock + 2L/v_g.
    const real start = state.clock + 2.0 * L / vg;
    for (std::size_t c = 0; c < nc; ++c) shift[c] = 2.0 * (L - state.spatial.center(c)) / vg;
    detail::evolve_cells(state, shift, rates);
    state.clock = start;

    const real alpha0 = carrier == Transition::t13 ? cfg.alpha0_e : cfg.alpha0_s;
    const real g = detail::coupling_from_alpha(state.spectral, alpha0);
    const auto steps = static_cast<std::size_t>(std::ceil(duration / cfg.dt - 1e-9));

    FieldEnvelope echo;
    echo.dt = cfg.dt;
    echo.start_time = start;
    echo.direction = Direction::backward;
    echo.carrier = carrier;
    echo.reference_time = start;
    echo.samples = detail::run_stage(state, carrier, Direction::backward, {}, steps, cfg.dt, g,
                                     rates, cfg.threads);

    // Back to the forward frame at clock = end of the stage.
    for (std::size_t c = 0; c < nc; ++c) shift[c] = 2.0 * state.spatial.center(c) / vg;
    detail::evolve_cells(state, shift, rates);
    return {std::move(state), std::move(echo)};
}

// ---------------------------------------------------------------------------
// Timeline execution and echo metrics.
// ---------------------------------------------------------------------------

/// Grids and stage parameters shared by every stage of a run.
struct SimulationSetup {
    SpectralGrid spectral;
    SpatialGrid spatial;
    LevelScheme scheme;
    StageConfig stage;
};

struct EchoReport {
    real efficiency = 0.0;
    real peak_time = 0.0;
    real shape_fidelity = 0.0;
    real reversed_fidelity = 0.0;  // same overlap against the time-reversed input
    real best_delay = 0.0;         // lag maximizing the overlap
    real expected_peak_time = 0.0;
    real input_energy = 0.0;
    real echo_energy = 0.0;
    real transmitted_energy = 0.0;
    real stored_after_absorption = 0.0;
    Transition echo_carrier = Transition::t13;
    FieldEnvelope echo;
    FieldEnvelope transmitted;
    std::vector<std::string> warnings;
};

/// Parabolic-refined time of the maximum of |b|^2.
inline real peak_time(const FieldEnvelope& f)
{
    if (f.samples.empty()) return f.start_time;
    std::size_t best = 0;
    real best_v = -1.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const real v = std::norm(f.samples[k]);
        if (v > best_v) {
            best_v = v;
            best = k;
        }
    }
    real t = f.time(best);
    if (best > 0 && best + 1 < f.size()) {
        const real ym = std::norm(f.samples[best - 1]);
        const real y0 = best_v;
        const real yp = std::norm(f.samples[best + 1]);
        const real den = ym - 2.0 * y0 + yp;
        if (den < 0.0) t += 0.5 * f.dt * (ym - yp) / den;
    }
    return t;
}

struct OverlapResult {
    real fidelity = 0.0;
    real delay = 0.0;
};

/// max over integer-sample lags of |sum b_out^* b_in(t - lag) dt|^2 / (E_out E_in).
/// Both envelopes must share dt; lags are multiples of dt from the start offset.
inline OverlapResult best_overlap(const FieldEnvelope& out, const FieldEnvelope& in,
                                  bool reversed = false)
{
    OverlapResult r;
    const real eo = out.energy();
    const real ei = in.energy();
    if (eo == 0.0 || ei == 0.0) return r;
    if (std::abs(out.dt - in.dt) > 1e-9 * in.dt) {
        throw InvalidArgument("overlap requires a common sampling step");
    }
    const auto no = static_cast<long>(out.size());
    const auto ni = static_cast<long>(in.size());
    auto in_at = [&](long k) { return reversed ? in.samples[static_cast<std::size_t>(ni - 1 - k)]
                                               : in.samples[static_cast<std::size_t>(k)]; };
    real best = -1.0;
    long best_j = 0;
    for (long j = -(ni - 1); j <= no - 1; ++j) {
        // out sample k pairs with template sample k - j.
        cplx acc{};
        const long k0 = std::max(0L, j);
        const long k1 = std::min(no - 1, j + ni - 1);
        for (long k = k0; k <= k1; ++k) acc += std::conj(out.samples[static_cast<std::size_t>(k)]) * in_at(k - j);
        const real v = std::norm(acc);
        if (v > best) {
            best = v;
            best_j = j;
        }
    }
    r.fidelity = best * out.dt * in.dt / (eo * ei);
    r.delay = (out.start_time - in.start_time) + static_cast<real>(best_j) * out.dt;
    return r;
}

namespace detail {

/// A uniform spectral grid repeats the rephased polarization every 2 pi /
/// spacing. Rejects grids whose neighbouring copies of the echo overlap the
/// retrieval window.
inline void check_grid_revival(const SpectralGrid& grid, real expected, const FieldEnvelope& signal,
                               real window_start, real window_end)
{
    if (expected <= 0.0 || signal.samples.empty()) return;
    const real period = 2.0 * pi / grid.spacing();
    const real lead = signal.reference_time - signal.start_time;
    const real tail = signal.end_time() - signal.reference_time;
    const real slack = signal.dt;
    if (expected - period + tail > window_start + slack || expected + period - lead < window_end - slack) {
        throw InvalidConfig("spectral grid too coarse: its revival period (" + std::to_string(period * 1e6) +
                            " us) puts a copy of the echo inside the retrieval window; increase ensemble.bins");
    }
}

inline EnsembleState expand_prep(EnsembleState state, const PlmPrep& prep, const DecayRates& rates)
{
    state = apply_rf_rotation(std::move(state), prep.rf);
    state = free_evolve(std::move(state), prep.tau, rates);
    state = apply_optical_pi(std::move(state), prep.pulse1);
    state = free_evolve(std::move(state), prep.T, rates);
    state = apply_optical_pi(std::move(state), prep.pulse2);
    state.prep_time = state.clock;
    return state;
}

}  // namespace detail

/// Executes the events in order: free evolution between events, pulse algebra
/// for instantaneous events, propagation for absorb/retrieve.
inline EchoReport run_timeline(const ProtocolTimeline& timeline, const SimulationSetup& setup,
                               const DecayRates& rates = {})
{
    validate_timeline(timeline);
    validate_stage_config(setup.stage);

    EnsembleState state = init_state(setup.spectral, setup.spatial, setup.scheme);
    state.clock = timeline.events.front().time;

    EchoReport rep;
    rep.expected_peak_time = timeline.expected_echo_time;
    rep.echo_carrier = timeline.echo_carrier;
    const FieldEnvelope* input = nullptr;

    for (const Event& ev : timeline.events) {
        if (ev.time > state.clock) state = free_evolve(std::move(state), ev.time - state.clock, rates);
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, RfPulse>) {
                    state = apply_rf_rotation(std::move(state), a);
                } else if constexpr (std::is_same_v<T, OpticalPiPulse>) {
                    state = apply_optical_pi(std::move(state), a);
                } else if constexpr (std::is_same_v<T, PlmPrep>) {
                    state = rates.ideal() ? prepare_plm(std::move(state), a)
                                          : detail::expand_prep(std::move(state), a, rates);
                } else if constexpr (std::is_same_v<T, Hold>) {
                    state = free_evolve(std::move(state), a.duration, rates);
                } else if constexpr (std::is_same_v<T, Absorb>) {
                    input = &a.field;
                    auto res = propagate_absorption(std::move(state), a.field, setup.stage, rates);
                    state = std::move(res.state);
                    rep.transmitted = std::move(res.transmitted);
                    rep.warnings = std::move(res.warnings);
                    rep.stored_after_absorption = stored_excitation(state);
                } else if constexpr (std::is_same_v<T, Retrieve>) {
                    if (input) {
                        detail::check_grid_revival(state.spectral, timeline.expected_echo_time, *input,
                                                   ev.time, ev.time + a.duration);
                    }
                    auto res = propagate_retrieval(std::move(state), setup.stage, a.duration,
                                                   a.carrier, rates);
                    state = std::move(res.state);
                    rep.echo = std::move(res.echo);
                    rep.echo_carrier = a.carrier;
                }
            },
            ev.action);
    }

    rep.echo.reference_time = timeline.expected_echo_time;
    rep.input_energy = input ? input->energy() : 0.0;
    rep.echo_energy = rep.echo.energy();
    rep.transmitted_energy = rep.transmitted.energy();
    if (rep.input_energy > 0.0) {
        rep.efficiency = rep.echo_energy / rep.input_energy;
        rep.peak_time = peak_time(rep.echo);
        if (rep.echo_energy > 0.0) {
            const auto fwd = best_overlap(rep.echo, *input);
            rep.shape_fidelity = fwd.fidelity;
            rep.best_delay = fwd.delay;
            rep.reversed_fidelity = best_overlap(rep.echo, *input, true).fidelity;
        }
    }
    return rep;
}

}  // namespace plmqm
