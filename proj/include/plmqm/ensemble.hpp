// ensemble.hpp - discretized inhomogeneously broadened five-level ensemble.
//
// The ensemble is sampled on a (spatial cell x spectral bin) lattice. Every
// site holds the single-atom density matrix in the linear (weak signal) regime:
// the O(1) block over the levels {1, 2, 4} and the O(signal) coherences between
// that block and the levels {3, s}. Coherences follow <P_nm> = <|n><m|>.
//
// Rotating-frame convention: the level energy offsets are 0 for 1, 2 and s
// and Delta (the optical detuning of the atom) for 3 and 4, so that
// <P_nm>(t) = <P_nm>(0) * exp(i (delta_n - delta_m) t). With this choice the
// preparation sequence reproduces the exp(+i Delta T) spin-wave factor and the
// optical coherences rotate as exp(-i Delta t).

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plmqm/types.hpp"

namespace plmqm {

enum class Profile { rectangular, gaussian, lorentzian };

inline std::string_view to_string(Profile p)
{
    switch (p) {
    case Profile::rectangular: return "rectangular";
    case Profile::gaussian: return "gaussian";
    case Profile::lorentzian: return "lorentzian";
    }
    return "?";
}

inline Profile profile_from_string(std::string_view s)
{
    if (s == "rectangular") return Profile::rectangular;
    if (s == "gaussian") return Profile::gaussian;
    if (s == "lorentzian") return Profile::lorentzian;
    throw InvalidArgument("unknown spectral profile '" + std::string(s) + "'");
}

/// Discretized inhomogeneous line G(Delta). Bins sit at the midpoints of
/// n equal intervals over [-span/2, span/2]; weights sum to one.
struct SpectralGrid {
    Profile profile = Profile::rectangular;
    real delta_in = 0.0;  // linewidth (FWHM, or full width for rectangular), rad/s
    real span = 0.0;      // rad/s
    std::vector<real> detunings;
    std::vector<real> weights;

    std::size_t size() const { return detunings.size(); }
    real spacing() const { return span / static_cast<real>(size()); }

    /// Line density G(Delta) in s/rad, linearly interpolated between bins.
    real density_at(real delta) const
    {
        const real h = spacing();
        const real u = (delta - detunings.front()) / h;
        if (u < 0.0) {
            return u > -0.5 ? weights.front() / h : 0.0;
        }
        const auto last = static_cast<real>(size() - 1);
        if (u >= last) {
            return u < last + 0.5 ? weights.back() / h : 0.0;
        }
        const auto k = static_cast<std::size_t>(u);
        const real f = u - static_cast<real>(k);
        return ((1.0 - f) * weights[k] + f * weights[k + 1]) / h;
    }
};

inline constexpr std::size_t default_bins = 401;
inline constexpr real default_span_factor = 6.0;

/// Samples the named profile. `span` defaults to delta_in for the rectangular
/// profile and 6 delta_in otherwise.
inline SpectralGrid build_spectral_grid(Profile profile, real delta_in, std::size_t n_bins,
                                        std::optional<real> span = std::nullopt)
{
    if (!(delta_in > 0.0) || !std::isfinite(delta_in)) {
        throw InvalidArgument("inhomogeneous linewidth must be positive");
    }
    if (n_bins < 2) {
        throw InvalidArgument("spectral grid needs at least two bins");
    }
    real width = 0.0;
    if (profile == Profile::rectangular) {
        if (span && std::abs(*span - delta_in) > 1e-12 * delta_in) {
            throw InvalidArgument("rectangular profile span must equal the linewidth");
        }
        width = delta_in;
    } else {
        width = span.value_or(default_span_factor * delta_in);
        if (!(width >= delta_in)) {
            throw InvalidArgument("spectral span is narrower than the linewidth");
        }
        if (width < 3.0 * delta_in) {
            throw InvalidArgument("gaussian/lorentzian span must cover at least 3 linewidths");
        }
    }

    SpectralGrid g;
    g.profile = profile;
    g.delta_in = delta_in;
    g.span = width;
    g.detunings.resize(n_bins);
    g.weights.resize(n_bins);

    const real h = width / static_cast<real>(n_bins);
    const real sigma = delta_in / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    for (std::size_t m = 0; m < n_bins; ++m) {
        const real d = -0.5 * width + (static_cast<real>(m) + 0.5) * h;
        g.detunings[m] = d;
        switch (profile) {
        case Profile::rectangular: g.weights[m] = 1.0; break;
        case Profile::gaussian: g.weights[m] = std::exp(-0.5 * d * d / (sigma * sigma)); break;
        case Profile::lorentzian: {
            const real u = 2.0 * d / delta_in;
            g.weights[m] = 1.0 / (1.0 + u * u);
            break;
        }
        }
    }
    real total = 0.0;
    for (real w : g.weights) total += w;
    for (real& w : g.weights) w /= total;
    return g;
}

struct SpatialGrid {
    real length = 0.0;  // m
    std::size_t n_cells = 0;

    real dz() const { return length / static_cast<real>(n_cells); }
    real center(std::size_t i) const { return (static_cast<real>(i) + 0.5) * dz(); }
};

inline constexpr std::size_t default_cells = 200;

inline SpatialGrid build_spatial_grid(real length, std::size_t n_cells)
{
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw InvalidArgument("medium length must be positive");
    }
    if (n_cells < 1) {
        throw InvalidArgument("spatial grid needs at least one cell");
    }
    return {length, n_cells};
}

/// Carrier frequencies (rad/s) and group velocity. omega31 is derived.
struct LevelScheme {
    real omega21 = 0.0;
    real omega31 = 0.0;
    real omega32 = 0.0;
    real omega41 = 0.0;
    real omega3s = 0.0;
    real v_g = 0.0;  // m/s
};

inline LevelScheme make_level_scheme(real omega21, real omega32, real omega41, real omega3s,
                                     real v_g)
{
    for (real v : {omega21, omega32, omega41, omega3s, v_g}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidArgument("level scheme frequencies and group velocity must be positive");
        }
    }
    return {omega21, omega32 + omega21, omega32, omega41, omega3s, v_g};
}

/// Decay rates in 1/s. Zero means the ideal (lossless) model.
struct DecayRates {
    real gamma_s = 0.0;   // 1/T2 of spin coherences (1-2, 1-s, 2-s)
    real gamma_o = 0.0;   // 1/T2 of optical coherences (anything touching 3 or 4)
    real gamma_1o = 0.0;  // 1/T1 of the optically excited population (level 4)

    bool ideal() const { return gamma_s == 0.0 && gamma_o == 0.0 && gamma_1o == 0.0; }
};

/// One (cell, bin) site. Ground block over {1,2,4}: populations and the upper
/// triangle of coherences. Excited block: <P_a e> for a in {1,2,4}, e in {3,s}.
struct Site {
    real n1 = 1.0;
    real n2 = 0.0;
    real n4 = 0.0;
    cplx r12{};
    cplx r14{};
    cplx r24{};
    cplx s13{};
    cplx s23{};
    cplx s43{};
    cplx s1s{};
    cplx s2s{};
    cplx s4s{};
};

struct EnsembleState {
    SpectralGrid spectral;
    SpatialGrid spatial;
    LevelScheme scheme;
    std::vector<Site> sites;  // cell-major: sites[cell * bins + bin]
    real clock = 0.0;         // retarded time of the forward signal frame, s
    real atom_number = 0.0;   // N, informational
    real prep_time = 0.0;     // time at which PLM preparation completed
    bool fresh = true;        // nothing has acted on the initial product state
    std::array<WaveVector, 3> ground_k{};  // phase-front tags of levels 1, 2, 4

    std::size_t bins() const { return spectral.size(); }
    std::size_t cells() const { return spatial.n_cells; }
    Site& site(std::size_t cell, std::size_t bin) { return sites[cell * bins() + bin]; }
    const Site& site(std::size_t cell, std::size_t bin) const { return sites[cell * bins() + bin]; }

    real n1() const { return sites.front().n1; }
    real n2() const { return sites.front().n2; }
    cplx rho12(std::size_t cell, std::size_t bin) const { return site(cell, bin).r12; }

    /// Wavevector of the stored spin wave <P_12> (delta k_sc after preparation).
    WaveVector spin_wave_k() const { return ground_k[1] - ground_k[0]; }
};

inline EnsembleState init_state(const SpectralGrid& spectral, const SpatialGrid& spatial,
                                 const LevelScheme& scheme, real atom_number = 0.0)
{
    EnsembleState s;
    s.spectral = spectral;
    s.spatial = spatial;
    s.scheme = scheme;
    s.atom_number = atom_number;
    s.sites.assign(spectral.size() * spatial.n_cells, Site{});
    return s;
}

/// Elapsed time per coherence family.
struct DecayInterval {
    real spin = 0.0;
    real optical = 0.0;
};

namespace detail {

struct DecayFactors {
    real spin = 1.0;
    real optical = 1.0;
    real population = 1.0;
};

inline DecayFactors decay_factors(const DecayRates& rates, DecayInterval iv)
{
    DecayFactors f;
    if (rates.gamma_s != 0.0) f.spin = std::exp(-rates.gamma_s * iv.spin);
    if (rates.gamma_o != 0.0) f.optical = std::exp(-rates.gamma_o * iv.optical);
    if (rates.gamma_1o != 0.0) f.population = std::exp(-rates.gamma_1o * iv.optical);
    return f;
}

inline void scale_site(Site& s, const DecayFactors& f)
{
    s.r12 *= f.spin;
    s.s1s *= f.spin;
    s.s2s *= f.spin;
    s.r14 *= f.optical;
    s.r24 *= f.optical;
    s.s13 *= f.optical;
    s.s23 *= f.optical;
    s.s43 *= f.optical;
    s.s4s *= f.optical;
    s.n4 *= f.population;
}

/// Free precession of one site by `duration` at optical detuning `delta`.
inline void precess_site(Site& s, real delta, real duration)
{
    if (duration == 0.0 || delta == 0.0) return;
    const cplx rot = std::polar(1.0, -delta * duration);  // exp(-i Delta t)
    s.r14 *= rot;
    s.r24 *= rot;
    s.s13 *= rot;
    s.s23 *= rot;
    s.s4s *= std::conj(rot);
}

}  // namespace detail

/// Exponential decay of every coherence family over the given intervals.
/// Zero rates leave the state bit-exact.
inline EnsembleState apply_decay(EnsembleState state, DecayInterval interval,
                                 const DecayRates& rates)
{
    if (interval.spin < 0.0 || interval.optical < 0.0) {
        throw InvalidArgument("decay interval must be non-negative");
    }
    if (rates.gamma_s < 0.0 || rates.gamma_o < 0.0 || rates.gamma_1o < 0.0) {
        throw InvalidArgument("decay rates must be non-negative");
    }
    if (rates.ideal()) return state;
    const auto f = detail::decay_factors(rates, interval);
    for (auto& s : state.sites) detail::scale_site(s, f);
    return state;
}

/// Field-free evolution for `duration`: detuning phases plus decay.
inline EnsembleState free_evolve(EnsembleState state, real duration, const DecayRates& rates = {})
{
    if (duration < 0.0) {
        throw InvalidArgument("free evolution duration must be non-negative");
    }
    if (duration == 0.0) return state;
    const std::size_t nb = state.bins();
    for (std::size_t c = 0; c < state.cells(); ++c) {
        for (std::size_t m = 0; m < nb; ++m) {
            detail::precess_site(state.site(c, m), state.spectral.detunings[m], duration);
        }
    }
    state = apply_decay(std::move(state), {duration, duration}, rates);
    state.clock += duration;
    return state;
}

/// Weighted spectral sum sum_m w_m values[m], summed left to right.
inline cplx spectral_sum(const SpectralGrid& grid, std::span<const cplx> values)
{
    if (values.size() != grid.size()) {
        throw InvalidArgument("value count does not match the spectral grid");
    }
    cplx acc{};
    for (std::size_t m = 0; m < values.size(); ++m) acc += grid.weights[m] * values[m];
    return acc;
}

/// Delta-integrated coherence on the 2-3 or 1-3 transition at one cell.
inline cplx macroscopic_polarization(const EnsembleState& state, Transition transition,
                                     std::size_t cell)
{
    if (cell >= state.cells()) {
        throw InvalidArgument("cell index out of range");
    }
    if (transition != Transition::t23 && transition != Transition::t13) {
        throw InvalidArgument("macroscopic polarization is defined for 2-3 and 1-3 only");
    }
    cplx acc{};
    const std::size_t nb = state.bins();
    for (std::size_t m = 0; m < nb; ++m) {
        const Site& s = state.site(cell, m);
        acc += state.spectral.weights[m] * (transition == Transition::t23 ? s.s23 : s.s13);
    }
    return acc;
}

}  // namespace plmqm
