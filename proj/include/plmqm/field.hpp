// field.hpp - slowly varying field envelopes on a uniform time grid.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "plmqm/types.hpp"

namespace plmqm {

struct FieldEnvelope {
    std::vector<cplx> samples;
    real start_time = 0.0;      // time of samples[0], s
    real dt = 0.0;              // s
    Direction direction = Direction::forward;
    Transition carrier = Transition::t23;
    real reference_time = 0.0;  // t_s: nominal arrival of the pulse centre at z = 0

    std::size_t size() const { return samples.size(); }
    real time(std::size_t k) const { return start_time + static_cast<real>(k) * dt; }
    real end_time() const { return samples.empty() ? start_time : time(samples.size() - 1); }
    real duration() const { return samples.empty() ? 0.0 : static_cast<real>(samples.size() - 1) * dt; }

    /// Energy-like norm sum |b|^2 dt.
    real energy() const
    {
        real acc = 0.0;
        for (const auto& v : samples) acc += std::norm(v);
        return acc * dt;
    }

    /// Linear interpolation, zero outside the sampled window.
    cplx at(real t) const
    {
        if (samples.empty()) return {};
        const real u = (t - start_time) / dt;
        if (u < 0.0 || u > static_cast<real>(samples.size() - 1)) return {};
        const auto k = static_cast<std::size_t>(u);
        if (k + 1 >= samples.size()) return samples.back();
        const real f = u - static_cast<real>(k);
        return (1.0 - f) * samples[k] + f * samples[k + 1];
    }

    bool finite() const
    {
        for (const auto& v : samples)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }
};

/// Gaussian pulse with intensity FWHM `fwhm`, centred at `center`, sampled over
/// center +- half_window.
inline FieldEnvelope gaussian_pulse(real center, real fwhm, real dt, real half_window,
                                    cplx amplitude = 1.0)
{
    if (!(fwhm > 0.0) || !(dt > 0.0) || !(half_window > 0.0)) {
        throw InvalidArgument("gaussian pulse needs positive fwhm, dt and window");
    }
    const auto half_steps = static_cast<std::size_t>(std::ceil(half_window / dt - 1e-9));
    const real sigma = fwhm / (2.0 * std::sqrt(std::log(2.0)));  // amplitude e-folding
    FieldEnvelope f;
    f.dt = dt;
    f.start_time = center - static_cast<real>(half_steps) * dt;
    f.reference_time = center;
    f.samples.resize(2 * half_steps + 1);
    for (std::size_t k = 0; k < f.samples.size(); ++k) {
        const real u = (f.time(k) - center) / sigma;
        f.samples[k] = amplitude * std::exp(-0.5 * u * u);
    }
    return f;
}

/// Asymmetric test pulse: a Gaussian followed by a weaker Gaussian one FWHM
/// later (relative amplitude `ratio`). The reference time is the main peak.
inline FieldEnvelope gaussian_pair_pulse(real center, real fwhm, real dt, real half_window,
                                         real ratio = 0.5, cplx amplitude = 1.0)
{
    FieldEnvelope f = gaussian_pulse(center, fwhm, dt, half_window, amplitude);
    const real sigma = fwhm / (2.0 * std::sqrt(std::log(2.0)));
    for (std::size_t k = 0; k < f.samples.size(); ++k) {
        const real u = (f.time(k) - center - fwhm) / sigma;
        f.samples[k] += ratio * amplitude * std::exp(-0.5 * u * u);
    }
    return f;
}

/// RMS duration of |b|^2 (s); zero for an empty field.
inline real rms_duration(const FieldEnvelope& f)
{
    real w = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const real p = std::norm(f.samples[k]);
        const real t = f.time(k);
        w += p;
        m1 += p * t;
        m2 += p * t * t;
    }
    if (w == 0.0) return 0.0;
    m1 /= w;
    return std::sqrt(std::max(0.0, m2 / w - m1 * m1));
}

}  // namespace plmqm
