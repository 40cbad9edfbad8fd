// support.hpp - shared fixtures and independent reference formulas for tests.

#pragma once

#include <cmath>
#include <complex>

#include "plmqm/plmqm.hpp"

namespace testing_support {

using plmqm::cplx;
using plmqm::real;
constexpr real pi = 3.14159265358979323846;

// Reference formulas, written out independently of the library oracle.
inline real ref_efficiency(real x, real aSL, real aEL)
{
    const real p = 2 * x / (1 + x * x);
    const real b = 1 - std::exp(-(aSL + aEL) / 2);
    return p * p * b * b;
}

/// Echo amplitude at z = 0 by Simpson quadrature of the local backward
/// emission sqrt(a_s a_e) exp(-(a_s + a_e) z / 2) over the medium.
inline real quadrature_echo_amplitude(real aS, real aE, real L, int n = 2000)
{
    const real h = L / n;
    real acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const real z = i * h;
        const real f = std::sqrt(aS * aE) * std::exp(-(aS + aE) * z / 2);
        acc += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return acc * h / 3.0;
}

/// Reduced-cost config: fewer bins and cells, shorter storage time.
inline plmqm::SimConfig quick_config(real aSL = 2.0, real aEL = 2.0)
{
    plmqm::SimConfig c;
    c.ensemble.bins = 401;
    c.ensemble.cells = 100;
    c.protocol.T = 60e-6;
    plmqm::detail::set_depths(c, aSL, aEL);
    return c;
}

inline plmqm::EchoReport run(const plmqm::SimConfig& c, int threads = 1)
{
    return plmqm::run_timeline(plmqm::make_timeline(c), plmqm::make_setup(c, threads),
                               plmqm::make_rates(c));
}

}  // namespace testing_support
