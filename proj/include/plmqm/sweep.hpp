// sweep.hpp - parameter sweeps of the simulated efficiency against the
// closed-form value.

#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "plmqm/config.hpp"
#include "plmqm/oracle.hpp"

namespace plmqm {

/// Depths alpha_s L, alpha_e L implied by a config.
inline DepthSplit config_depths(const SimConfig& c)
{
    const real s = std::sin(0.5 * c.protocol.theta0);
    const real co = std::cos(0.5 * c.protocol.theta0);
    return {c.absorption.alpha0_s * s * s * c.ensemble.length,
            c.absorption.alpha0_e * co * co * c.ensemble.length};
}

inline real config_symmetry_parameter(const SimConfig& c)
{
    const auto d = config_depths(c);
    if (d.alpha_eL == 0.0) return d.alpha_sL == 0.0 ? 0.0 : std::numeric_limits<real>::infinity();
    return std::sqrt(d.alpha_sL / d.alpha_eL);
}

inline real oracle_efficiency(const SimConfig& c)
{
    const auto d = config_depths(c);
    return retrieval_efficiency(config_symmetry_parameter(c), d.alpha_sL, d.alpha_eL);
}

namespace detail {

inline void set_depths(SimConfig& c, real alpha_sL, real alpha_eL)
{
    const real s = std::sin(0.5 * c.protocol.theta0);
    const real co = std::cos(0.5 * c.protocol.theta0);
    const real n2 = s * s, n1 = co * co;
    const real L = c.ensemble.length;
    if ((alpha_sL > 0.0 && n2 == 0.0) || (alpha_eL > 0.0 && n1 == 0.0)) {
        throw InvalidConfig("requested depth is unreachable at this theta0");
    }
    c.absorption.alpha0_s = n2 > 0.0 ? alpha_sL / (L * n2) : 0.0;
    c.absorption.alpha0_e = n1 > 0.0 ? alpha_eL / (L * n1) : 0.0;
}

}  // namespace detail

inline const std::vector<std::string>& sweep_parameters()
{
    static const std::vector<std::string> names{"alpha_l", "total_depth", "x", "theta0_rad"};
    return names;
}

/// alpha_l: alpha_s L = alpha_e L = v. total_depth: (alpha_s + alpha_e) L = v
/// at the current x. x: new x at the current total depth. theta0_rad: RF
/// area at fixed alpha0 values.
inline void apply_sweep_value(SimConfig& c, const std::string& parameter, real v)
{
    if (!std::isfinite(v)) throw InvalidConfig("sweep value must be finite");
    if (parameter == "alpha_l") {
        if (v < 0.0) throw InvalidConfig("alpha_l must be non-negative");
        detail::set_depths(c, v, v);
    } else if (parameter == "total_depth") {
        if (v < 0.0) throw InvalidConfig("total_depth must be non-negative");
        const auto d = split_depth(config_symmetry_parameter(c), v);
        detail::set_depths(c, d.alpha_sL, d.alpha_eL);
    } else if (parameter == "x") {
        if (!(v > 0.0)) throw InvalidConfig("x must be positive");
        const auto cur = config_depths(c);
        const auto d = split_depth(v, cur.alpha_sL + cur.alpha_eL);
        detail::set_depths(c, d.alpha_sL, d.alpha_eL);
    } else if (parameter == "theta0_rad") {
        c.protocol.theta0 = v;
    } else {
        throw InvalidConfig("unknown sweep parameter '" + parameter + "'");
    }
}

struct SweepRow {
    real outer = 0.0;
    real value = 0.0;
    real efficiency_sim = 0.0;
    real efficiency_oracle = 0.0;
    real abs_error = 0.0;
};

struct SweepResult {
    std::string parameter;
    std::string outer_parameter;
    std::vector<SweepRow> rows;
};

inline SweepResult run_sweep(const SimConfig& base, int threads = 1)
{
    if (!base.sweep) throw InvalidConfig("config has no sweep section");
    const auto& w = *base.sweep;
    if (w.values.empty()) throw InvalidConfig("sweep.values is empty");
    const bool two_d = !w.outer_parameter.empty();
    if (two_d && w.outer_values.empty()) throw InvalidConfig("sweep.outer_values is empty");

    SweepResult out;
    out.parameter = w.parameter;
    out.outer_parameter = w.outer_parameter;
    const std::vector<real> outer = two_d ? w.outer_values : std::vector<real>{0.0};
    for (real o : outer) {
        for (real v : w.values) {
            SimConfig c = base;
            if (two_d) apply_sweep_value(c, w.outer_parameter, o);
            apply_sweep_value(c, w.parameter, v);
            const auto report = run_timeline(make_timeline(c), make_setup(c, threads), make_rates(c));
            SweepRow r;
            r.outer = o;
            r.value = v;
            r.efficiency_sim = report.efficiency;
            r.efficiency_oracle = oracle_efficiency(c);
            r.abs_error = std::abs(r.efficiency_sim - r.efficiency_oracle);
            out.rows.push_back(r);
        }
    }
    return out;
}

inline std::string format_real(real v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline std::string sweep_csv(const SweepResult& s)
{
    std::ostringstream os;
    const bool two_d = !s.outer_parameter.empty();
    if (two_d) os << s.outer_parameter << ',';
    os << "value,efficiency_sim,efficiency_oracle,abs_error\n";
    for (const auto& r : s.rows) {
        if (two_d) os << format_real(r.outer) << ',';
        os << format_real(r.value) << ',' << format_real(r.efficiency_sim) << ','
           << format_real(r.efficiency_oracle) << ',' << format_real(r.abs_error) << '\n';
    }
    return os.str();
}

inline std::string envelope_csv(const FieldEnvelope& f)
{
    std::ostringstream os;
    os << "time_s,re,im\n";
    for (std::size_t k = 0; k < f.size(); ++k) {
        os << format_real(f.time(k)) << ',' << format_real(f.samples[k].real()) << ','
           << format_real(f.samples[k].imag()) << '\n';
    }
    return os.str();
}

}  // namespace plmqm
