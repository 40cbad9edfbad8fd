// config.hpp - YAML run configuration: parsing with strict key checking,
// re-emission of the effective configuration, and construction of the
// simulation objects it describes.
//
// All quantities are SI with the unit in the key name (rad_per_s, per_m, _s).

#pragma once

#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "plmqm/materials.hpp"
#include "plmqm/phasematch.hpp"
#include "plmqm/propagation.hpp"
#include "plmqm/protocols.hpp"

namespace plmqm {

struct SchemeConfig {
    real omega21 = 2 * pi * 34.533e6;
    real omega32 = 2 * pi * 516.847e12;
    real omega41 = 2 * pi * 516.847e12 + 2 * pi * 34.533e6 + 2 * pi * 75e6;
    real omega3s = 2 * pi * 46.175e6;
    real v_g = 1.66e8;
    bool operator==(const SchemeConfig&) const = default;
};

struct EnsembleConfig {
    Profile profile = Profile::rectangular;
    real delta_in = 2 * pi * 4e6;
    std::size_t bins = 401;
    std::optional<real> span;
    real length = 0.01;
    std::size_t cells = 200;
    real atom_number = 0.0;
    bool operator==(const EnsembleConfig&) const = default;
};

struct AbsorptionConfig {
    real alpha0_s = 400.0;  // 1/m
    real alpha0_e = 400.0;
    bool operator==(const AbsorptionConfig&) const = default;
};

struct ReprogramConfig {
    Transition pair = Transition::t14;
    real T_prime = 0.0;
    real delay = 0.0;
    bool operator==(const ReprogramConfig&) const = default;
};

struct OnDemandConfig {
    real t1 = 30e-6;
    real t_read = 0.0;  // absolute
    bool operator==(const OnDemandConfig&) const = default;
};

struct ProtocolConfig {
    Variant variant = Variant::basic;
    real theta0 = pi / 2;
    real rf_phase = 0.0;
    real phase1 = 0.0;
    real phase2 = 0.0;
    WaveVector k0{}, k1{}, k2{};
    real tau = 1e-6;
    real T = 100e-6;
    real t0 = 5e-6;
    real dt = 0.8e-6;
    SignalShape shape = SignalShape::gaussian;
    real fwhm = 10e-6;
    real half_window = 2.5;
    real echo_margin = 3.0;
    real pair_ratio = 0.5;
    real amplitude_re = 1.0;
    real amplitude_im = 0.0;
    ReprogramConfig reprogram;
    OnDemandConfig on_demand;
    bool operator==(const ProtocolConfig&) const = default;
};

struct DecayConfig {
    real gamma_s = 0.0;
    real gamma_o = 0.0;
    real gamma_1o = 0.0;
    bool operator==(const DecayConfig&) const = default;
};

struct BudgetConfig {
    std::optional<real> T2_opt;
    std::optional<real> T2_spin;
    std::optional<real> T1_opt;
    std::optional<real> dt_pulse;
    real margin = 10.0;
    bool operator==(const BudgetConfig&) const = default;
};

struct NoiseSection {
    real pulse_error = 0.0;
    real atom_number = 0.0;
    real t0 = 0.0;
    real T1_opt = 1.9e-3;
    real gate = 1e-6;
    real collection = 1.0;
    real n_signal_photons = 1.0;
    bool operator==(const NoiseSection&) const = default;
};

struct MaterialRef {
    std::string ion;
    std::string isotope;
    int site = 1;
    std::string host;
    real B = 0.0;
    bool operator==(const MaterialRef&) const = default;
};

struct GeometryConfig {
    WaveVector k_s{}, k0{}, k1{}, k2{};
    std::optional<WaveVector> k_W, k_R1;
    real k31 = 0.0;
    real k32 = 0.0;
    std::optional<real> length;
    real tolerance = 0.1;
    bool operator==(const GeometryConfig&) const = default;
};

struct SweepConfig {
    std::string parameter;
    std::vector<real> values;
    std::string outer_parameter;
    std::vector<real> outer_values;
    bool operator==(const SweepConfig&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    std::string prefix = "plmqm";
    bool operator==(const OutputConfig&) const = default;
};

struct SimConfig {
    SchemeConfig scheme;
    EnsembleConfig ensemble;
    AbsorptionConfig absorption;
    ProtocolConfig protocol;
    DecayConfig decay;
    BudgetConfig budget;
    std::optional<NoiseSection> noise;
    std::optional<MaterialRef> material;
    std::optional<GeometryConfig> geometry;
    std::optional<SweepConfig> sweep;
    OutputConfig output;
    bool operator==(const SimConfig&) const = default;
};

// ---------------------------------------------------------------------------

namespace detail {

class Section {
public:
    Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (node_ && !node_.IsNull() && !node_.IsMap()) {
            throw InvalidConfig(path_ + ": expected a mapping");
        }
    }

    ~Section() noexcept(false)
    {
        if (std::uncaught_exceptions() > 0 || !node_ || node_.IsNull()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.count(key)) throw InvalidConfig(path_ + ": unknown key '" + key + "'");
        }
    }

    Section(const Section&) = delete;
    Section& operator=(const Section&) = delete;

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
    }

    YAML::Node child(const std::string& key)
    {
        seen_.insert(key);
        return node_ && node_.IsMap() ? node_[key] : YAML::Node{};
    }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    template <typename T>
    void get(const std::string& key, T& out)
    {
        if (!has(key)) return;
        try {
            out = node_[key].as<T>();
        } catch (const YAML::Exception& e) {
            throw InvalidConfig(where(key) + ": " + e.msg);
        }
    }

    template <typename T>
    void get(const std::string& key, std::optional<T>& out)
    {
        if (!has(key)) return;
        T v{};
        get(key, v);
        out = v;
    }

    void get_vec(const std::string& key, WaveVector& out)
    {
        if (!has(key)) return;
        std::vector<real> v;
        get(key, v);
        if (v.size() != 3) throw InvalidConfig(where(key) + ": expected [x, y, z]");
        out = {v[0], v[1], v[2]};
    }

    void get_vec(const std::string& key, std::optional<WaveVector>& out)
    {
        if (!has(key)) return;
        WaveVector w{};
        get_vec(key, w);
        out = w;
    }

private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace detail

inline SimConfig parse_config(const YAML::Node& root)
{
    SimConfig c;
    detail::Section top(root, "");
    {
        detail::Section s(top.child("scheme"), "scheme");
        s.get("omega21_rad_per_s", c.scheme.omega21);
        s.get("omega32_rad_per_s", c.scheme.omega32);
        s.get("omega41_rad_per_s", c.scheme.omega41);
        s.get("omega3s_rad_per_s", c.scheme.omega3s);
        s.get("v_g_m_per_s", c.scheme.v_g);
    }
    {
        detail::Section s(top.child("ensemble"), "ensemble");
        std::string profile(to_string(c.ensemble.profile));
        s.get("profile", profile);
        try {
            c.ensemble.profile = profile_from_string(profile);
        } catch (const std::invalid_argument& e) {
            throw InvalidConfig(std::string("ensemble.profile: ") + e.what());
        }
        s.get("delta_in_rad_per_s", c.ensemble.delta_in);
        s.get("bins", c.ensemble.bins);
        s.get("span_rad_per_s", c.ensemble.span);
        s.get("length_m", c.ensemble.length);
        s.get("cells", c.ensemble.cells);
        s.get("atom_number", c.ensemble.atom_number);
    }
    {
        detail::Section s(top.child("absorption"), "absorption");
        s.get("alpha0_s_per_m", c.absorption.alpha0_s);
        s.get("alpha0_e_per_m", c.absorption.alpha0_e);
    }
    {
        detail::Section s(top.child("protocol"), "protocol");
        auto& p = c.protocol;
        std::string variant(to_string(p.variant));
        s.get("variant", variant);
        p.variant = variant_from_string(variant);
        s.get("theta0_rad", p.theta0);
        s.get("rf_phase_rad", p.rf_phase);
        s.get("phase1_rad", p.phase1);
        s.get("phase2_rad", p.phase2);
        s.get_vec("k0_rad_per_m", p.k0);
        s.get_vec("k1_rad_per_m", p.k1);
        s.get_vec("k2_rad_per_m", p.k2);
        s.get("tau_s", p.tau);
        s.get("T_s", p.T);
        s.get("t0_s", p.t0);
        s.get("dt_s", p.dt);
        {
            detail::Section g(s.child("signal"), "protocol.signal");
            std::string shape(to_string(p.shape));
            g.get("shape", shape);
            p.shape = signal_shape_from_string(shape);
            g.get("fwhm_s", p.fwhm);
            g.get("half_window_fwhm", p.half_window);
            g.get("pair_ratio", p.pair_ratio);
            g.get("amplitude_re", p.amplitude_re);
            g.get("amplitude_im", p.amplitude_im);
        }
        s.get("echo_margin_fwhm", p.echo_margin);
        {
            detail::Section r(s.child("reprogram"), "protocol.reprogram");
            std::string pair(to_string(p.reprogram.pair));
            r.get("pair", pair);
            try {
                p.reprogram.pair = transition_from_string(pair);
            } catch (const std::invalid_argument& e) {
                throw InvalidConfig(std::string("protocol.reprogram.pair: ") + e.what());
            }
            r.get("T_prime_s", p.reprogram.T_prime);
            r.get("delay_s", p.reprogram.delay);
        }
        {
            detail::Section o(s.child("on_demand"), "protocol.on_demand");
            o.get("t1_s", p.on_demand.t1);
            o.get("t_read_s", p.on_demand.t_read);
        }
    }
    {
        detail::Section s(top.child("decay"), "decay");
        s.get("gamma_s_per_s", c.decay.gamma_s);
        s.get("gamma_o_per_s", c.decay.gamma_o);
        s.get("gamma_1o_per_s", c.decay.gamma_1o);
    }
    {
        detail::Section s(top.child("budget"), "budget");
        s.get("T2_opt_s", c.budget.T2_opt);
        s.get("T2_spin_s", c.budget.T2_spin);
        s.get("T1_opt_s", c.budget.T1_opt);
        s.get("dt_pulse_s", c.budget.dt_pulse);
        s.get("margin", c.budget.margin);
    }
    if (top.has("noise")) {
        NoiseSection n;
        detail::Section s(top.child("noise"), "noise");
        s.get("pulse_error", n.pulse_error);
        s.get("atom_number", n.atom_number);
        s.get("t0_s", n.t0);
        s.get("T1_opt_s", n.T1_opt);
        s.get("gate_s", n.gate);
        s.get("collection", n.collection);
        s.get("n_signal_photons", n.n_signal_photons);
        c.noise = n;
    }
    if (top.has("material")) {
        MaterialRef m;
        detail::Section s(top.child("material"), "material");
        s.get("ion", m.ion);
        s.get("isotope", m.isotope);
        s.get("site", m.site);
        s.get("host", m.host);
        s.get("B_tesla", m.B);
        if (m.ion.empty()) throw InvalidConfig("material.ion is required");
        c.material = m;
    }
    if (top.has("geometry")) {
        GeometryConfig g;
        detail::Section s(top.child("geometry"), "geometry");
        s.get_vec("k_s_rad_per_m", g.k_s);
        s.get_vec("k0_rad_per_m", g.k0);
        s.get_vec("k1_rad_per_m", g.k1);
        s.get_vec("k2_rad_per_m", g.k2);
        s.get_vec("k_W_rad_per_m", g.k_W);
        s.get_vec("k_R1_rad_per_m", g.k_R1);
        s.get("k31_rad_per_m", g.k31);
        s.get("k32_rad_per_m", g.k32);
        s.get("length_m", g.length);
        s.get("tolerance_rad", g.tolerance);
        c.geometry = g;
    }
    if (top.has("sweep")) {
        SweepConfig w;
        detail::Section s(top.child("sweep"), "sweep");
        s.get("parameter", w.parameter);
        s.get("values", w.values);
        s.get("outer_parameter", w.outer_parameter);
        s.get("outer_values", w.outer_values);
        c.sweep = w;
    }
    {
        detail::Section s(top.child("output"), "output");
        s.get("dir", c.output.dir);
        s.get("prefix", c.output.prefix);
    }
    return c;
}

inline SimConfig parse_config_string(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw InvalidConfig(std::string("config syntax: ") + e.what());
    }
    return parse_config(root);
}

inline SimConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::string num(real v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline void emit_num(YAML::Emitter& e, const char* key, real v)
{
    e << YAML::Key << key << YAML::Value << num(v);
}

inline void emit_vec(YAML::Emitter& e, const char* key, const WaveVector& v)
{
    e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq << num(v.x) << num(v.y)
      << num(v.z) << YAML::EndSeq;
}

inline void emit_list(YAML::Emitter& e, const char* key, const std::vector<real>& v)
{
    e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (real x : v) e << num(x);
    e << YAML::EndSeq;
}

}  // namespace detail

/// Every field written explicitly, so the text reparses to an equal config.
inline std::string emit_config(const SimConfig& c)
{
    using detail::emit_num;
    using detail::emit_vec;
    YAML::Emitter e;
    e << YAML::BeginMap;

    e << YAML::Key << "scheme" << YAML::Value << YAML::BeginMap;
    emit_num(e, "omega21_rad_per_s", c.scheme.omega21);
    emit_num(e, "omega32_rad_per_s", c.scheme.omega32);
    emit_num(e, "omega41_rad_per_s", c.scheme.omega41);
    emit_num(e, "omega3s_rad_per_s", c.scheme.omega3s);
    emit_num(e, "v_g_m_per_s", c.scheme.v_g);
    e << YAML::EndMap;

    e << YAML::Key << "ensemble" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "profile" << YAML::Value << std::string(to_string(c.ensemble.profile));
    emit_num(e, "delta_in_rad_per_s", c.ensemble.delta_in);
    e << YAML::Key << "bins" << YAML::Value << c.ensemble.bins;
    if (c.ensemble.span) emit_num(e, "span_rad_per_s", *c.ensemble.span);
    emit_num(e, "length_m", c.ensemble.length);
    e << YAML::Key << "cells" << YAML::Value << c.ensemble.cells;
    emit_num(e, "atom_number", c.ensemble.atom_number);
    e << YAML::EndMap;

    e << YAML::Key << "absorption" << YAML::Value << YAML::BeginMap;
    emit_num(e, "alpha0_s_per_m", c.absorption.alpha0_s);
    emit_num(e, "alpha0_e_per_m", c.absorption.alpha0_e);
    e << YAML::EndMap;

    const auto& p = c.protocol;
    e << YAML::Key << "protocol" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "variant" << YAML::Value << std::string(to_string(p.variant));
    emit_num(e, "theta0_rad", p.theta0);
    emit_num(e, "rf_phase_rad", p.rf_phase);
    emit_num(e, "phase1_rad", p.phase1);
    emit_num(e, "phase2_rad", p.phase2);
    emit_vec(e, "k0_rad_per_m", p.k0);
    emit_vec(e, "k1_rad_per_m", p.k1);
    emit_vec(e, "k2_rad_per_m", p.k2);
    emit_num(e, "tau_s", p.tau);
    emit_num(e, "T_s", p.T);
    emit_num(e, "t0_s", p.t0);
    emit_num(e, "dt_s", p.dt);
    e << YAML::Key << "signal" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "shape" << YAML::Value << std::string(to_string(p.shape));
    emit_num(e, "fwhm_s", p.fwhm);
    emit_num(e, "half_window_fwhm", p.half_window);
    emit_num(e, "pair_ratio", p.pair_ratio);
    emit_num(e, "amplitude_re", p.amplitude_re);
    emit_num(e, "amplitude_im", p.amplitude_im);
    e << YAML::EndMap;
    emit_num(e, "echo_margin_fwhm", p.echo_margin);
    e << YAML::Key << "reprogram" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "pair" << YAML::Value << std::string(to_string(p.reprogram.pair));
    emit_num(e, "T_prime_s", p.reprogram.T_prime);
    emit_num(e, "delay_s", p.reprogram.delay);
    e << YAML::EndMap;
    e << YAML::Key << "on_demand" << YAML::Value << YAML::BeginMap;
    emit_num(e, "t1_s", p.on_demand.t1);
    emit_num(e, "t_read_s", p.on_demand.t_read);
    e << YAML::EndMap;
    e << YAML::EndMap;

    e << YAML::Key << "decay" << YAML::Value << YAML::BeginMap;
    emit_num(e, "gamma_s_per_s", c.decay.gamma_s);
    emit_num(e, "gamma_o_per_s", c.decay.gamma_o);
    emit_num(e, "gamma_1o_per_s", c.decay.gamma_1o);
    e << YAML::EndMap;

    e << YAML::Key << "budget" << YAML::Value << YAML::BeginMap;
    if (c.budget.T2_opt) emit_num(e, "T2_opt_s", *c.budget.T2_opt);
    if (c.budget.T2_spin) emit_num(e, "T2_spin_s", *c.budget.T2_spin);
    if (c.budget.T1_opt) emit_num(e, "T1_opt_s", *c.budget.T1_opt);
    if (c.budget.dt_pulse) emit_num(e, "dt_pulse_s", *c.budget.dt_pulse);
    emit_num(e, "margin", c.budget.margin);
    e << YAML::EndMap;

    if (c.noise) {
        const auto& n = *c.noise;
        e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
        emit_num(e, "pulse_error", n.pulse_error);
        emit_num(e, "atom_number", n.atom_number);
        emit_num(e, "t0_s", n.t0);
        emit_num(e, "T1_opt_s", n.T1_opt);
        emit_num(e, "gate_s", n.gate);
        emit_num(e, "collection", n.collection);
        emit_num(e, "n_signal_photons", n.n_signal_photons);
        e << YAML::EndMap;
    }
    if (c.material) {
        const auto& m = *c.material;
        e << YAML::Key << "material" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "ion" << YAML::Value << m.ion;
        e << YAML::Key << "isotope" << YAML::Value << YAML::DoubleQuoted << m.isotope;
        e << YAML::Key << "site" << YAML::Value << m.site;
        e << YAML::Key << "host" << YAML::Value << YAML::DoubleQuoted << m.host;
        emit_num(e, "B_tesla", m.B);
        e << YAML::EndMap;
    }
    if (c.geometry) {
        const auto& g = *c.geometry;
        e << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
        emit_vec(e, "k_s_rad_per_m", g.k_s);
        emit_vec(e, "k0_rad_per_m", g.k0);
        emit_vec(e, "k1_rad_per_m", g.k1);
        emit_vec(e, "k2_rad_per_m", g.k2);
        if (g.k_W) emit_vec(e, "k_W_rad_per_m", *g.k_W);
        if (g.k_R1) emit_vec(e, "k_R1_rad_per_m", *g.k_R1);
        emit_num(e, "k31_rad_per_m", g.k31);
        emit_num(e, "k32_rad_per_m", g.k32);
        if (g.length) emit_num(e, "length_m", *g.length);
        emit_num(e, "tolerance_rad", g.tolerance);
        e << YAML::EndMap;
    }
    if (c.sweep) {
        const auto& w = *c.sweep;
        e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "parameter" << YAML::Value << w.parameter;
        detail::emit_list(e, "values", w.values);
        if (!w.outer_parameter.empty()) {
            e << YAML::Key << "outer_parameter" << YAML::Value << w.outer_parameter;
            detail::emit_list(e, "outer_values", w.outer_values);
        }
        e << YAML::EndMap;
    }
    e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "dir" << YAML::Value << YAML::DoubleQuoted << c.output.dir;
    e << YAML::Key << "prefix" << YAML::Value << YAML::DoubleQuoted << c.output.prefix;
    e << YAML::EndMap;

    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

// ---------------------------------------------------------------------------

inline ProtocolParams make_params(const SimConfig& c)
{
    const auto& p = c.protocol;
    ProtocolParams out;
    out.theta0 = p.theta0;
    out.rf_phase = p.rf_phase;
    out.phase1 = p.phase1;
    out.phase2 = p.phase2;
    out.k0 = p.k0;
    out.k1 = p.k1;
    out.k2 = p.k2;
    out.tau = p.tau;
    out.T = p.T;
    out.t0 = p.t0;
    out.signal_fwhm = p.fwhm;
    out.dt = p.dt;
    out.half_window = p.half_window;
    out.echo_margin = p.echo_margin;
    out.shape = p.shape;
    out.pair_ratio = p.pair_ratio;
    out.amplitude = cplx{p.amplitude_re, p.amplitude_im};
    return out;
}

inline ProtocolTimeline make_timeline(const SimConfig& c)
{
    const ProtocolParams p = make_params(c);
    switch (c.protocol.variant) {
    case Variant::basic: return build_basic(p);
    case Variant::frequency_preserving: return build_frequency_preserving(p);
    case Variant::reprogrammed:
        return build_reprogrammed(p, c.protocol.reprogram.T_prime, c.protocol.reprogram.pair,
                                  c.protocol.reprogram.delay);
    case Variant::on_demand:
        return build_on_demand(p, c.protocol.on_demand.t1, c.protocol.on_demand.t_read);
    case Variant::custom: break;
    }
    throw InvalidConfig("custom timelines cannot be built from a config file");
}

inline SimulationSetup make_setup(const SimConfig& c, int threads = 1)
{
    SimulationSetup s;
    try {
        s.spectral = build_spectral_grid(c.ensemble.profile, c.ensemble.delta_in, c.ensemble.bins,
                                         c.ensemble.span);
        s.spatial = build_spatial_grid(c.ensemble.length, c.ensemble.cells);
        s.scheme = make_level_scheme(c.scheme.omega21, c.scheme.omega32, c.scheme.omega41,
                                     c.scheme.omega3s, c.scheme.v_g);
    } catch (const InvalidArgument& e) {
        throw InvalidConfig(e.what());
    }
    s.stage.alpha0_s = c.absorption.alpha0_s;
    s.stage.alpha0_e = c.absorption.alpha0_e;
    s.stage.dt = c.protocol.dt;
    s.stage.threads = threads;
    validate_stage_config(s.stage);
    return s;
}

inline DecayRates make_rates(const SimConfig& c)
{
    const DecayRates r{c.decay.gamma_s, c.decay.gamma_o, c.decay.gamma_1o};
    if (r.gamma_s < 0.0 || r.gamma_o < 0.0 || r.gamma_1o < 0.0) {
        throw InvalidConfig("decay rates must be non-negative");
    }
    return r;
}

/// Budget from the protocol, the ensemble and any explicit budget entries;
/// missing coherence times fall back to the inverse decay rates.
inline TimescaleBudget make_budget(const SimConfig& c)
{
    TimescaleBudget b;
    b.T2_star = 1.0 / c.ensemble.delta_in;
    b.dt_s = c.protocol.fwhm;
    b.dt_pulse = c.budget.dt_pulse;
    b.T = c.protocol.T;
    if (c.protocol.variant == Variant::reprogrammed) b.T_prime = c.protocol.reprogram.T_prime;
    b.tau = c.protocol.tau;
    b.t0 = c.protocol.t0;
    b.T2_opt = c.budget.T2_opt;
    b.T2_spin = c.budget.T2_spin;
    b.T1_opt = c.budget.T1_opt;
    if (!b.T2_opt && c.decay.gamma_o > 0.0) b.T2_opt = 1.0 / c.decay.gamma_o;
    if (!b.T2_spin && c.decay.gamma_s > 0.0) b.T2_spin = 1.0 / c.decay.gamma_s;
    if (!b.T1_opt && c.decay.gamma_1o > 0.0) b.T1_opt = 1.0 / c.decay.gamma_1o;
    return b;
}

inline Geometry make_geometry(const SimConfig& c)
{
    if (!c.geometry) throw InvalidConfig("config has no geometry section");
    const auto& g = *c.geometry;
    Geometry out;
    out.k_s = g.k_s;
    out.k0 = g.k0;
    out.k1 = g.k1;
    out.k2 = g.k2;
    out.k_W = g.k_W;
    out.k_R1 = g.k_R1;
    out.k31 = g.k31;
    out.k32 = g.k32;
    out.L = g.length.value_or(c.ensemble.length);
    out.tolerance = g.tolerance;
    return out;
}

}  // namespace plmqm
