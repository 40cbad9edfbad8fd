// report.hpp - JSON serialization of reports and material records.

#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "plmqm/config.hpp"
#include "plmqm/materials.hpp"
#include "plmqm/oracle.hpp"
#include "plmqm/phasematch.hpp"
#include "plmqm/protocols.hpp"

namespace plmqm {

using json = nlohmann::ordered_json;

inline json to_json(const WaveVector& v) { return json::array({v.x, v.y, v.z}); }

// Non-finite values become strings so the output stays valid JSON.
inline json num_json(real v)
{
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline json to_json(const Measurement& m)
{
    json j;
    j["value_s"] = m.value;
    j["B_tesla"] = m.B ? json(*m.B) : json(nullptr);
    j["qualifier"] = m.qualifier == Qualifier::exact ? json(nullptr) : json(std::string(to_string(m.qualifier)));
    j["source"] = m.source;
    return j;
}

inline Measurement measurement_from_json(const json& j)
{
    Measurement m;
    m.value = j.at("value_s").get<real>();
    if (!j.at("B_tesla").is_null()) m.B = j.at("B_tesla").get<real>();
    if (!j.at("qualifier").is_null()) m.qualifier = qualifier_from_string(j.at("qualifier").get<std::string>());
    m.source = j.at("source").get<std::string>();
    return m;
}

inline json to_json(const MaterialRecord& r)
{
    json j;
    j["ion"] = r.ion;
    j["isotope"] = r.isotope;
    j["host"] = r.host;
    j["site"] = r.site;
    j["partial"] = r.partial;
    j["ground_splittings_mhz"] = r.ground_splittings;
    j["excited_splittings_mhz"] = r.excited_splittings;
    j["splitting_sources"] = r.splitting_sources;
    j["T1_opt"] = r.T1_opt ? to_json(*r.T1_opt) : json(nullptr);
    j["T2_opt"] = json::array();
    for (const auto& m : r.T2_opt) j["T2_opt"].push_back(to_json(m));
    j["T1_HF"] = r.T1_HF ? to_json(*r.T1_HF) : json(nullptr);
    j["T2_HF"] = json::array();
    for (const auto& m : r.T2_HF) j["T2_HF"].push_back(to_json(m));
    return j;
}

inline MaterialRecord record_from_json(const json& j)
{
    MaterialRecord r;
    r.ion = j.at("ion").get<std::string>();
    r.isotope = j.at("isotope").get<std::string>();
    r.host = j.at("host").get<std::string>();
    r.site = j.at("site").get<int>();
    r.partial = j.at("partial").get<bool>();
    r.ground_splittings = j.at("ground_splittings_mhz").get<std::vector<real>>();
    r.excited_splittings = j.at("excited_splittings_mhz").get<std::vector<real>>();
    r.splitting_sources = j.at("splitting_sources").get<std::vector<std::string>>();
    if (!j.at("T1_opt").is_null()) r.T1_opt = measurement_from_json(j.at("T1_opt"));
    for (const auto& m : j.at("T2_opt")) r.T2_opt.push_back(measurement_from_json(m));
    if (!j.at("T1_HF").is_null()) r.T1_HF = measurement_from_json(j.at("T1_HF"));
    for (const auto& m : j.at("T2_HF")) r.T2_HF.push_back(measurement_from_json(m));
    return r;
}

inline json to_json(const ConstraintResult& r)
{
    json j;
    j["name"] = r.name;
    j["skipped"] = r.skipped;
    j["passed"] = r.skipped ? json(nullptr) : json(r.passed);
    j["lhs_s"] = r.skipped ? json(nullptr) : num_json(r.lhs);
    j["rhs_s"] = r.skipped ? json(nullptr) : num_json(r.rhs);
    return j;
}

inline json to_json(const TimescaleReport& r)
{
    json j;
    j["all_passed"] = r.all_passed();
    j["constraints"] = json::array();
    for (const auto& row : r.rows) j["constraints"].push_back(to_json(row));
    return j;
}

inline json to_json(const FeasibilityReport& r)
{
    json j;
    j["passed"] = r.passed();
    j["T2_opt_s"] = r.budget.T2_opt ? json(*r.budget.T2_opt) : json(nullptr);
    j["T2_spin_s"] = r.budget.T2_spin ? json(*r.budget.T2_spin) : json(nullptr);
    j["T1_opt_s"] = r.budget.T1_opt ? json(*r.budget.T1_opt) : json(nullptr);
    j["timescales"] = to_json(r.timescales);
    json b = to_json(r.bandwidth);
    b.erase("lhs_s");
    b.erase("rhs_s");
    b["bandwidth_mhz"] = r.bandwidth.skipped ? json(nullptr) : json(r.bandwidth.lhs);
    b["min_splitting_mhz"] = r.bandwidth.skipped ? json(nullptr) : json(r.bandwidth.rhs);
    j["bandwidth"] = b;
    return j;
}

inline json to_json(const EchoMatch& m)
{
    json j;
    j["k_e_rad_per_m"] = to_json(m.k_e);
    j["residual_rad"] = m.residual;
    j["matched"] = m.matched;
    j["backward"] = m.backward;
    j["matched_backward"] = m.matched_backward;
    return j;
}

inline json to_json(const NoiseEstimate& n)
{
    json j;
    j["mu_noise"] = n.mu_noise;
    j["snr"] = num_json(n.snr);
    return j;
}

inline json to_json(const EchoReport& r)
{
    json j;
    j["efficiency"] = r.efficiency;
    j["peak_time_s"] = r.peak_time;
    j["expected_peak_time_s"] = r.expected_peak_time;
    j["fidelity"] = r.shape_fidelity;
    j["reversed_fidelity"] = r.reversed_fidelity;
    j["best_delay_s"] = r.best_delay;
    j["echo_carrier"] = std::string(to_string(r.echo_carrier));
    j["input_energy"] = r.input_energy;
    j["echo_energy"] = r.echo_energy;
    j["transmitted_energy"] = r.transmitted_energy;
    j["stored_after_absorption"] = r.stored_after_absorption;
    j["warnings"] = r.warnings;
    return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace plmqm
