// materials.hpp - rare-earth spectroscopic data for candidate memory crystals
// and feasibility checks against a timescale budget.

#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "plmqm/protocols.hpp"

namespace plmqm {

enum class Qualifier { exact, lower_bound, approximate };

inline std::string_view to_string(Qualifier q)
{
    switch (q) {
    case Qualifier::exact: return "";
    case Qualifier::lower_bound: return "lower_bound";
    case Qualifier::approximate: return "approximate";
    }
    return "";
}

inline Qualifier qualifier_from_string(std::string_view s)
{
    if (s.empty() || s == "exact") return Qualifier::exact;
    if (s == "lower_bound") return Qualifier::lower_bound;
    if (s == "approximate") return Qualifier::approximate;
    throw InvalidConfig("unknown qualifier '" + std::string(s) + "'");
}

/// Time in seconds, optionally tied to a magnetic field (tesla).
struct Measurement {
    real value = 0.0;
    std::optional<real> B;
    Qualifier qualifier = Qualifier::exact;
    std::string source;

    bool operator==(const Measurement&) const = default;
};

struct MaterialRecord {
    std::string ion;
    std::string isotope;  // mass number, "" when unknown
    std::string host;
    int site = 0;         // 0 when not site-resolved
    std::vector<real> ground_splittings;   // MHz
    std::vector<real> excited_splittings;  // MHz
    std::optional<Measurement> T1_opt;
    std::vector<Measurement> T2_opt;
    std::optional<Measurement> T1_HF;
    std::vector<Measurement> T2_HF;
    std::vector<std::string> splitting_sources;
    bool partial = false;  // narrative record, unknown fields left empty

    std::string key() const { return ion + "/" + (isotope.empty() ? "-" : isotope) + "/" + std::to_string(site); }

    bool operator==(const MaterialRecord&) const = default;
};

inline constexpr real ms = 1e-3;
inline constexpr real us = 1e-6;
inline constexpr real hour = 3600.0;
inline constexpr real day = 86400.0;

namespace detail {

inline Measurement m(real v, std::optional<real> B, const char* src, Qualifier q = Qualifier::exact)
{
    return {v, B, q, src};
}

inline std::vector<MaterialRecord> build_table()
{
    const std::string yso = "Y2SiO5";
    std::vector<MaterialRecord> t;

    auto eu = [&](const char* iso, int site, std::vector<real> g, std::vector<real> e, real t1,
                  real t2_0, real t2_10, const char* gsrc) {
        MaterialRecord r;
        r.ion = "Eu";
        r.isotope = iso;
        r.host = yso;
        r.site = site;
        r.ground_splittings = std::move(g);
        r.excited_splittings = std::move(e);
        r.splitting_sources = {gsrc, "Yano1984"};
        r.T1_opt = m(t1, std::nullopt, "Equall1994");
        r.T2_opt = {m(t2_0, 0.0, "Equall1994"), m(t2_10, 0.01, "Equall1994")};
        r.T1_HF = m(20 * day, std::nullopt, "Konz2003", Qualifier::lower_bound);
        return r;
    };
    t.push_back(eu("151", 1, {34.533, 46.175}, {75, 102}, 1.9 * ms, 1.5 * ms, 2.6 * ms, "Konz2003"));
    t.back().T2_HF = {m(6 * hour, 1.37, "Zhong2015")};
    t.push_back(eu("153", 1, {90.0, 119.2}, {191, 260}, 1.9 * ms, 1.5 * ms, 2.6 * ms, "Yano1984"));
    t.push_back(eu("151", 2, {29.527, 57.254}, {63, 108}, 1.6 * ms, 1.1 * ms, 1.9 * ms, "Konz2003"));
    t.push_back(eu("153", 2, {76.4, 148.1}, {160, 274}, 1.6 * ms, 1.1 * ms, 1.9 * ms, "Yano1984"));

    auto pr = [&](int site, std::vector<real> g, std::vector<real> e, real t1, real t2) {
        MaterialRecord r;
        r.ion = "Pr";
        r.isotope = "141";
        r.host = yso;
        r.site = site;
        r.ground_splittings = std::move(g);
        r.excited_splittings = std::move(e);
        r.splitting_sources = {"Equall1995", "Equall1995"};
        r.T1_opt = m(t1, std::nullopt, "Equall1995");
        r.T2_opt = {m(t2, 0.0077, "Equall1995")};
        r.T1_HF = m(100, std::nullopt, "Nilsson2004", Qualifier::approximate);
        return r;
    };
    t.push_back(pr(1, {17.3, 10.19}, {4.84, 4.59}, 164 * us, 152 * us));
    t.back().T2_HF = {m(0.5 * ms, 0.0, "Ham1997"), m(42, 0.08, "Heinze2013")};
    t.push_back(pr(2, {4.93, 3.78}, {2.29, 2.29}, 222 * us, 377 * us));
    t.back().T2_HF = {m(2.6 * ms, 0.0, "Xiao2020")};

    // Partial records.
    {
        MaterialRecord r;
        r.ion = "Er";
        r.host = "CaWO4";
        r.partial = true;
        r.T2_HF = {m(23 * ms, std::nullopt, "SciAdv2021")};
        t.push_back(r);
    }
    {
        MaterialRecord r;
        r.ion = "Dy";
        r.host = "SrY2O4";
        r.partial = true;
        r.T1_HF = m(1400, std::nullopt, "Malkin2024", Qualifier::approximate);
        t.push_back(r);
    }
    {
        MaterialRecord r;
        r.ion = "Er";
        r.isotope = "167";
        r.host = "Y2SiO5";
        r.partial = true;
        r.T2_HF = {m(1.3, 3.0, "Rancic2017")};
        r.T2_opt = {m(1.35 * ms, 3.0, "Rancic2017")};
        t.push_back(r);
    }
    return t;
}

}  // namespace detail

inline const std::vector<MaterialRecord>& material_table()
{
    static const std::vector<MaterialRecord> table = detail::build_table();
    return table;
}

/// Lookup by ion, isotope and site. An empty or "-" isotope matches an ion
/// with a single isotope; `host` disambiguates the partial Er records.
inline const MaterialRecord& lookup(std::string_view ion, std::string_view isotope, int site,
                                    std::string_view host = {})
{
    const bool any_iso = isotope.empty() || isotope == "-";
    const MaterialRecord* found = nullptr;
    for (const auto& r : material_table()) {
        if (r.ion != ion || r.site != site) continue;
        if (!host.empty() && r.host != host) continue;
        if (!any_iso && r.isotope != isotope) continue;
        if (found) throw NotFound("ambiguous material key; give isotope or host");
        found = &r;
    }
    if (!found) {
        throw NotFound("no material record for " + std::string(ion) + " " + std::string(isotope) +
                       " site " + std::to_string(site));
    }
    return *found;
}

/// Entry with the listed field closest to B (ties to the lower field);
/// entries without a field count as B = 0.
inline const Measurement& nearest_field(const std::vector<Measurement>& list, real B,
                                        const char* what)
{
    if (list.empty()) throw InsufficientData(std::string("no ") + what + " data in record");
    const Measurement* best = nullptr;
    real best_d = 0.0;
    for (const auto& e : list) {
        const real b = e.B.value_or(0.0);
        const real d = std::abs(b - B);
        if (!best || d < best_d || (d == best_d && b < best->B.value_or(0.0))) {
            best = &e;
            best_d = d;
        }
    }
    return *best;
}

struct FeasibilityReport {
    TimescaleBudget budget;  // with material values filled in
    TimescaleReport timescales;
    ConstraintResult bandwidth;
    bool passed() const { return timescales.all_passed() && (bandwidth.skipped || bandwidth.passed); }
};

/// Fills T2_opt, T2_spin (hyperfine T2) and T1_opt from the record at the
/// field nearest B, then checks timescales and 1/dt_s against the smallest
/// ground-state splitting.
inline FeasibilityReport feasibility(const MaterialRecord& rec, TimescaleBudget budget, real B,
                                     real margin = 10.0)
{
    FeasibilityReport rep;
    budget.T2_opt = nearest_field(rec.T2_opt, B, "T2_opt").value;
    budget.T2_spin = nearest_field(rec.T2_HF, B, "T2_HF").value;
    if (!rec.T1_opt) throw InsufficientData("no T1_opt data in record");
    budget.T1_opt = rec.T1_opt->value;
    rep.budget = budget;
    rep.timescales = validate_timescales(budget, margin);

    rep.bandwidth.name = "bandwidth <= splitting";
    if (!budget.dt_s || rec.ground_splittings.empty()) {
        rep.bandwidth.skipped = true;
    } else {
        rep.bandwidth.lhs = 1e-6 / *budget.dt_s;  // MHz
        rep.bandwidth.rhs = *std::min_element(rec.ground_splittings.begin(), rec.ground_splittings.end());
        rep.bandwidth.passed = rep.bandwidth.lhs <= rep.bandwidth.rhs;
    }
    return rep;
}

}  // namespace plmqm
