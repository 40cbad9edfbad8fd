// golden.hpp - compares the embedded material table with data/materials.csv.

#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "plmqm/plmqm.hpp"

namespace testing_support {

struct GoldenRow {
    std::string ion, isotope, quantity, unit, b, qualifier, source, value;
    int site = 0;
};

inline std::vector<GoldenRow> read_golden(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(f, line);
    std::vector<GoldenRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> c;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) c.push_back(cell);
        while (c.size() < 9) c.emplace_back();
        GoldenRow r;
        r.ion = c[0];
        r.isotope = c[1];
        r.site = std::stoi(c[2]);
        r.quantity = c[3];
        r.value = c[4];
        r.unit = c[5];
        r.b = c[6];
        r.qualifier = c[7];
        r.source = c[8];
        rows.push_back(r);
    }
    return rows;
}

inline double unit_scale(const std::string& u)
{
    static const std::map<std::string, double> s{{"MHz", 1.0}, {"s", 1.0},       {"ms", 1e-3},
                                                 {"us", 1e-6}, {"hour", 3600.0}, {"day", 86400.0}};
    return s.at(u);
}

// Mismatch descriptions; empty when every golden value is found bit-exact and
// every table value is covered by exactly one golden row.
inline std::vector<std::string> golden_mismatches(const std::string& path)
{
    using namespace plmqm;
    std::vector<std::string> bad;
    std::map<std::string, int> used;  // record key + quantity + index -> count
    const auto rows = read_golden(path);
    for (const auto& g : rows) {
        const std::string where = g.ion + "/" + g.isotope + "/" + std::to_string(g.site) + " " + g.quantity + " " + g.value;
        const MaterialRecord* rec = nullptr;
        try {
            rec = &lookup(g.ion, g.isotope, g.site);
        } catch (const NotFound&) {
            bad.push_back("missing record: " + where);
            continue;
        }
        const double v = std::stod(g.value) * unit_scale(g.unit);
        auto match_meas = [&](const Measurement& m) {
            const bool b_ok = g.b.empty() ? !m.B.has_value() : (m.B && *m.B == std::stod(g.b));
            return m.value == v && b_ok && m.source == g.source &&
                   m.qualifier == qualifier_from_string(g.qualifier);
        };
        int idx = -1;
        if (g.quantity == "ground_splitting" || g.quantity == "excited_splitting") {
            const auto& list = g.quantity == "ground_splitting" ? rec->ground_splittings : rec->excited_splittings;
            for (std::size_t i = 0; i < list.size(); ++i)
                if (list[i] == v && !used.count(rec->key() + g.quantity + std::to_string(i))) {
                    idx = static_cast<int>(i);
                    break;
                }
        } else if (g.quantity == "T1_opt" || g.quantity == "T1_HF") {
            const auto& m = g.quantity == "T1_opt" ? rec->T1_opt : rec->T1_HF;
            if (m && match_meas(*m)) idx = 0;
        } else if (g.quantity == "T2_opt" || g.quantity == "T2_HF") {
            const auto& list = g.quantity == "T2_opt" ? rec->T2_opt : rec->T2_HF;
            for (std::size_t i = 0; i < list.size(); ++i)
                if (match_meas(list[i])) idx = static_cast<int>(i);
        } else {
            bad.push_back("unknown quantity: " + where);
            continue;
        }
        if (idx < 0) {
            bad.push_back("value not found bit-exact: " + where);
            continue;
        }
        if (used[rec->key() + g.quantity + std::to_string(idx)]++) bad.push_back("duplicate row: " + where);
    }
    std::size_t cells = 0;
    for (const auto& r : material_table()) {
        if (r.partial) continue;
        cells += r.ground_splittings.size() + r.excited_splittings.size() + r.T2_opt.size() + r.T2_HF.size() +
                 (r.T1_opt ? 1 : 0) + (r.T1_HF ? 1 : 0);
    }
    if (cells != rows.size()) {
        bad.push_back("table has " + std::to_string(cells) + " values, golden file " + std::to_string(rows.size()));
    }
    return bad;
}

}  // namespace testing_support
