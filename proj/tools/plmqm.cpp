// plmqm.cpp - command-line front end: run, sweep, oracle, phasematch,
// materials, validate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "plmqm/plmqm.hpp"

namespace fs = std::filesystem;
using namespace plmqm;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_numerical = 3;

struct Common {
    std::string config;
    std::string out;
    int threads = 1;
    long seed = 0;  // reserved; every path is deterministic
};

void add_common(CLI::App* app, Common& c, bool needs_config)
{
    auto* opt = app->add_option("--config", c.config, "configuration file (YAML)")->envname("PLMQM_CONFIG");
    if (needs_config) opt->required();
    app->add_option("--out", c.out, "output directory (overrides output.dir)")->envname("PLMQM_OUT");
    app->add_option("--threads", c.threads, "worker threads")->envname("PLMQM_THREADS")->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "reserved")->envname("PLMQM_SEED");
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InvalidConfig("cannot write '" + p.string() + "'");
    f << text;
}

fs::path output_dir(const SimConfig& cfg, const Common& c)
{
    fs::path dir = c.out.empty() ? fs::path(cfg.output.dir) : fs::path(c.out);
    fs::create_directories(dir);
    return dir;
}

// Fails with the names of violated constraints.
void check_budget(const SimConfig& cfg)
{
    const auto rep = validate_timescales(make_budget(cfg), cfg.budget.margin);
    if (!rep.all_passed()) {
        std::string names;
        for (const auto& n : rep.failed()) names += (names.empty() ? "" : ", ") + n;
        throw InvalidConfig("timescale constraint violated: " + names);
    }
}

json validate_json(const SimConfig& cfg, bool& ok)
{
    json j;
    const auto ts = validate_timescales(make_budget(cfg), cfg.budget.margin);
    j["timescales"] = to_json(ts);
    ok = ts.all_passed();
    if (cfg.material) {
        const auto& m = *cfg.material;
        const auto& rec = lookup(m.ion, m.isotope, m.site, m.host);
        auto budget = make_budget(cfg);
        budget.T2_opt.reset();
        budget.T2_spin.reset();
        budget.T1_opt.reset();
        const auto f = feasibility(rec, budget, m.B, cfg.budget.margin);
        j["material"] = rec.key();
        j["feasibility"] = to_json(f);
        ok = ok && f.passed();
    }
    return j;
}

int cmd_run(const Common& c)
{
    const SimConfig cfg = load_config(c.config);
    check_budget(cfg);
    const auto timeline = make_timeline(cfg);
    const auto setup = make_setup(cfg, c.threads);
    const auto rates = make_rates(cfg);
    const EchoReport rep = run_timeline(timeline, setup, rates);

    json j = to_json(rep);
    j["variant"] = std::string(to_string(cfg.protocol.variant));
    j["oracle_efficiency"] = oracle_efficiency(cfg);
    j["symmetry_parameter"] = num_json(config_symmetry_parameter(cfg));
    if (cfg.noise) {
        const auto& n = *cfg.noise;
        const NoiseConfig nc{n.pulse_error, n.atom_number, n.t0, n.T1_opt, n.gate, n.collection};
        j["noise"] = to_json(estimate_noise(nc, rep.efficiency, n.n_signal_photons));
    }
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    j["effective_config"] = emit_config(cfg);

    const fs::path dir = output_dir(cfg, c);
    const std::string pre = cfg.output.prefix;
    write_file(dir / (pre + "_report.json"), dump(j));
    write_file(dir / (pre + "_echo.csv"), envelope_csv(rep.echo));
    write_file(dir / (pre + "_transmitted.csv"), envelope_csv(rep.transmitted));
    std::cout << dump(j);
    return exit_ok;
}

int cmd_sweep(const Common& c)
{
    const SimConfig cfg = load_config(c.config);
    check_budget(cfg);
    const auto result = run_sweep(cfg, c.threads);
    const std::string csv = sweep_csv(result);
    const fs::path dir = output_dir(cfg, c);
    write_file(dir / (cfg.output.prefix + "_sweep.csv"), csv);
    std::cout << csv;
    return exit_ok;
}

int cmd_phasematch(const Common& c)
{
    const SimConfig cfg = load_config(c.config);
    const Geometry g = make_geometry(cfg);
    json j;
    j["delta_k_sc_rad_per_m"] = to_json(scattered_wavevector(g.k0, g.k1, g.k2));
    j["echo"] = to_json(echo_wavevector(g));
    if (g.k_W && g.k_R1) {
        const auto r = raman_output_wavevectors(g);
        j["raman"] = {{"k_out1_rad_per_m", to_json(r.k_out1)}, {"k_out2_rad_per_m", to_json(r.k_out2)}};
    }
    std::cout << dump(j);
    return exit_ok;
}

int cmd_validate(const Common& c)
{
    const SimConfig cfg = load_config(c.config);
    bool ok = true;
    const json j = validate_json(cfg, ok);
    std::cout << dump(j);
    return ok ? exit_ok : exit_invalid;
}

template <typename F>
int guarded(F&& f)
{
    try {
        return f();
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::logic_error& e) {  // not-found, precondition
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const InsufficientData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Photon-echo memory simulator on a pre-created spin coherence"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts, pm_opts, val_opts;
    auto* run = app.add_subcommand("run", "simulate one protocol timeline");
    add_common(run, run_opts, true);
    auto* sweep = app.add_subcommand("sweep", "efficiency sweep against the closed form");
    add_common(sweep, sweep_opts, true);
    auto* pm = app.add_subcommand("phasematch", "wavevector report for the configured geometry");
    add_common(pm, pm_opts, true);
    auto* val = app.add_subcommand("validate", "timescale and material feasibility checks");
    add_common(val, val_opts, true);

    auto* oracle = app.add_subcommand("oracle", "closed-form values");
    oracle->require_subcommand(1);
    real ox = 1.0, oas = 0.0, oae = 0.0, oratio = 1.0, otheta = pi / 2;
    auto* o_eff = oracle->add_subcommand("efficiency", "retrieval efficiency");
    o_eff->add_option("--x", ox, "symmetry parameter")->required();
    o_eff->add_option("--alpha-sl", oas, "alpha_s L")->required();
    o_eff->add_option("--alpha-el", oae, "alpha_e L")->required();
    auto* o_sym = oracle->add_subcommand("symmetry", "symmetry parameter x");
    o_sym->add_option("--ratio", oratio, "|g_s / g_e|")->required();
    o_sym->add_option("--theta0", otheta, "RF area, rad")->required();

    auto* mat = app.add_subcommand("materials", "embedded material records");
    mat->require_subcommand(1);
    auto* m_list = mat->add_subcommand("list", "all records");
    auto* m_look = mat->add_subcommand("lookup", "one record");
    std::string ion, isotope, host;
    int site = 0;
    m_look->add_option("ion", ion)->required();
    m_look->add_option("isotope", isotope)->required();
    m_look->add_option("site", site)->required();
    m_look->add_option("--host", host);

    CLI11_PARSE(app, argc, argv);

    if (*run) return guarded([&] { return cmd_run(run_opts); });
    if (*sweep) return guarded([&] { return cmd_sweep(sweep_opts); });
    if (*pm) return guarded([&] { return cmd_phasematch(pm_opts); });
    if (*val) return guarded([&] { return cmd_validate(val_opts); });
    if (*o_eff) {
        return guarded([&] {
            const real eta = retrieval_efficiency(ox, oas, oae);
            json j;
            j["x"] = ox;
            j["alpha_sL"] = oas;
            j["alpha_eL"] = oae;
            j["efficiency"] = eta;
            j["echo_amplitude_ratio"] = std::sqrt(eta);
            std::cout << dump(j);
            return exit_ok;
        });
    }
    if (*o_sym) {
        return guarded([&] {
            const real x = symmetry_parameter(oratio, otheta);
            json j;
            j["x"] = x;
            j["condition_met"] = symmetry_condition_met(x);
            std::cout << dump(j);
            return exit_ok;
        });
    }
    if (*m_list) {
        json j = json::array();
        for (const auto& r : material_table()) j.push_back(to_json(r));
        std::cout << dump(j);
        return exit_ok;
    }
    if (*m_look) {
        return guarded([&] {
            std::cout << dump(to_json(lookup(ion, isotope, site, host)));
            return exit_ok;
        });
    }
    return exit_ok;
}
