// acceptance.cpp - one PASS/FAIL line per acceptance criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "golden.hpp"
#include "support.hpp"

using namespace plmqm;
using testing_support::ref_efficiency;
namespace fs = std::filesystem;

namespace {

const std::string source_dir = PLMQM_SOURCE_DIR;
const std::string cli = PLMQM_CLI;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimConfig base_config()
{
    return SimConfig{};
}

EchoReport run(const SimConfig& c) { return testing_support::run(c); }

// 1. Transmitted amplitude against exp(-alpha_s L / 2).
void criterion_1(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (real a : {0.5, 2.0, 5.0}) {
        SimConfig c = base_config();
        detail::set_depths(c, a, 2.0);
        o.require(c.ensemble.delta_in * c.protocol.fwhm >= 20.0, "broadband regime");
        const auto setup = make_setup(c);
        const auto tl = make_timeline(c);
        PlmPrep prep;
        prep.rf.area = c.protocol.theta0;
        prep.tau = c.protocol.tau;
        prep.T = c.protocol.T;
        auto st = prepare_plm(init_state(setup.spectral, setup.spatial, setup.scheme), prep);
        const auto& sig = signal_of(tl);
        const auto r = propagate_absorption(st, sig, setup.stage);
        const real amp = std::sqrt(r.transmitted.energy() / sig.energy());
        const real rel = std::abs(amp / std::exp(-a / 2) - 1.0);
        o.detail << " aL=" << a << " rel=" << rel;
        o.require(rel <= 0.01, "amplitude within 1%");
    }
    const double s = seconds_since(t0);
    o.detail << " time=" << s << "s";
    o.require(s <= 10.0, "runtime <= 10 s");
}

// 2. Per-bin |s13/s23| = cot(theta0/2).
void criterion_2(Outcome& o)
{
    for (real th : {pi / 3, pi / 2, 2 * pi / 3}) {
        SimConfig c = base_config();
        c.protocol.theta0 = th;
        const auto setup = make_setup(c);
        PlmPrep prep;
        prep.rf.area = th;
        prep.tau = c.protocol.tau;
        prep.T = c.protocol.T;
        auto st = prepare_plm(init_state(setup.spectral, setup.spatial, setup.scheme), prep);
        const auto r = propagate_absorption(st, signal_of(make_timeline(c)), setup.stage);
        real smax = 0.0;
        for (const auto& s : r.state.sites) smax = std::max(smax, std::abs(s.s23));
        const real want = 1.0 / std::tan(th / 2);
        real worst = 0.0;
        for (const auto& s : r.state.sites) {
            if (std::abs(s.s23) < 1e-6 * smax) continue;
            worst = std::max(worst, std::abs(std::abs(s.s13) / std::abs(s.s23) / want - 1.0));
        }
        o.detail << " theta0=" << th << " worst_rel=" << worst;
        o.require(smax > 0.0 && worst <= 0.01, "ratio within 1%");
    }
}

// 3. Efficiency grid against the closed form.
void criterion_3(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = load_config(source_dir + "/configs/sweep_efficiency.yaml");
    const auto res = run_sweep(cfg);
    real worst = 0.0;
    for (const auto& r : res.rows) {
        // Closed form evaluated independently of the library oracle.
        const auto d = split_depth(r.outer, r.value);
        const real want = ref_efficiency(r.outer, d.alpha_sL, d.alpha_eL);
        worst = std::max(worst, std::abs(r.efficiency_sim / want - 1.0));
    }
    const double s = seconds_since(t0);
    o.detail << " points=" << res.rows.size() << " worst_rel=" << worst << " time=" << s << "s";
    o.require(res.rows.size() == 12, "12 grid points");
    o.require(worst <= 0.02, "within 2%");
    o.require(s <= 60.0, "runtime <= 60 s");
}

// 4. Deep symmetric medium with an asymmetric input.
void criterion_4(Outcome& o)
{
    const auto c = load_config(source_dir + "/configs/perfect_recovery.yaml");
    const auto d = config_depths(c);
    const auto rep = run(c);
    o.detail << " aSL=" << d.alpha_sL << " aEL=" << d.alpha_eL << " eta=" << rep.efficiency
             << " fidelity=" << rep.shape_fidelity << " reversed=" << rep.reversed_fidelity
             << " delay=" << rep.best_delay;
    o.require(std::abs(d.alpha_sL - 20) < 1e-9 && std::abs(d.alpha_eL - 20) < 1e-9, "depth 20");
    o.require(rep.efficiency >= 0.99, "eta >= 0.99");
    o.require(rep.shape_fidelity >= 0.99, "fidelity >= 0.99");
    o.require(std::abs(rep.best_delay - c.protocol.T) <= 2 * c.protocol.dt, "lag T");
    o.require(rep.shape_fidelity > rep.reversed_fidelity, "not time-reversed");
}

// 5. Efficiency maximum over a 21-point theta0 sweep.
void criterion_5(Outcome& o)
{
    auto cfg = load_config(source_dir + "/configs/sweep_theta.yaml");
    cfg.ensemble.bins = 401;
    cfg.ensemble.cells = 100;
    cfg.protocol.T = 60e-6;
    const auto res = run_sweep(cfg);
    std::size_t best_sim = 0, best_x = 0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const real x = std::tan(res.rows[i].value / 2);  // unit coupling ratio
        const real bx = std::tan(res.rows[best_x].value / 2);
        if (res.rows[i].efficiency_sim > res.rows[best_sim].efficiency_sim) best_sim = i;
        if (std::abs(x - 1) < std::abs(bx - 1)) best_x = i;
    }
    o.detail << " points=" << res.rows.size() << " argmax_theta=" << res.rows[best_sim].value
             << " min|x-1|_theta=" << res.rows[best_x].value;
    o.require(res.rows.size() == 21, "21 points");
    o.require(best_sim == best_x, "argmax at the symmetric point");
}

// 6. Echo timing for every variant.
void criterion_6(Outcome& o)
{
    auto check = [&](const char* name, SimConfig c) {
        const auto rep = run(c);
        const real err = std::abs(rep.peak_time - rep.expected_peak_time);
        o.detail << " " << name << ": peak=" << rep.peak_time << " expected=" << rep.expected_peak_time;
        o.require(err <= 2 * c.protocol.dt, std::string(name) + " within 2 dt");
        return rep;
    };
    const auto basic = check("basic", base_config());
    // Independent check of the expected time: t_s + T from the signal centre.
    const auto tl = make_timeline(base_config());
    o.require(std::abs(basic.expected_peak_time - (signal_of(tl).reference_time + base_config().protocol.T)) < 1e-12,
              "basic expected time t_s + T");

    auto up = load_config(source_dir + "/configs/reprogrammed.yaml");
    check("T+T'", up);
    auto down = up;
    down.protocol.reprogram.pair = Transition::t24;
    check("T-T'", down);
    check("on_demand", load_config(source_dir + "/configs/on_demand.yaml"));
}

// 7. Echo carriers.
void criterion_7(Outcome& o)
{
    const auto basic = run(base_config());
    const auto fp = run(load_config(source_dir + "/configs/frequency_preserving.yaml"));
    const real rel = std::abs(fp.efficiency / basic.efficiency - 1.0);
    o.detail << " basic_carrier=" << to_string(basic.echo_carrier) << " fp_carrier=" << to_string(fp.echo_carrier)
             << " eta_basic=" << basic.efficiency << " eta_fp=" << fp.efficiency;
    o.require(basic.echo_carrier == Transition::t13, "basic on 1-3");
    o.require(fp.echo_carrier == Transition::t23, "frequency-preserving on 2-3");
    o.require(rel <= 0.02, "eta within 2%");
}

// 8. Phase matching.
void criterion_8(Outcome& o)
{
    const real k = 1.07e7;
    const auto m = echo_wavevector(backward_geometry(k, 30.0, k, k, k - 30.0, 0.01));
    o.require(m.k_e.z < 0.0 && m.backward, "backward echo has negative z");
    o.require(m.matched, "backward geometry matched");

    std::mt19937 rng(42);
    std::normal_distribution<real> nd(0.0, 1e7);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        Geometry g;
        g.k_s = {nd(rng), nd(rng), nd(rng)};
        g.k0 = {nd(rng) * 1e-6, nd(rng) * 1e-6, nd(rng) * 1e-6};
        g.k1 = {nd(rng), nd(rng), nd(rng)};
        g.k2 = {nd(rng), nd(rng), nd(rng)};
        g.k_W = WaveVector{nd(rng), nd(rng), nd(rng)};
        g.k_R1 = WaveVector{nd(rng), nd(rng), nd(rng)};
        g.k31 = 1e7;
        g.L = 0.01;
        const auto r = raman_output_wavevectors(g);
        const auto e = echo_wavevector(g);
        // Componentwise identities, evaluated in the same association order.
        const WaveVector o1{g.k_s.x - g.k_W->x + g.k_R1->x, g.k_s.y - g.k_W->y + g.k_R1->y,
                            g.k_s.z - g.k_W->z + g.k_R1->z};
        const WaveVector dk{g.k0.x - g.k1.x + g.k2.x, g.k0.y - g.k1.y + g.k2.y, g.k0.z - g.k1.z + g.k2.z};
        const WaveVector o2{o1.x + dk.x, o1.y + dk.y, o1.z + dk.z};
        const WaveVector ke{g.k_s.x + dk.x, g.k_s.y + dk.y, g.k_s.z + dk.z};
        if (!(r.k_out1 == o1) || !(r.k_out2 == o2) || !(e.k_e == ke) || e.backward != (ke.z < 0)) ++bad;
    }
    o.detail << " random_geometries=1000 mismatches=" << bad;
    o.require(bad == 0, "identities exact");
}

// 9. Materials.
void criterion_9(Outcome& o)
{
    const auto bad = testing_support::golden_mismatches(source_dir + "/data/materials.csv");
    for (const auto& b : bad) o.detail << " {" << b << "}";
    o.require(bad.empty(), "golden table bit-exact");

    TimescaleBudget b;
    b.T2_star = 0.1e-6;
    b.dt_s = 10e-6;
    b.T = 100e-6;
    b.tau = 1e-6;
    b.t0 = 1.0;
    const bool eu = feasibility(lookup("Eu", "151", 1), b, 1.37).passed();
    b.t0 = 10e-3;
    const auto pr = feasibility(lookup("Pr", "", 1), b, 0.0);
    TimescaleBudget wide;
    wide.dt_s = 20e-9;
    const auto bw = feasibility(lookup("Pr", "", 1), wide, 0.0);
    o.detail << " eu151=" << (eu ? "pass" : "fail") << " pr_t0=" << (pr.passed() ? "pass" : "fail")
             << " pr_bandwidth=" << (bw.passed() ? "pass" : "fail");
    o.require(eu, "Eu-151 site 1 passes");
    o.require(!pr.passed() && pr.timescales.failed() == std::vector<std::string>{"t0 < T2_spin"}, "Pr t0 fails");
    o.require(!bw.passed() && !bw.bandwidth.passed, "Pr bandwidth fails");
}

// 10. Noise estimator.
void criterion_10(Outcome& o)
{
    NoiseConfig n{0.01, 1e10, 0.0, 1.9e-3, 1e-6, 0.1};
    const real base = estimate_noise(n, 0.5, 1.0).mu_noise;
    real prev = base;
    bool mono = true;
    for (int k = 1; k <= 100; ++k) {
        n.t0 = k * 0.1e-3;
        const real mu = estimate_noise(n, 0.5, 1.0).mu_noise;
        mono = mono && mu < prev;
        prev = mu;
    }
    n.t0 = n.T1_opt * std::log(100.0);
    const real ratio = estimate_noise(n, 0.5, 1.0).mu_noise / base;
    o.detail << " ratio=" << ratio;
    o.require(mono, "strictly decreasing in t0");
    o.require(std::abs(ratio - 0.01) <= 1e-12, "100x suppression");
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// 11. CLI sweep byte-identical across thread counts.
void criterion_11(Outcome& o)
{
    const fs::path root = fs::temp_directory_path() / "plmqm_acceptance";
    fs::remove_all(root);
    std::string csv[2];
    int k = 0;
    for (int threads : {1, 8}) {
        const fs::path out = root / ("t" + std::to_string(threads));
        const std::string cmd = "\"" + cli + "\" sweep --config \"" + source_dir +
                                "/configs/sweep_efficiency.yaml\" --threads " + std::to_string(threads) +
                                " --out \"" + out.string() + "\" > \"" + (root / "log.txt").string() + "\" 2>&1";
        fs::create_directories(root);
        const int rc = std::system(cmd.c_str());
        o.require(rc == 0, "cli exit 0 with " + std::to_string(threads) + " threads");
        csv[k++] = slurp(out / "efficiency_sweep.csv");
    }
    o.detail << " bytes=" << csv[0].size();
    o.require(!csv[0].empty(), "csv written");
    o.require(csv[0] == csv[1], "byte-identical");
}

}  // namespace

int main()
{
    const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
        {"Beer-Lambert transmission", criterion_1},
        {"stored coherence ratio", criterion_2},
        {"echo efficiency grid", criterion_3},
        {"perfect recovery limit", criterion_4},
        {"symmetric optimum", criterion_5},
        {"protocol timing", criterion_6},
        {"echo carriers", criterion_7},
        {"phase matching", criterion_8},
        {"materials", criterion_9},
        {"noise estimator", criterion_10},
        {"thread determinism", criterion_11},
    };
    int failures = 0;
    int n = 1;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n++ << ": " << name << ":" << o.detail.str()
                  << std::endl;
        failures += o.pass ? 0 : 1;
    }
    std::cout << "total time " << seconds_since(t0) << " s\n";
    return failures == 0 ? 0 : 1;
}
