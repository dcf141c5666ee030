#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cryoswitch/calibration.hpp"
#include "cryoswitch/core_model.hpp"
#include "cryoswitch/dynamics.hpp"
#include "cryoswitch/harness.hpp"
#include "cryoswitch/network.hpp"
#include "cryoswitch/optimize.hpp"
#include "cryoswitch/rf.hpp"
#include "cryoswitch/waveform.hpp"

using namespace cryoswitch;
namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.str().c_str());
    std::fflush(stdout);
}

Environment at(double T) { return at_temperature(Environment{}, T); }

SimConfig config(double t_end, double dt = 1e-9) {
    SimConfig c;
    c.t_end = t_end;
    c.dt = dt;
    return c;
}

bool within(double v, double target, double rel) { return std::abs(v - target) <= rel * std::abs(target); }

}  // namespace

int main(int argc, char** argv) {
    const auto suite_start = clock_type::now();
    const fs::path out_root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
    fs::create_directories(out_root);

    // Everything below runs on parameters produced by the calibration pipeline itself,
    // which must also agree with the frozen defaults.
    SwitchParams p;
    double calibration_s = 0.0;
    {
        auto t0 = clock_type::now();
        p = calibrate_defaults();
        calibration_s = seconds_since(t0);
    }
    const SwitchParams frozen = default_params();
    const double square_v = 90.0;
    const Waveform square = square_pulse(square_v, 50e-6, default_period, 1);
    const Waveform engineered = engineered_waveform(EngineeredSpec{}, pull_in_voltage(p, t_cryo), default_period, 1);

    criterion(1, "pull-in oracle equivalence", [&](Outcome& o) {
        auto t0 = clock_type::now();
        double worst = 0.0;
        for (double T : {295.0, 150.0, 77.0, 5.8, 0.0}) {
            auto sw = quasi_static_sweep(p, at(T), 100.0, 0.1);
            o.require(sw.v_pull_in.has_value(), "pull-in found at " + fmt("%g K", T));
            if (sw.v_pull_in) worst = std::max(worst, std::abs(*sw.v_pull_in / pull_in_voltage(p, T) - 1.0));
        }
        double rt = seconds_since(t0);
        o.require(worst <= 0.01, "max rel error " + fmt("%.4f", worst) + " <= 0.01");
        o.require(rt < 5.0, "runtime " + fmt("%.3f s", rt) + " < 5 s");
    });

    criterion(2, "cryogenic pull-in shift", [&](Outcome& o) {
        double r58 = pull_in_voltage(p, 5.8) / pull_in_voltage(p, 295.0);
        double r0 = pull_in_voltage(p, 0.0) / pull_in_voltage(p, 295.0);
        o.require(std::abs(r58 - 0.969) <= 0.005, "V_pi(5.8)/V_pi(295) = " + fmt("%.4f", r58) + " in 0.969 +- 0.005");
        o.require(std::abs(r0 - 0.965) <= 0.005, "V_pi(0)/V_pi(295) = " + fmt("%.4f", r0) + " in 0.965 +- 0.005");
        double drift = std::max({std::abs(p.mass_eff / frozen.mass_eff - 1), std::abs(p.stiffness / frozen.stiffness - 1),
                                 std::abs(p.gas_damping_ref / frozen.gas_damping_ref - 1),
                                 std::abs(p.struct_damping / frozen.struct_damping - 1)});
        o.require(drift <= 1e-9, "calibration reproduces frozen defaults (rel " + fmt("%.1e", drift) + ", " +
                                     fmt("%.1f s", calibration_s) + ")");
    });

    criterion(3, "on-resistance shift", [&](Outcome& o) {
        double r = on_resistance(p, 5.8) / on_resistance(p, 295.0);
        o.require(std::abs(r - 0.847) <= 1e-12, "R(5.8)/R(295) = " + fmt("%.15g", r));
    });

    criterion(4, "switching time", [&](Outcome& o) {
        auto warm = switching_time(simulate_transient(p, at(295.0), square, config(20e-6)));
        o.require(warm && within(*warm, 2.7e-6, 0.05),
                  "295 K square " + (warm ? fmt("%.3f us", *warm * 1e6) : std::string("never closed")) +
                      " in 2.7 us +- 5%");
        auto cold = switching_time(simulate_transient(p, at(t_cryo), engineered, config(20e-6)));
        o.require(cold && within(*cold, 3.3e-6, 0.15),
                  "5.8 K engineered " + (cold ? fmt("%.3f us", *cold * 1e6) : std::string("never closed")) +
                      " in 3.3 us +- 15%");
    });

    criterion(5, "bounce phenomenology", [&](Outcome& o) {
        auto cold = bounce_metrics(simulate_transient(p, at(t_cryo), square, config(300e-6)));
        o.require(cold.bounce_count >= 5, "5.8 K bounces " + std::to_string(cold.bounce_count) + " >= 5");
        o.require(cold.ring_down_duration >= 75e-6 && cold.ring_down_duration <= 300e-6,
                  "ring-down " + fmt("%.1f us", cold.ring_down_duration * 1e6) + " in [75, 300] us");
        auto warm = bounce_metrics(simulate_transient(p, at(295.0), square, config(300e-6)));
        o.require(warm.bounce_count <= 1, "295 K bounces " + std::to_string(warm.bounce_count) + " <= 1");
        std::vector<double> temps;
        for (double T = 100.0; T >= 10.0 - 1e-9; T -= 5.0) temps.push_back(T);
        SimConfig cfg = config(300e-6);
        cfg.record_stride = 10;
        auto sweep = temperature_sweep(p, Environment{}, temps, square, cfg, 4);
        o.require(sweep.onset && *sweep.onset > 77.4 && *sweep.onset < 90.2,
                  "onset " + (sweep.onset ? fmt("%g K", *sweep.onset) : std::string("none")) + " in (77.4, 90.2) K");
    });

    criterion(6, "soft landing", [&](Outcome& o) {
        auto sq = bounce_metrics(simulate_transient(p, at(t_cryo), square, config(100e-6)));
        auto en = bounce_metrics(simulate_transient(p, at(t_cryo), engineered, config(100e-6)));
        double reduction = sq.first_impact_velocity / en.first_impact_velocity;
        o.require(reduction >= 10.0, "engineered impact reduction " + fmt("%.2fx", reduction) + " >= 10x");
        o.require(en.bounce_count <= 1, "engineered bounces " + std::to_string(en.bounce_count) + " <= 1");

        OptimizerOptions opt;
        opt.workers = 4;
        auto mask = mask_of({SpecParam::v_kick, SpecParam::t_kick, SpecParam::v_coast, SpecParam::t_coast,
                             SpecParam::v_catch});
        auto bounds = default_bounds(p, t_cryo);
        auto first = optimize_waveform(p, at(t_cryo), EngineeredSpec{}, mask, bounds, ObjectiveWeights{}, opt);
        std::vector<EngineeredSpec> templates = {EngineeredSpec{}, first.spec,
                                                 EngineeredSpec{95, 1.2e-6, 30, 2e-6, 90, 47e-6, 0, 1e-6, 80, 2e-6}};
        bool monotone = true;
        for (const auto& t : templates) {
            auto r = optimize_waveform(p, at(t_cryo), t, mask, bounds, ObjectiveWeights{}, opt);
            double rescored = score_landing(p, at(t_cryo), r.spec, ObjectiveWeights{}, opt).objective;
            monotone = monotone && r.objective <= r.template_objective && r.objective == rescored;
            for (size_t i = 1; i < r.history.size(); ++i) monotone = monotone && r.history[i].second <= r.history[i - 1].second;
        }
        o.require(monotone, "optimizer never worsens the objective (3 templates)");
        o.detail << "; optimized spec: impact reduction " << fmt("%.1fx", sq.first_impact_velocity / first.score.impact_velocity)
                 << ", " << first.score.bounce_count << " bounces, " << fmt("%.3f us", first.score.t_close * 1e6);
    });

    criterion(7, "RF bounds", [&](Outcome& o) {
        auto il_rt = insertion_loss_sweep(p, 295.0);
        auto il_cr = insertion_loss_sweep(p, t_cryo);
        auto iso_rt = isolation_sweep(p, 295.0);
        auto iso_cr = isolation_sweep(p, t_cryo);
        o.require(il_rt.size() == 101 && il_cr.size() == 101 && iso_rt.size() == 101 && iso_cr.size() == 101,
                  "101-point sweeps");
        double worst_il = 0.0, worst_iso = 1e300;
        bool pointwise = true;
        for (size_t i = 0; i < il_rt.size(); ++i) {
            worst_il = std::max({worst_il, insertion_loss_db(il_rt[i]), insertion_loss_db(il_cr[i])});
            worst_iso = std::min({worst_iso, isolation_db(iso_rt[i]), isolation_db(iso_cr[i])});
            pointwise = pointwise && insertion_loss_db(il_cr[i]) <= insertion_loss_db(il_rt[i]);
        }
        o.require(worst_il < 0.5, "max insertion loss " + fmt("%.3f dB", worst_il) + " < 0.5 dB");
        o.require(worst_iso > 35.0, "min isolation " + fmt("%.2f dB", worst_iso) + " > 35 dB");
        o.require(pointwise, "cryo loss <= RT loss pointwise");
    });

    criterion(8, "power", [&](Outcome& o) {
        double pw = actuation_power(12e-15, 90.0, 1e4);
        o.require(std::abs(pw - 0.486e-6) <= 1e-12 * 0.486e-6, "actuation power " + fmt("%.6g uW", pw * 1e6));
        auto b = budget_report(p, 32, 90.0, 1e4);
        o.require(b.within_budget(), "32 switches " + fmt("%.3f uW", b.total * 1e6) + " <= 20 uW");
    });

    criterion(9, "logic", [&](Outcome& o) {
        LogicCircuit series{Topology::series, 1e4, 1.0, 2};
        LogicCircuit parallel{Topology::parallel, 1e4, 1.0, 2};
        bool exact = true;
        for (double T : {295.0, t_cryo})
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    exact = exact && nand(a, b, series, p, T).bit == !(a && b);
                    exact = exact && nor(a, b, parallel, p, T).bit == !(a || b);
                }
        o.require(exact, "NAND/NOR truth tables at 295 K and 5.8 K");
        double worst = 0.0;
        bool measured = true;
        for (const char* id : {"fig6c", "fig6f"})
            for (double T : {t_cryo, 295.0}) {
                Scenario s = preset(id);
                s.params = p;
                s.env = at(T);
                s.output_dir = (out_root / (std::string(id) + "_" + fmt("%gK", T))).string();
                auto rep = run_scenario(s);
                const auto& e = rep.summary["edge_lag_rel_error"];
                if (e.is_number())
                    worst = std::max(worst, e.get<double>());
                else
                    measured = false;
            }
        o.require(measured && worst <= 0.1, "edge lag vs switching time rel error " + fmt("%.4f", worst) + " <= 0.1");
    });

    criterion(10, "numerics", [&](Outcome& o) {
        SwitchParams u = p;
        u.struct_damping = 0.0;
        u.gas_damping_ref = 0.0;
        const double period = 2 * std::acos(-1.0) * std::sqrt(u.mass_eff / u.stiffness);
        SimConfig cfg = config(100 * period);
        cfg.x0 = 1e-9;
        auto tr = simulate_transient(u, at(295.0), Waveform{{{0.0, 1e-3}}, 1e-3, 1}, cfg);
        double e0 = 0.5 * u.stiffness * cfg.x0 * cfg.x0, drift = 0.0;
        for (size_t i = 0; i < tr.times.size(); ++i) {
            double x = tr.tip_position[i], v = tr.tip_velocity[i];
            drift = std::max(drift, std::abs(0.5 * u.mass_eff * v * v + 0.5 * u.stiffness * x * x - e0) / e0);
        }
        o.require(drift < 1e-6, "energy drift " + fmt("%.2e", drift) + " < 1e-6 over 100 periods");

        double worst = 0.0;
        for (auto [T, w] : {std::pair{295.0, square}, std::pair{t_cryo, square}, std::pair{t_cryo, engineered}}) {
            auto a = switching_time(simulate_transient(p, at(T), w, config(20e-6, 1e-9)));
            auto b = switching_time(simulate_transient(p, at(T), w, config(20e-6, 0.5e-9)));
            if (!a || !b) {
                worst = 1.0;
                continue;
            }
            worst = std::max(worst, std::abs(*b / *a - 1.0));
        }
        o.require(worst < 1e-3, "dt halving changes switching time by " + fmt("%.2e", worst) + " < 1e-3");

        bool reproducible = true;
        std::string broken;
        for (const auto& id : preset_names()) {
            Scenario s = preset(id);
            s.output_dir = (out_root / "presets" / id).string();
            s.workers = 4;
            run_scenario(s);
            if (!verify_manifest((fs::path(s.output_dir) / "manifest.json").string(),
                                 (out_root / "verify" / id).string())) {
                reproducible = false;
                broken += " " + id;
            }
        }
        o.require(reproducible, "all " + std::to_string(preset_names().size()) + " presets bit-reproducible from manifests" +
                                    (broken.empty() ? "" : " (differs:" + broken + ")"));
        double total = seconds_since(suite_start);
        o.require(total < 120.0, "acceptance runtime " + fmt("%.1f s", total) + " < 120 s");
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
