// Command-line front end: every subcommand builds a Scenario and runs it through the harness.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "cryoswitch/errors.hpp"
#include "cryoswitch/harness.hpp"

using namespace cryoswitch;

namespace {

struct Common {
    std::string params_file;
    std::string out = "out";
    int workers = 1;
};

int report(const Scenario& s) {
    auto rep = run_scenario(s);
    std::cout << "scenario " << rep.name << " (" << kind_name(s.kind) << ") -> " << s.output_dir << "\n";
    std::cout << rep.summary.dump(2) << "\n";
    for (const auto& a : rep.assertions)
        std::cout << (a.passed ? "PASS " : "FAIL ") << a.metric << " = " << format_double(a.value) << " (" << a.rule
                  << ")\n";
    std::cout << "files:";
    for (const auto& f : rep.files) std::cout << " " << f;
    std::cout << " manifest.json\n";
    return rep.passed() ? 0 : 1;
}

Scenario base(const Common& c, ScenarioKind k) {
    Scenario s;
    s.kind = k;
    s.name = kind_name(k);
    if (!c.params_file.empty()) s.params = params_from_json(read_json_file(c.params_file));
    s.output_dir = c.out;
    s.workers = c.workers;
    return s;
}

json waveform_option(const std::string& w) {
    if (w == "square" || w == "engineered") return w;
    return read_json_file(w);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cryogenic RF-MEMS switch simulator"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--params", c.params_file, "JSON file overriding default switch parameters");
    app.add_option("--out", c.out, "output directory");
    app.add_option("--workers", c.workers, "concurrent workers for sweeps")->check(CLI::PositiveNumber);

    double temp_k = t_ref;
    std::vector<double> temps;
    std::string waveform = "square";
    double freq_hz = 1e4;

    auto* cal = app.add_subcommand("calibrate", "re-run the calibration and write params.default.json");

    auto* sim = app.add_subcommand("simulate", "transient response under one waveform");
    double t_end = 300e-6;
    bool compare = false;
    sim->add_option("--temp-k", temp_k, "temperature, K");
    sim->add_option("--waveform", waveform, "square | engineered | waveform JSON file");
    sim->add_option("--t-end", t_end, "simulated time, s");
    sim->add_flag("--compare-square", compare, "also run the 90 V square pulse and report the impact ratio");

    auto* sweep = app.add_subcommand("sweep-temp", "bounce count, damping, V_pi and R_on over temperature");
    sweep->add_option("--temps", temps, "temperatures, K (default 100 to 10 in 5 K steps)");

    auto* pullin = app.add_subcommand("pullin", "quasi-static pull-in sweep against the closed form");
    double v_step = 0.1;
    pullin->add_option("--temps", temps, "temperatures, K");
    pullin->add_option("--v-step", v_step, "voltage step, V");

    auto* rf = app.add_subcommand("rf", "insertion loss or isolation over a band");
    std::string state = "on";
    std::vector<double> band{4e9, 8e9};
    int points = 101;
    rf->add_option("--state", state, "on | off")->check(CLI::IsMember({"on", "off"}));
    rf->add_option("--temp-k", temps, "temperatures, K (default 295 and 5.8)");
    rf->add_option("--band", band, "f_lo f_hi, Hz")->expected(2);
    rf->add_option("--points", points, "sweep points");

    auto* opt = app.add_subcommand("optimize", "tune the engineered waveform for a soft landing");
    std::vector<std::string> free_params{"v_coast", "t_coast", "t_kick"};
    int max_evals = 150;
    opt->add_option("--temp-k", temp_k, "temperature, K");
    opt->add_option("--free", free_params, "free EngineeredSpec fields");
    opt->add_option("--max-evals", max_evals, "objective evaluation budget");

    auto* logic = app.add_subcommand("logic", "NAND / NOR truth table and transient");
    std::string gate_kind = "nand";
    logic->add_option("--gate", gate_kind, "nand | nor")->check(CLI::IsMember({"nand", "nor"}));
    logic->add_option("--temp-k", temp_k, "temperature, K");
    logic->add_option("--freq-hz", freq_hz, "gate drive frequency, Hz");
    logic->add_option("--waveform", waveform, "square | engineered | waveform JSON file");

    auto* rt = app.add_subcommand("route", "SP4T routing with one gate driven");
    int gate_n = 1;
    rt->add_option("--gate", gate_n, "gate 1..4")->check(CLI::Range(1, 4));
    rt->add_option("--temp-k", temp_k, "temperature, K");
    rt->add_option("--freq-hz", freq_hz, "gate drive frequency, Hz");

    auto* cyc = app.add_subcommand("cycle", "repeated actuation determinism check");
    long cycles = 10000;
    cyc->add_option("--cycles", cycles, "number of cycles");
    cyc->add_option("--temp-k", temp_k, "temperature, K");
    cyc->add_option("--waveform", waveform, "square | engineered | waveform JSON file");

    auto* bud = app.add_subcommand("budget", "actuation power of N switches against the cooling budget");
    int n_switches = 32;
    double volts = 90.0, budget = 20e-6;
    bud->add_option("--switches", n_switches, "switch count");
    bud->add_option("--freq-hz", freq_hz, "gate frequency, Hz");
    bud->add_option("--v", volts, "gate voltage, V");
    bud->add_option("--budget", budget, "power budget, W");

    auto* repro = app.add_subcommand("repro", "run a named figure preset");
    std::string figure;
    bool list = false;
    repro->add_option("figure-id", figure, "preset name");
    repro->add_flag("--list", list, "list presets");

    auto* run = app.add_subcommand("run", "run a scenario JSON document");
    std::string scenario_file;
    run->add_option("scenario", scenario_file, "scenario file")->required();

    auto* verify = app.add_subcommand("verify", "re-run a manifest and compare outputs byte for byte");
    std::string manifest;
    verify->add_option("manifest", manifest, "manifest.json of a previous run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cal->parsed()) return report(base(c, ScenarioKind::calibrate));
        if (sim->parsed()) {
            auto s = base(c, ScenarioKind::transient);
            s.env.temperature = temp_k;
            s.options = {{"waveform", waveform_option(waveform)}, {"t_end", t_end}, {"compare_square", compare}};
            return report(s);
        }
        if (sweep->parsed()) {
            auto s = base(c, ScenarioKind::temp_sweep);
            if (!temps.empty()) s.options["temperatures"] = temps;
            return report(s);
        }
        if (pullin->parsed()) {
            auto s = base(c, ScenarioKind::pullin_sweep);
            if (!temps.empty()) s.options["temperatures"] = temps;
            s.options["v_step"] = v_step;
            return report(s);
        }
        if (rf->parsed()) {
            auto s = base(c, ScenarioKind::rf);
            s.options = {{"state", state}, {"f_lo", band[0]}, {"f_hi", band[1]}, {"n", points}};
            if (!temps.empty()) s.options["temperatures"] = temps;
            return report(s);
        }
        if (opt->parsed()) {
            auto s = base(c, ScenarioKind::optimize);
            s.env.temperature = temp_k;
            s.options = {{"free", free_params}, {"max_evaluations", max_evals}};
            return report(s);
        }
        if (logic->parsed()) {
            auto s = base(c, ScenarioKind::logic);
            s.env.temperature = temp_k;
            s.options = {{"gate", gate_kind}, {"freq_hz", freq_hz}, {"waveform", waveform_option(waveform)}};
            return report(s);
        }
        if (rt->parsed()) {
            auto s = base(c, ScenarioKind::route);
            s.env.temperature = temp_k;
            s.options = {{"gate", gate_n}, {"freq_hz", freq_hz}};
            return report(s);
        }
        if (cyc->parsed()) {
            auto s = base(c, ScenarioKind::cycle);
            s.env.temperature = temp_k;
            s.options = {{"n_cycles", cycles}, {"waveform", waveform_option(waveform)}};
            return report(s);
        }
        if (bud->parsed()) {
            auto s = base(c, ScenarioKind::budget);
            s.options = {{"n_switches", n_switches}, {"freq_hz", freq_hz}, {"v", volts}, {"budget", budget}};
            s.expect = {{"within_budget", {{"min", 1}}}};
            return report(s);
        }
        if (repro->parsed()) {
            if (list || figure.empty()) {
                for (const auto& n : preset_names()) std::cout << n << "\n";
                return 0;
            }
            auto s = preset(figure);
            if (!c.params_file.empty()) s.params = params_from_json(read_json_file(c.params_file));
            s.output_dir = c.out;
            s.workers = c.workers;
            return report(s);
        }
        if (run->parsed()) {
            auto s = scenario_from_json(read_json_file(scenario_file));
            if (app.get_option("--out")->count()) s.output_dir = c.out;
            s.workers = c.workers;
            return report(s);
        }
        if (verify->parsed()) {
            bool same = verify_manifest(manifest, c.out);
            std::cout << (same ? "outputs reproduced byte for byte\n" : "outputs differ from the manifest\n");
            return same ? 0 : 1;
        }
    } catch (const cryoswitch::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
