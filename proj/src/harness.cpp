#include "cryoswitch/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <utility>

#include "cryoswitch/calibration.hpp"
#include "cryoswitch/errors.hpp"
#include "cryoswitch/network.hpp"
#include "cryoswitch/optimize.hpp"
#include "cryoswitch/parallel.hpp"
#include "cryoswitch/rf.hpp"

namespace cryoswitch {

namespace fs = std::filesystem;

namespace {

const std::pair<ScenarioKind, const char*> kind_names[] = {
    {ScenarioKind::transient, "transient"}, {ScenarioKind::temp_sweep, "temp_sweep"},
    {ScenarioKind::pullin_sweep, "pullin_sweep"}, {ScenarioKind::rf, "rf"},
    {ScenarioKind::optimize, "optimize"}, {ScenarioKind::logic, "logic"},
    {ScenarioKind::route, "route"}, {ScenarioKind::cycle, "cycle"},
    {ScenarioKind::budget, "budget"}, {ScenarioKind::calibrate, "calibrate"}};

using Files = std::vector<std::pair<std::string, std::string>>;

double num(const json& o, const char* key, double dflt) {
    if (!o.contains(key)) return dflt;
    if (!o[key].is_number()) throw config_error(std::string("options.") + key + ": expected a number");
    return o[key].get<double>();
}

std::string str(const json& o, const char* key, const std::string& dflt) {
    if (!o.contains(key)) return dflt;
    if (!o[key].is_string()) throw config_error(std::string("options.") + key + ": expected a string");
    return o[key].get<std::string>();
}

std::vector<double> num_list(const json& o, const char* key, std::vector<double> dflt) {
    if (!o.contains(key)) return dflt;
    const auto& a = o[key];
    if (!a.is_array() || a.empty()) throw config_error(std::string("options.") + key + ": expected a nonempty array");
    std::vector<double> out;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number())
            throw config_error(std::string("options.") + key + "[" + std::to_string(i) + "]: expected a number");
        out.push_back(a[i].get<double>());
    }
    return out;
}

std::string t_label(double T) { return format_double(T) + "K"; }

json opt_value(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Builds the drive waveform named by options.waveform at temperature T.
Waveform drive_waveform(const json& o, const SwitchParams& p, double T) {
    double f = num(o, "freq_hz", 1e4);
    double period = 1.0 / f;
    int reps = static_cast<int>(num(o, "repetitions", 1));
    if (o.contains("waveform") && o["waveform"].is_object()) return waveform_from_json(o["waveform"], "options.waveform");
    std::string kind = str(o, "waveform", "square");
    if (kind == "square") return square_pulse(num(o, "v", 90.0), 0.5 * period, period, reps);
    if (kind == "engineered") {
        EngineeredSpec s = o.contains("spec") ? spec_from_json(o["spec"], {}, "options.spec") : EngineeredSpec{};
        return engineered_waveform(s, pull_in_voltage(p, T), period, reps);
    }
    throw config_error("options.waveform: expected \"square\", \"engineered\" or a waveform object");
}

SimConfig sim_config(const json& o, double t_end_default) {
    SimConfig c;
    c.dt = num(o, "dt", c.dt);
    c.t_end = num(o, "t_end", t_end_default);
    c.record_stride = static_cast<int>(num(o, "record_stride", 10));
    return c;
}

Files run_transient(const Scenario& s, json& sum) {
    const auto& o = s.options;
    double T = s.env.temperature;
    Waveform w = drive_waveform(o, s.params, T);
    SimConfig cfg = sim_config(o, 300e-6);
    Trace tr = simulate_transient(s.params, s.env, w, cfg);
    auto m = bounce_metrics(tr);
    auto ts = switching_time(tr);
    double peak = 0.0;
    for (double x : tr.tip_position) peak = std::max(peak, x);

    sum["closed"] = ts ? 1 : 0;
    sum["switching_time"] = opt_value(ts);
    sum["bounce_count"] = m.bounce_count;
    sum["first_impact_velocity"] = m.first_impact_velocity;
    sum["ring_down_duration"] = m.ring_down_duration;
    sum["settle_time"] = m.settle_time;
    sum["max_overshoot_fraction"] = (peak - tr.contact_gap) / tr.contact_gap;
    if (o.value("compare_square", false)) {
        Waveform sq = square_pulse(num(o, "v_square", 90.0), 0.5 * w.period, w.period, w.repetitions);
        auto ms = bounce_metrics(simulate_transient(s.params, s.env, sq, cfg));
        sum["square_first_impact_velocity"] = ms.first_impact_velocity;
        sum["square_bounce_count"] = ms.bounce_count;
        sum["impact_reduction"] = m.first_impact_velocity > 0 ? ms.first_impact_velocity / m.first_impact_velocity
                                                              : std::numeric_limits<double>::infinity();
    }

    std::vector<std::vector<double>> rows;
    rows.reserve(tr.times.size());
    for (size_t i = 0; i < tr.times.size(); ++i)
        rows.push_back({tr.times[i], tr.tip_position[i], tr.tip_velocity[i], tr.gate_voltage[i]});
    json events = json::array();
    for (const auto& e : tr.contact_events)
        events.push_back({{"touch_time", e.touch_time},
                          {"leave_time", e.leave_time >= 0 ? json(e.leave_time) : json(nullptr)},
                          {"impact_velocity", e.impact_velocity},
                          {"separation_before", e.separation_before}});
    json side = {{"temperature", T},
                 {"contact_gap", tr.contact_gap},
                 {"dt", cfg.dt},
                 {"record_stride", cfg.record_stride},
                 {"waveform", to_json(w)},
                 {"metrics", sum},
                 {"contact_events", events}};
    return {{"trace.csv", csv_text({"t_s", "x_m", "v_mps", "v_gate"}, rows)}, {"trace.json", side.dump(2) + "\n"}};
}

Files run_temp_sweep(const Scenario& s, json& sum) {
    const auto& o = s.options;
    std::vector<double> temps;
    for (double T = 100.0; T >= 10.0 - 1e-9; T -= 5.0) temps.push_back(T);
    temps = num_list(o, "temperatures", temps);
    Waveform w = drive_waveform(o, s.params, t_ref);
    auto res = temperature_sweep(s.params, s.env, temps, w, sim_config(o, 300e-6), s.workers);
    std::vector<std::vector<double>> rows;
    for (const auto& r : res.rows)
        rows.push_back({r.temperature, r.damping, r.gas_pressure, static_cast<double>(r.bounce_count), r.v_pull_in,
                        r.r_on, r.switching_time.value_or(std::numeric_limits<double>::quiet_NaN())});
    sum["onset_temperature"] = opt_value(res.onset);
    sum["points"] = res.rows.size();
    return {{"temp_sweep.csv",
             csv_text({"T_K", "damping_nspm", "gas_pressure_pa", "bounce_count", "v_pull_in_v", "r_on_ohm",
                       "switching_time_s"},
                      rows)}};
}

Files run_pullin(const Scenario& s, json& sum) {
    const auto& o = s.options;
    auto temps = num_list(o, "temperatures", {295.0, 150.0, 77.0, 5.8, 0.0});
    double v_max = num(o, "v_max", 100.0), v_step = num(o, "v_step", 0.1);
    std::vector<double> all = temps;
    all.push_back(t_ref);
    auto sweeps = parallel_map<PullInSweep>(all.size(), s.workers, [&](size_t i) {
        return quasi_static_sweep(s.params, at_temperature(s.env, all[i]), v_max, v_step);
    });
    const auto& ref = sweeps.back();
    if (!ref.v_pull_in) throw config_error("options.v_max: no pull-in found at 295 K below v_max");
    double worst = 0.0;
    std::vector<std::vector<double>> rows, curve;
    for (size_t i = 0; i < temps.size(); ++i) {
        double T = temps[i];
        double closed = pull_in_voltage(s.params, T);
        const auto& sw = sweeps[i];
        double numeric = sw.v_pull_in.value_or(std::numeric_limits<double>::infinity());
        double err = std::abs(numeric - closed) / closed;
        worst = std::max(worst, err);
        double ratio = numeric / *ref.v_pull_in;
        rows.push_back({T, closed, numeric, err, ratio});
        sum["v_pi_ratio_" + t_label(T)] = closed / pull_in_voltage(s.params, t_ref);
        sum["v_pi_numeric_ratio_" + t_label(T)] = ratio;
        for (const auto& pt : sw.curve) curve.push_back({T, pt.voltage, pt.deflection});
    }
    sum["v_pi_295K"] = *ref.v_pull_in;
    sum["max_rel_error"] = worst;
    return {{"pullin.csv", csv_text({"T_K", "v_pi_closed_v", "v_pi_numeric_v", "rel_error", "numeric_ratio_to_295K"}, rows)},
            {"deflection.csv", csv_text({"T_K", "v", "x_m"}, curve)}};
}

Files run_rf(const Scenario& s, json& sum) {
    const auto& o = s.options;
    std::string state = str(o, "state", "on");
    if (state != "on" && state != "off") throw config_error("options.state: expected \"on\" or \"off\"");
    auto temps = num_list(o, "temperatures", {t_ref, t_cryo});
    double f_lo = num(o, "f_lo", 4e9), f_hi = num(o, "f_hi", 8e9);
    int n = static_cast<int>(num(o, "n", 101));
    Files files;
    std::vector<std::vector<TwoPortPoint>> sweeps;
    double worst = state == "on" ? 0.0 : std::numeric_limits<double>::infinity();
    for (double T : temps) {
        auto sw = state == "on" ? insertion_loss_sweep(s.params, T, f_lo, f_hi, n)
                                : isolation_sweep(s.params, T, f_lo, f_hi, n);
        double w = state == "on" ? 0.0 : std::numeric_limits<double>::infinity();
        std::vector<std::vector<double>> rows;
        for (const auto& pt : sw) {
            rows.push_back({pt.frequency, pt.s21_db, pt.s11_db});
            double v = -pt.s21_db;
            w = state == "on" ? std::max(w, v) : std::min(w, v);
        }
        sum[(state == "on" ? "max_insertion_loss_db_" : "min_isolation_db_") + t_label(T)] = w;
        worst = state == "on" ? std::max(worst, w) : std::min(worst, w);
        files.push_back({"rf_" + state + "_" + t_label(T) + ".csv", csv_text({"f_hz", "s21_db", "s11_db"}, rows)});
        sweeps.push_back(std::move(sw));
    }
    sum[state == "on" ? "max_insertion_loss_db" : "min_isolation_db"] = worst;
    if (state == "on") {
        // every colder sweep must lose no more than the warmest one, point by point
        size_t warm = 0;
        for (size_t i = 1; i < temps.size(); ++i)
            if (temps[i] > temps[warm]) warm = i;
        bool ok = true;
        for (size_t i = 0; i < temps.size(); ++i)
            for (size_t k = 0; k < sweeps[i].size(); ++k)
                ok = ok && (-sweeps[i][k].s21_db <= -sweeps[warm][k].s21_db);
        sum["cold_loss_le_warm"] = ok ? 1 : 0;
    }
    return files;
}

Files run_optimize(const Scenario& s, json& sum) {
    const auto& o = s.options;
    double T = s.env.temperature;
    EngineeredSpec templ = o.contains("spec") ? spec_from_json(o["spec"], {}, "options.spec") : EngineeredSpec{};
    ParameterMask mask{};
    std::vector<std::string> names = {"v_coast", "t_coast", "t_kick"};
    if (o.contains("free")) names = o["free"].get<std::vector<std::string>>();
    Bounds bounds = default_bounds(s.params, T);
    for (const auto& n : names) {
        bool found = false;
        for (int k = 0; k < n_spec_params; ++k)
            if (n == spec_param_name(static_cast<SpecParam>(k))) mask[k] = found = true;
        if (!found) throw config_error("options.free: unknown parameter " + n);
    }
    if (o.contains("bounds")) {
        for (const auto& [key, val] : o["bounds"].items()) {
            int k = -1;
            for (int i = 0; i < n_spec_params; ++i)
                if (key == spec_param_name(static_cast<SpecParam>(i))) k = i;
            if (k < 0 || !val.is_array() || val.size() != 2) throw config_error("options.bounds." + key + ": expected [lo, hi]");
            bounds[k] = {val[0].get<double>(), val[1].get<double>()};
        }
    }
    ObjectiveWeights wts = o.contains("weights") ? weights_from_json(o["weights"], {}, "options.weights") : ObjectiveWeights{};
    OptimizerOptions opt;
    opt.max_evaluations = static_cast<int>(num(o, "max_evaluations", opt.max_evaluations));
    opt.t_end = num(o, "t_end", opt.t_end);
    opt.workers = s.workers;
    auto res = optimize_waveform(s.params, s.env, templ, mask, bounds, wts, opt);

    SimConfig cfg;
    cfg.t_end = opt.t_end;
    cfg.record_stride = 10;
    auto sq = bounce_metrics(simulate_transient(s.params, s.env, square_pulse(90.0, 50e-6, default_period, 1), cfg));
    sum["objective"] = res.objective;
    sum["template_objective"] = res.template_objective;
    sum["not_worse_than_template"] = res.objective <= res.template_objective ? 1 : 0;
    sum["evaluations"] = res.evaluations;
    sum["first_impact_velocity"] = res.score.impact_velocity;
    sum["bounce_count"] = res.score.bounce_count;
    sum["switching_time"] = res.score.t_close;
    sum["square_first_impact_velocity"] = sq.first_impact_velocity;
    sum["impact_reduction"] = sq.first_impact_velocity / res.score.impact_velocity;

    std::vector<std::vector<double>> hist;
    for (const auto& [it, f] : res.history) hist.push_back({static_cast<double>(it), f});
    json best = {{"spec", to_json(res.spec)}, {"objective", res.objective}, {"weights", to_json(wts)}};
    return {{"best_spec.json", best.dump(2) + "\n"}, {"history.csv", csv_text({"iteration", "objective"}, hist)}};
}

Files run_logic(const Scenario& s, json& sum) {
    const auto& o = s.options;
    std::string g = str(o, "gate", "nand");
    if (g != "nand" && g != "nor") throw config_error("options.gate: expected \"nand\" or \"nor\"");
    LogicCircuit c;
    c.topology = g == "nand" ? Topology::series : Topology::parallel;
    c.r_load = num(o, "r_load", c.r_load);
    c.v_supply = num(o, "v_supply", c.v_supply);

    json table = json::object();
    bool ok = true;
    for (double T : num_list(o, "truth_temperatures", {t_ref, t_cryo})) {
        json row = json::object();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                auto r = g == "nand" ? nand(a, b, c, s.params, T) : nor(a, b, c, s.params, T);
                int want = g == "nand" ? !(a && b) : !(a || b);
                ok = ok && r.bit == want;
                row[std::to_string(a) + std::to_string(b)] = {{"v_out", r.v_out}, {"bit", r.bit}};
            }
        table[t_label(T)] = row;
    }
    sum["truth_table_ok"] = ok ? 1 : 0;

    json wo = o;
    wo["repetitions"] = num(o, "repetitions", 2);
    Waveform w = drive_waveform(wo, s.params, s.env.temperature);
    SimConfig cfg = sim_config(o, w.period * w.repetitions);
    auto lt = logic_transient(c, {w, w}, s.params, s.env, cfg, s.workers);
    double th = 0.5 * c.v_supply;
    std::optional<double> fall;
    int crossings = 0;
    for (size_t i = 1; i < lt.v_out.size(); ++i) {
        bool was = lt.v_out[i - 1] > th, is = lt.v_out[i] > th;
        if (was != is) ++crossings;
        if (was && !is && !fall) fall = lt.times[i];
    }
    auto t0 = switching_time(lt.switches[0]), t1 = switching_time(lt.switches[1]);
    std::optional<double> mech;
    if (t0 && t1) mech = c.topology == Topology::series ? std::max(*t0, *t1) : std::min(*t0, *t1);
    std::optional<double> lag;
    if (fall) lag = *fall - first_rising_edge(w).value_or(0.0);
    sum["edge_lag"] = opt_value(lag);
    sum["mechanical_switching_time"] = opt_value(mech);
    sum["edge_lag_rel_error"] = (lag && mech) ? json(std::abs(*lag - *mech) / *mech) : json(nullptr);
    sum["output_transitions"] = crossings;

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < lt.times.size(); ++i) rows.push_back({lt.times[i], lt.v_out[i]});
    return {{"truth_table.json", table.dump(2) + "\n"}, {"transient.csv", csv_text({"t_s", "v_out"}, rows)}};
}

Files run_route(const Scenario& s, json& sum) {
    const auto& o = s.options;
    int gate = static_cast<int>(num(o, "gate", 1));
    if (gate < 1 || gate > 4) throw config_error("options.gate: expected 1..4");
    json wo = o;
    wo["repetitions"] = num(o, "repetitions", 2);
    Waveform w = drive_waveform(wo, s.params, s.env.temperature);
    SP4TDevice dev;
    dev.params = s.params;
    dev.temperature = s.env.temperature;
    dev.input_signal = num(o, "input", 1.0);
    dev.r_load = num(o, "r_load", dev.r_load);
    dev.gate_states[gate - 1] = w;
    int n = static_cast<int>(num(o, "samples", 200));
    double dt = w.period * w.repetitions / n;
    double v_pi = pull_in_voltage(s.params, s.env.temperature);
    bool exclusive = true;
    int multi = 0;
    std::vector<std::vector<double>> rows, raw;
    for (int k = 0; k < n; ++k) {
        double t = k * dt;
        auto r = route(dev, t);
        multi += r.multi_assert;
        bool on = evaluate(w, t) > v_pi;
        int high = 0;
        for (int i = 0; i < 4; ++i) high += r.outputs[i] > 0.5 * dev.input_signal;
        if (on)
            exclusive = exclusive && high == 1 && r.outputs[gate - 1] > 0.5 * dev.input_signal;
        else
            exclusive = exclusive && high == 0;
        rows.push_back({r.outputs[0], r.outputs[1], r.outputs[2], r.outputs[3]});
        raw.push_back({r.raw[0], r.raw[1], r.raw[2], r.raw[3]});
    }
    sum["exclusive"] = exclusive ? 1 : 0;
    sum["multi_assert_samples"] = multi;
    json side = {{"t0", 0.0}, {"dt", dt}, {"samples", n}, {"gate", gate}, {"waveform", to_json(w)},
                 {"columns", "divided output across each load; route_raw.csv holds undivided levels"}};
    return {{"route.csv", csv_text({"v_out_1", "v_out_2", "v_out_3", "v_out_4"}, rows)},
            {"route_raw.csv", csv_text({"v_raw_1", "v_raw_2", "v_raw_3", "v_raw_4"}, raw)},
            {"route.json", side.dump(2) + "\n"}};
}

Files run_cycle(const Scenario& s, json& sum) {
    const auto& o = s.options;
    long n = static_cast<long>(num(o, "n_cycles", 1e4));
    Waveform w = drive_waveform(o, s.params, s.env.temperature);
    auto rep = cycling_test(s.params, s.env, n, w, o.value("sample_decades", true));
    sum["cycles_run"] = rep.cycles_run;
    sum["all_closed"] = rep.all_closed ? 1 : 0;
    sum["failing_cycle"] = rep.failing_cycle ? json(*rep.failing_cycle) : json(nullptr);
    sum["max_drift"] = rep.max_drift;
    std::vector<std::vector<double>> rows;
    for (const auto& c : rep.samples)
        rows.push_back({static_cast<double>(c.cycle), c.switching_time, static_cast<double>(c.bounce_count),
                        c.settle_time, c.r_on});
    return {{"cycle.csv", csv_text({"cycle", "switching_time_s", "bounce_count", "settle_time_s", "r_on_ohm"}, rows)}};
}

Files run_budget(const Scenario& s, json& sum) {
    const auto& o = s.options;
    auto b = budget_report(s.params, static_cast<int>(num(o, "n_switches", 32)), num(o, "v", 90.0),
                           num(o, "freq_hz", 1e4), num(o, "budget", 20e-6));
    sum["n_switches"] = b.n_switches;
    sum["per_switch_power"] = b.per_switch;
    sum["total_power"] = b.total;
    sum["budget"] = b.budget;
    sum["within_budget"] = b.within_budget() ? 1 : 0;
    return {};
}

Files run_calibrate(const Scenario& s, json& sum) {
    CalibrationTargets t;
    const auto& o = s.options;
    t.v_pull_in = num(o, "v_pull_in", t.v_pull_in);
    t.switching_time = num(o, "switching_time", t.switching_time);
    t.ring_down = num(o, "ring_down", t.ring_down);
    t.passes = static_cast<int>(num(o, "passes", t.passes));
    SwitchParams p = calibrate_defaults(t);
    SimConfig cfg;
    auto tr = simulate_transient(p, at_temperature(s.env, t_ref), square_pulse(90.0, 50e-6, default_period, 1), cfg);
    sum["v_pull_in_295K"] = pull_in_voltage(p, t_ref);
    sum["switching_time_295K"] = opt_value(switching_time(tr));
    sum["bounce_count_295K"] = bounce_metrics(tr).bounce_count;
    sum["mass_eff"] = p.mass_eff;
    return {{"params.default.json", to_json(p).dump(2) + "\n"}};
}

Assertion check(const json& summary, const std::string& metric, const std::string& rule, double bound) {
    Assertion a;
    a.metric = metric;
    a.rule = rule + " " + format_double(bound);
    a.value = std::numeric_limits<double>::quiet_NaN();
    if (summary.contains(metric) && summary[metric].is_number()) a.value = summary[metric].get<double>();
    if (rule == "min") a.passed = a.value >= bound;
    else if (rule == "max") a.passed = a.value <= bound;
    else if (rule == "gt") a.passed = a.value > bound;
    else if (rule == "lt") a.passed = a.value < bound;
    else throw config_error("expect." + metric + "." + rule + ": unknown rule (min, max, gt, lt)");
    return a;
}

}  // namespace

const char* kind_name(ScenarioKind k) {
    for (const auto& [kk, n] : kind_names)
        if (kk == k) return n;
    return "?";
}

ScenarioKind kind_from_name(const std::string& s) {
    for (const auto& [k, n] : kind_names)
        if (s == n) return k;
    throw config_error("kind: unknown scenario kind \"" + s + "\"");
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw config_error("scenario: expected an object");
    Scenario s;
    for (const auto& [key, val] : j.items()) {
        if (key == "name") s.name = val.get<std::string>();
        else if (key == "kind") s.kind = kind_from_name(val.get<std::string>());
        else if (key == "params") s.params = params_from_json(val, s.params);
        else if (key == "params_ref") s.params = params_from_json(read_json_file(val.get<std::string>()), s.params);
        else if (key == "env") s.env = environment_from_json(val, s.env);
        else if (key == "options") s.options = val;
        else if (key == "expect") s.expect = val;
        else if (key == "output_dir") s.output_dir = val.get<std::string>();
        else if (key == "workers") s.workers = val.get<int>();
        else throw config_error("scenario." + key + ": unknown field");
    }
    if (!j.contains("kind")) throw config_error("scenario.kind: required field missing");
    if (!s.options.is_object()) throw config_error("scenario.options: expected an object");
    if (!s.expect.is_object()) throw config_error("scenario.expect: expected an object");
    return s;
}

json to_json(const Scenario& s) {
    return {{"name", s.name}, {"kind", kind_name(s.kind)}, {"params", to_json(s.params)},
            {"env", to_json(s.env)}, {"options", s.options}, {"expect", s.expect}};
}

bool ScenarioReport::passed() const {
    for (const auto& a : assertions)
        if (!a.passed) return false;
    return true;
}

ScenarioReport run_scenario(const Scenario& s) {
    auto start = std::chrono::steady_clock::now();
    ScenarioReport rep;
    rep.name = s.name;
    json sum = json::object();
    Files files;
    try {
        switch (s.kind) {
            case ScenarioKind::transient: files = run_transient(s, sum); break;
            case ScenarioKind::temp_sweep: files = run_temp_sweep(s, sum); break;
            case ScenarioKind::pullin_sweep: files = run_pullin(s, sum); break;
            case ScenarioKind::rf: files = run_rf(s, sum); break;
            case ScenarioKind::optimize: files = run_optimize(s, sum); break;
            case ScenarioKind::logic: files = run_logic(s, sum); break;
            case ScenarioKind::route: files = run_route(s, sum); break;
            case ScenarioKind::cycle: files = run_cycle(s, sum); break;
            case ScenarioKind::budget: files = run_budget(s, sum); break;
            case ScenarioKind::calibrate: files = run_calibrate(s, sum); break;
        }
    } catch (const error& e) {
        throw error("scenario " + s.name + " (" + kind_name(s.kind) + "): " + e.what());
    }
    for (const auto& [metric, rules] : s.expect.items()) {
        if (!rules.is_object()) throw config_error("expect." + metric + ": expected an object");
        for (const auto& [rule, bound] : rules.items()) {
            if (!bound.is_number()) throw config_error("expect." + metric + "." + rule + ": expected a number");
            rep.assertions.push_back(check(sum, metric, rule, bound.get<double>()));
        }
    }
    rep.summary = sum;
    json asserts = json::array();
    for (const auto& a : rep.assertions)
        asserts.push_back({{"metric", a.metric}, {"rule", a.rule},
                           {"value", std::isfinite(a.value) ? json(a.value) : json(nullptr)}, {"passed", a.passed}});
    files.push_back({"summary.json", json({{"name", s.name}, {"kind", kind_name(s.kind)}, {"metrics", sum},
                                           {"assertions", asserts}})
                                         .dump(2) + "\n"});

    // single writer after all computation is merged
    fs::create_directories(s.output_dir);
    json manifest = {{"scenario", to_json(s)}, {"input_sha256", sha256_hex(to_json(s).dump())}};
    json outs = json::object();
    for (const auto& [name, text] : files) {
        write_text_file((fs::path(s.output_dir) / name).string(), text);
        outs[name] = sha256_hex(text);
        rep.files.push_back(name);
    }
    manifest["outputs"] = outs;
    write_text_file((fs::path(s.output_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

bool verify_manifest(const std::string& manifest_path, const std::string& out_dir) {
    json m = read_json_file(manifest_path);
    if (!m.contains("scenario") || !m.contains("outputs")) throw config_error(manifest_path + ": not a manifest");
    Scenario s = scenario_from_json(m["scenario"]);
    s.output_dir = out_dir;
    auto rep = run_scenario(s);
    for (const auto& [name, hash] : m["outputs"].items()) {
        std::string path = (fs::path(out_dir) / name).string();
        if (!fs::exists(path) || sha256_hex(read_text_file(path)) != hash.get<std::string>()) return false;
    }
    return rep.files.size() == m["outputs"].size();
}

std::vector<std::string> preset_names() {
    return {"fig2c", "fig2e", "fig2f", "fig3b", "fig3d", "fig3f", "fig4", "fig5", "fig6c", "fig6f", "suppfig2",
            "budget", "optimize"};
}

Scenario preset(const std::string& id) {
    Scenario s;
    s.name = id;
    auto cold = [&] { s.env.temperature = t_cryo; };
    if (id == "fig2c") {
        s.kind = ScenarioKind::pullin_sweep;
        s.options = {{"temperatures", {295.0, 150.0, 77.0, 5.8, 0.0}}, {"v_max", 100.0}, {"v_step", 0.1}};
        s.expect = {{"v_pi_ratio_5.8K", {{"min", 0.964}, {"max", 0.974}}},
                    {"v_pi_ratio_0K", {{"min", 0.960}, {"max", 0.970}}},
                    {"max_rel_error", {{"max", 0.01}}}};
    } else if (id == "fig2e") {
        s.kind = ScenarioKind::rf;
        s.options = {{"state", "on"}};
        s.expect = {{"max_insertion_loss_db", {{"lt", 0.5}}}, {"cold_loss_le_warm", {{"min", 1}}}};
    } else if (id == "fig2f") {
        s.kind = ScenarioKind::rf;
        s.options = {{"state", "off"}};
        s.expect = {{"min_isolation_db", {{"gt", 35.0}}}};
    } else if (id == "fig3b") {
        s.kind = ScenarioKind::transient;
        s.options = {{"waveform", "square"}};
        s.expect = {{"switching_time", {{"min", 2.7e-6 * 0.95}, {"max", 2.7e-6 * 1.05}}},
                    {"bounce_count", {{"max", 1}}}};
    } else if (id == "fig3d") {
        s.kind = ScenarioKind::transient;
        cold();
        s.options = {{"waveform", "square"}};
        s.expect = {{"bounce_count", {{"min", 5}}}, {"ring_down_duration", {{"min", 75e-6}, {"max", 300e-6}}}};
    } else if (id == "fig3f") {
        s.kind = ScenarioKind::transient;
        cold();
        s.options = {{"waveform", "engineered"}, {"compare_square", true}};
        s.expect = {{"switching_time", {{"min", 3.3e-6 * 0.85}, {"max", 3.3e-6 * 1.15}}},
                    {"bounce_count", {{"max", 1}}},
                    {"impact_reduction", {{"min", 10.0}}}};
    } else if (id == "fig4") {
        s.kind = ScenarioKind::cycle;
        cold();
        s.options = {{"waveform", "engineered"}, {"n_cycles", 1000}, {"sample_decades", true}};
        s.expect = {{"max_drift", {{"max", 0.0}}}, {"all_closed", {{"min", 1}}}};
    } else if (id == "fig5") {
        s.kind = ScenarioKind::route;
        cold();
        s.options = {{"gate", 1}};
        s.expect = {{"exclusive", {{"min", 1}}}, {"multi_assert_samples", {{"max", 0}}}};
    } else if (id == "fig6c" || id == "fig6f") {
        s.kind = ScenarioKind::logic;
        cold();
        s.options = {{"gate", id == "fig6c" ? "nand" : "nor"}, {"waveform", "engineered"}};
        s.expect = {{"truth_table_ok", {{"min", 1}}}, {"edge_lag_rel_error", {{"max", 0.1}}}};
    } else if (id == "suppfig2") {
        s.kind = ScenarioKind::temp_sweep;
        s.expect = {{"onset_temperature", {{"gt", 77.4}, {"lt", 90.2}}}};
    } else if (id == "budget") {
        s.kind = ScenarioKind::budget;
        s.options = {{"n_switches", 32}};
        s.expect = {{"within_budget", {{"min", 1}}}};
    } else if (id == "optimize") {
        s.kind = ScenarioKind::optimize;
        cold();
        s.expect = {{"not_worse_than_template", {{"min", 1}}}, {"impact_reduction", {{"min", 10.0}}},
                    {"switching_time", {{"min", 0.5 * 3.3e-6}, {"max", 2.0 * 3.3e-6}}}};
    } else {
        throw config_error("unknown preset \"" + id + "\"");
    }
    return s;
}

TempSweepResult temperature_sweep(const SwitchParams& p, const Environment& env, const std::vector<double>& temps,
                                  const Waveform& w, const SimConfig& cfg, int workers) {
    if (temps.empty()) throw validation_error("temperature sweep needs at least one temperature");
    TempSweepResult res;
    res.rows = parallel_map<TempSweepRow>(temps.size(), workers, [&](size_t i) {
        Environment e = at_temperature(env, temps[i]);
        TempSweepRow r;
        r.temperature = temps[i];
        r.damping = damping_coefficient(p, e);
        r.gas_pressure = gas_pressure(e, temps[i]);
        r.v_pull_in = pull_in_voltage(p, temps[i]);
        r.r_on = on_resistance(p, temps[i]);
        Trace tr = simulate_transient(p, e, w, cfg);
        r.bounce_count = bounce_metrics(tr).bounce_count;
        r.switching_time = switching_time(tr);
        return r;
    });
    for (const auto& r : res.rows)
        if (r.bounce_count > 1) {
            res.onset = r.temperature;
            break;
        }
    return res;
}

CycleReport cycling_test(const SwitchParams& p, const Environment& env, long n_cycles, const Waveform& w,
                         bool sample_decades, const CycleHook& hook) {
    if (n_cycles < 1) throw validation_error("cycling test needs n_cycles >= 1");
    Waveform one = w;
    one.repetitions = 1;
    SimConfig cfg;
    cfg.t_end = one.period;
    cfg.record_stride = 10;

    struct Result {
        bool closed;
        CycleSample s;
    };
    auto simulate = [&](const SwitchParams& q) {
        Trace tr = simulate_transient(q, env, one, cfg);
        auto ts = switching_time(tr);
        auto m = bounce_metrics(tr);
        return Result{ts.has_value(), {0, ts.value_or(0.0), m.bounce_count, m.settle_time, on_resistance(q, env.temperature)}};
    };
    auto is_sample = [&](long c) {
        if (c == 1 || c == n_cycles) return true;
        if (!sample_decades) return false;
        long d = 1;
        while (d < c) d *= 10;
        return d == c;
    };

    CycleReport rep;
    // Every cycle starts from rest, so a cycle's metrics depend only on its parameters;
    // repeated inputs reuse the stored result and sampled cycles are integrated afresh.
    std::map<std::string, Result> memo;
    std::string fixed_key = hook ? "" : to_json(p).dump();
    for (long c = 1; c <= n_cycles; ++c) {
        SwitchParams q = hook ? hook(p, c) : p;
        std::string key = hook ? to_json(q).dump() : fixed_key;
        Result r;
        auto it = memo.find(key);
        if (it == memo.end() || is_sample(c)) {
            r = simulate(q);
            ++rep.simulations;
            if (it == memo.end()) memo.emplace(key, r);
        } else {
            r = it->second;
        }
        rep.cycles_run = c;
        if (!r.closed) {
            rep.all_closed = false;
            rep.failing_cycle = c;
            break;
        }
        if (is_sample(c)) {
            r.s.cycle = c;
            rep.samples.push_back(r.s);
        }
    }
    if (!rep.samples.empty()) {
        const auto& a = rep.samples.front();
        for (const auto& b : rep.samples) {
            rep.max_drift = std::max(rep.max_drift, std::abs(b.switching_time - a.switching_time) / a.switching_time);
            if (a.settle_time > 0)
                rep.max_drift = std::max(rep.max_drift, std::abs(b.settle_time - a.settle_time) / a.settle_time);
            rep.max_drift = std::max(rep.max_drift, std::abs(static_cast<double>(b.bounce_count - a.bounce_count)) /
                                                        std::max(1, a.bounce_count));
        }
    }
    return rep;
}

BudgetReport budget_report(const SwitchParams& p, int n_switches, double v, double f, double budget) {
    if (n_switches < 1) throw validation_error("budget needs at least one switch");
    BudgetReport b;
    b.n_switches = n_switches;
    b.per_switch = actuation_power(p.gate_capacitance_closed, v, f);
    b.total = n_switches * b.per_switch;
    b.budget = budget;
    return b;
}

}  // namespace cryoswitch
