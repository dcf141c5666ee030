#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cryoswitch/core_model.hpp"
#include "cryoswitch/dynamics.hpp"
#include "cryoswitch/io.hpp"
#include "cryoswitch/waveform.hpp"

namespace cryoswitch {

enum class ScenarioKind { transient, temp_sweep, pullin_sweep, rf, optimize, logic, route, cycle, budget, calibrate };

const char* kind_name(ScenarioKind k);
ScenarioKind kind_from_name(const std::string& s);

struct Scenario {
    std::string name = "custom";
    ScenarioKind kind = ScenarioKind::transient;
    SwitchParams params = default_params();
    Environment env;
    json options = json::object();
    // metric -> {"min"|"max"|"gt"|"lt": value}
    json expect = json::object();
    std::string output_dir = "out";
    int workers = 1;
};

// Accepts "params_ref" (path to a params document) as an alternative to inline "params".
Scenario scenario_from_json(const json& j);
// output_dir and workers are left out: neither affects the results.
json to_json(const Scenario& s);

struct Assertion {
    std::string metric;
    std::string rule;
    double value = 0.0;
    bool passed = false;
};

struct ScenarioReport {
    std::string name;
    json summary = json::object();
    std::vector<Assertion> assertions;
    std::vector<std::string> files;  // relative to output_dir, manifest excluded
    double runtime_s = 0.0;
    bool passed() const;
};

ScenarioReport run_scenario(const Scenario& s);

// Re-runs the scenario stored in a manifest into out_dir; true when every output is byte-identical.
bool verify_manifest(const std::string& manifest_path, const std::string& out_dir);

std::vector<std::string> preset_names();
Scenario preset(const std::string& id);

struct TempSweepRow {
    double temperature = 0.0;
    double damping = 0.0;
    double gas_pressure = 0.0;
    int bounce_count = 0;
    double v_pull_in = 0.0;
    double r_on = 0.0;
    std::optional<double> switching_time;
};

struct TempSweepResult {
    std::vector<TempSweepRow> rows;
    std::optional<double> onset;  // first temperature (in list order) with more than one bounce
};

TempSweepResult temperature_sweep(const SwitchParams& p, const Environment& env, const std::vector<double>& temps,
                                  const Waveform& w, const SimConfig& cfg = {}, int workers = 1);

struct CycleSample {
    long cycle = 0;
    double switching_time = 0.0;
    int bounce_count = 0;
    double settle_time = 0.0;
    double r_on = 0.0;
};

struct CycleReport {
    long cycles_run = 0;
    std::vector<CycleSample> samples;
    double max_drift = 0.0;
    bool all_closed = true;
    std::optional<long> failing_cycle;
    long simulations = 0;  // distinct transient runs actually integrated
};

// Per-cycle parameter perturbation (e.g. contact resistance wear); identity when empty.
using CycleHook = std::function<SwitchParams(const SwitchParams&, long)>;

CycleReport cycling_test(const SwitchParams& p, const Environment& env, long n_cycles, const Waveform& w,
                         bool sample_decades, const CycleHook& hook = {});

struct BudgetReport {
    int n_switches = 0;
    double per_switch = 0.0;
    double total = 0.0;
    double budget = 20e-6;
    bool within_budget() const { return total <= budget; }
};

BudgetReport budget_report(const SwitchParams& p, int n_switches, double v, double f, double budget = 20e-6);

}  // namespace cryoswitch
