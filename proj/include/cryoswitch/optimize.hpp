#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "cryoswitch/core_model.hpp"
#include "cryoswitch/waveform.hpp"

namespace cryoswitch {

inline constexpr int n_spec_params = 10;

// Order of the EngineeredSpec fields used by masks and bounds.
enum class SpecParam {
    v_kick, t_kick, v_coast, t_coast, v_hold, t_hold,
    v_release_coast, t_release_coast, v_catch, t_catch
};

using ParameterMask = std::array<bool, n_spec_params>;

struct Bound {
    double lo = 0.0, hi = 0.0;
};
using Bounds = std::array<Bound, n_spec_params>;

struct ObjectiveWeights {
    double impact = 1.0;    // per (m/s)^2
    double bounce = 0.01;   // per bounce
    double settle = 0.0;    // per s
    double budget = 1e6;    // per s over t_budget
    double t_budget = 3.8e-6;
};

struct OptimizerOptions {
    int max_evaluations = 150;
    int max_restarts = 4;
    double t_end = 50e-6;  // landing window simulated per candidate
    double tolerance = 1e-6;
    int workers = 1;
};

struct LandingScore {
    bool feasible = false;
    double objective = 0.0;
    double t_close = 0.0;
    double impact_velocity = 0.0;
    int bounce_count = 0;
    double settle_time = 0.0;
    std::string diagnostic;
};

struct OptimizationResult {
    EngineeredSpec spec;
    double objective = 0.0;
    double template_objective = 0.0;
    LandingScore score;
    int evaluations = 0;
    std::vector<std::pair<int, double>> history;  // (evaluation, best objective so far)
};

std::array<double, n_spec_params> to_vector(const EngineeredSpec& s);
EngineeredSpec from_vector(const std::array<double, n_spec_params>& v);
const char* spec_param_name(SpecParam k);
ParameterMask mask_of(std::initializer_list<SpecParam> free);

Bounds default_bounds(const SwitchParams& p, double T);

LandingScore score_landing(const SwitchParams& p, const Environment& env, const EngineeredSpec& spec,
                           const ObjectiveWeights& w, const OptimizerOptions& opt = {});

// Bounded Nelder-Mead over the free fields; never returns a spec scoring worse than the template.
OptimizationResult optimize_waveform(const SwitchParams& p, const Environment& env,
                                     const EngineeredSpec& templ, const ParameterMask& free,
                                     const Bounds& bounds, const ObjectiveWeights& w,
                                     const OptimizerOptions& opt = {});

}  // namespace cryoswitch
