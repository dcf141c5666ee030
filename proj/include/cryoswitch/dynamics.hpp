#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cryoswitch/core_model.hpp"
#include "cryoswitch/waveform.hpp"

namespace cryoswitch {

struct SimConfig {
    double dt = 1e-9;
    double t_end = 300e-6;
    int record_stride = 1;
    double contact_epsilon = 1e-9;
    double x0 = 0.0;  // initial tip position, m
    double v0 = 0.0;  // initial tip velocity, m/s
};

struct ContactEvent {
    double touch_time = 0.0;
    double leave_time = -1.0;  // negative while still in contact at t_end
    double impact_velocity = 0.0;
    // deepest separation from the contact plane during the flight before this touch
    double separation_before = 0.0;
};

struct Trace {
    std::vector<double> times;
    std::vector<double> tip_position;
    std::vector<double> tip_velocity;
    std::vector<double> gate_voltage;
    std::vector<ContactEvent> contact_events;
    double contact_gap = 0.0;
    double contact_epsilon = 1e-9;
    std::optional<double> rising_edge;
};

struct BounceMetrics {
    int bounce_count = 0;
    double first_impact_velocity = 0.0;
    double ring_down_duration = 0.0;
    double settle_time = 0.0;
};

struct DeflectionPoint {
    double voltage = 0.0;
    double deflection = 0.0;
};

struct PullInSweep {
    std::vector<DeflectionPoint> curve;
    std::optional<double> v_pull_in;  // empty if v_max stays below pull-in
};

void validate(const SimConfig& cfg, const SwitchParams& p);

double electrostatic_force(const SwitchParams& p, double T, double x, double V);
double damping_coefficient(const SwitchParams& p, const Environment& env);
// Relative squeeze-film strength at tip position x; 1 at rest under reference gas conditions.
double squeeze_film_factor(const SwitchParams& p, const Environment& env, double x);
double damping_at(const SwitchParams& p, const Environment& env, double x);

Trace simulate_transient(const SwitchParams& p, const Environment& env, const Waveform& w,
                         const SimConfig& cfg);

PullInSweep quasi_static_sweep(const SwitchParams& p, const Environment& env, double v_max,
                               double v_step);

BounceMetrics bounce_metrics(const Trace& tr);

// Empty when the switch never closed.
std::optional<double> switching_time(const Trace& tr);

}  // namespace cryoswitch
