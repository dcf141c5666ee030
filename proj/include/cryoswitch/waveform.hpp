#pragma once

#include <optional>
#include <vector>

namespace cryoswitch {

struct Segment {
    double voltage = 0.0;
    double duration = 0.0;
};

struct Waveform {
    std::vector<Segment> segments;
    double period = 0.0;
    int repetitions = 1;
};

struct EngineeredSpec {
    double v_kick = 90.0;
    double t_kick = 2e-6;
    double v_coast = 55.0;
    double t_coast = 1e-6;
    double v_hold = 90.0;
    double t_hold = 47e-6;
    double v_release_coast = 0.0;
    double t_release_coast = 1e-6;
    double v_catch = 80.0;
    double t_catch = 2e-6;
};

inline constexpr double default_period = 100e-6;

void validate(const Waveform& w);

Waveform square_pulse(double v, double t_on, double period, int reps);

// Checks the region ordering against the given pull-in voltage.
void check_region_ordering(const EngineeredSpec& spec, double v_pull_in);

// kick, coast, hold, release coast, catch, then zero to the end of the period.
Waveform engineered_waveform(const EngineeredSpec& spec, double v_pull_in,
                             double period = default_period, int reps = 1);

double evaluate(const Waveform& w, double t);

// Start of the first segment whose voltage exceeds the one before it (0 V before t = 0).
std::optional<double> first_rising_edge(const Waveform& w);

double actuation_power(double c_gate, double v, double f);

}  // namespace cryoswitch
