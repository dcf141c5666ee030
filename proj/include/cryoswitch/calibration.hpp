#pragma once

#include <cmath>

#include "cryoswitch/core_model.hpp"

namespace cryoswitch {

struct CalibrationTargets {
    double v_pull_in = 70.0;            // V at 295 K
    double pull_in_drop_0k = 0.035;     // relative V_pi drop at 0 K
    double thermal_shift = 60e-9;       // gap shift at 0 K, m
    double switching_time = 2.7e-6;     // under the step below, 295 K
    double v_step = 90.0;
    double lever_ratio = 0.5;
    double electrode_area = 1e-8;
    double contact_gap_fraction = 1.0;  // gap_contact_295 / gap_actuation_295
    double restitution = 0.7;           // contact coefficient of restitution
    double contact_stiffness_ratio = 2e4;
    double squeeze_film_standoff = 3e-9;
    // Gas damping is tuned so that more than one bounce first appears at this package
    // pressure (relative to fill). Default: geometric mean of the 95 K and 90 K pressures,
    // i.e. just below the O2 condensation step.
    double onset_pressure_factor = std::sqrt((95.0 / 295.0) * (0.79 * 90.0 / 295.0));
    double onset_probe_temperature = 92.0;
    double ring_down = 150e-6;          // 5.8 K square pulse
    int passes = 3;
};

// Runs the full calibration (a few thousand transient simulations, ~10 s).
SwitchParams calibrate_defaults(const CalibrationTargets& targets = {});

double actuation_gap_for(const CalibrationTargets& targets);
double contact_damping_for(double restitution, double contact_stiffness, double mass);

}  // namespace cryoswitch
