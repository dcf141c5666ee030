#pragma once

namespace cryoswitch {

inline constexpr double epsilon0 = 8.8541878128e-12;
inline constexpr double t_ref = 295.0;
inline constexpr double t_cryo = 5.8;

struct SwitchParams {
    double mass_eff = 0.0;
    double stiffness = 0.0;
    double gap_actuation_295 = 0.0;
    double gap_contact_295 = 0.0;
    double lever_ratio = 0.5;
    double electrode_area = 0.0;
    double gate_capacitance_closed = 12e-15;
    double r_on_295 = 3.0;
    double r_off_dc = 1e12;
    double c_off = 2e-15;
    double contact_stiffness = 0.0;
    double contact_damping = 0.0;
    double struct_damping = 0.0;
    double gas_damping_ref = 0.0;
    double thermal_gap_shift_max = 60e-9;
    // gas film left between beam and landing pad when the tip touches
    double squeeze_film_standoff = 3e-9;
};

struct Environment {
    double temperature = t_ref;
    double pressure_ref = 101325.0;
    double t_condense_o2 = 90.2;
    double t_condense_n2 = 77.4;
    double o2_fraction = 0.21;
    double residual_pressure_fraction = 1e-4;
    // air at 295 K and pressure_ref
    double mean_free_path_ref = 68e-9;
};

void validate(const SwitchParams& p);
void validate(const Environment& env);

// Thermal closing of both gaps; zero above room temperature.
double gap_shift(const SwitchParams& p, double T);
double gap_at_temperature(const SwitchParams& p, double T);
double contact_gap_at_temperature(const SwitchParams& p, double T);

double pull_in_voltage(const SwitchParams& p, double T);
double on_resistance(const SwitchParams& p, double T);

double gas_pressure(const Environment& env, double T);
double mean_free_path(const Environment& env, double T);

Environment at_temperature(Environment env, double T);

// The frozen output of calibrate_defaults().
SwitchParams default_params();

}  // namespace cryoswitch
