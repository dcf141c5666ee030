#include "cryoswitch/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cryoswitch/errors.hpp"

namespace cryoswitch {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw validation_error("invalid parameters: " + what);
}

void check_temperature(double T) {
    if (!(T >= 0.0 && T <= 400.0))
        throw domain_error("temperature " + std::to_string(T) + " K outside [0, 400] K");
}

}  // namespace

void validate(const SwitchParams& p) {
    require(p.mass_eff > 0, "mass_eff > 0");
    require(p.stiffness > 0, "stiffness > 0");
    require(p.contact_stiffness > 0, "contact_stiffness > 0");
    require(p.electrode_area > 0, "electrode_area > 0");
    require(p.gate_capacitance_closed > 0, "gate_capacitance_closed > 0");
    require(p.c_off > 0, "c_off > 0");
    require(p.gap_contact_295 > 0 && p.gap_contact_295 <= p.gap_actuation_295,
            "0 < gap_contact_295 <= gap_actuation_295");
    require(p.lever_ratio > 0 && p.lever_ratio <= 1, "lever_ratio in (0, 1]");
    require(p.r_on_295 >= 0, "r_on_295 >= 0");
    require(p.r_off_dc >= 1e6 * p.r_on_295, "r_off_dc >= 1e6 * r_on_295");
    require(p.thermal_gap_shift_max >= 0 && p.thermal_gap_shift_max < p.gap_contact_295,
            "thermal_gap_shift_max < gap_contact_295");
    require(p.contact_damping >= 0 && p.struct_damping >= 0 && p.gas_damping_ref >= 0,
            "damping coefficients >= 0");
    require(p.squeeze_film_standoff > 0, "squeeze_film_standoff > 0");
}

void validate(const Environment& env) {
    if (!(env.temperature > 0)) throw validation_error("invalid environment: temperature > 0");
    if (!(env.o2_fraction >= 0 && env.o2_fraction <= 1))
        throw validation_error("invalid environment: o2_fraction in [0, 1]");
    if (!(env.residual_pressure_fraction > 0 && env.residual_pressure_fraction < 1))
        throw validation_error("invalid environment: residual_pressure_fraction in (0, 1)");
    if (!(env.pressure_ref > 0)) throw validation_error("invalid environment: pressure_ref > 0");
    if (!(env.t_condense_n2 < env.t_condense_o2))
        throw validation_error("invalid environment: t_condense_n2 < t_condense_o2");
    if (!(env.mean_free_path_ref > 0))
        throw validation_error("invalid environment: mean_free_path_ref > 0");
}

double gap_shift(const SwitchParams& p, double T) {
    check_temperature(T);
    if (T >= t_ref) return 0.0;
    return p.thermal_gap_shift_max * (t_ref - T) / t_ref;
}

double gap_at_temperature(const SwitchParams& p, double T) {
    return p.gap_actuation_295 - gap_shift(p, T);
}

double contact_gap_at_temperature(const SwitchParams& p, double T) {
    return p.gap_contact_295 - gap_shift(p, T);
}

double pull_in_voltage(const SwitchParams& p, double T) {
    double g = gap_at_temperature(p, T);
    double lam = p.lever_ratio;
    return std::sqrt(8.0 * p.stiffness * g * g * g /
                     (27.0 * epsilon0 * p.electrode_area * lam * lam));
}

double on_resistance(const SwitchParams& p, double T) {
    check_temperature(T);
    double tc = std::clamp(T, t_cryo, t_ref);
    return p.r_on_295 * (1.0 - 0.153 * (t_ref - tc) / (t_ref - t_cryo));
}

double gas_pressure(const Environment& env, double T) {
    if (!(T > 0)) throw domain_error("gas_pressure needs T > 0");
    if (T >= env.t_condense_o2) return env.pressure_ref * T / t_ref;
    if (T >= env.t_condense_n2) return (1.0 - env.o2_fraction) * env.pressure_ref * T / t_ref;
    return env.residual_pressure_fraction * env.pressure_ref;
}

double mean_free_path(const Environment& env, double T) {
    // lambda ~ T / p for an ideal gas
    return env.mean_free_path_ref * (T / t_ref) / (gas_pressure(env, T) / env.pressure_ref);
}

Environment at_temperature(Environment env, double T) {
    env.temperature = T;
    return env;
}

}  // namespace cryoswitch

namespace cryoswitch {

// Output of calibrate_defaults() with default targets; a unit test keeps the two in sync.
SwitchParams default_params() {
    SwitchParams p;
    p.mass_eff = 3.5230300199885774e-11;
    p.stiffness = 21.914585631422185;
    p.gap_actuation_295 = 2.5562801293909944e-06;
    p.gap_contact_295 = 2.5562801293909944e-06;
    p.lever_ratio = 0.5;
    p.electrode_area = 1e-8;
    p.contact_stiffness = 438291.71262844367;
    p.contact_damping = 0.00088656673439084586;
    p.struct_damping = 1.1985618926802519e-11;
    p.gas_damping_ref = 3.3684932248064551e-09;
    p.thermal_gap_shift_max = 60e-9;
    p.squeeze_film_standoff = 3e-9;
    return p;
}

}  // namespace cryoswitch
