#include "cryoswitch/calibration.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "cryoswitch/dynamics.hpp"
#include "cryoswitch/errors.hpp"
#include "cryoswitch/waveform.hpp"

namespace cryoswitch {

namespace {

// Geometric bisection for the boundary where pred flips from true (at lo) to false (at hi).
double bisect(const std::function<bool(double)>& pred, double lo, double hi, int iters,
              const char* what) {
    if (!pred(lo) || pred(hi)) {
        std::ostringstream os;
        os << "calibration of " << what << " has no sign change in [" << lo << ", " << hi << "]";
        throw calibration_error(os.str());
    }
    for (int i = 0; i < iters; ++i) {
        double mid = std::sqrt(lo * hi);
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    return std::sqrt(lo * hi);
}

struct Ratios {
    double zeta_struct, zeta_gas;
};

SwitchParams with_mass(SwitchParams p, double m, const Ratios& z, double restitution) {
    double w0 = std::sqrt(p.stiffness / m);
    p.mass_eff = m;
    p.struct_damping = 2.0 * z.zeta_struct * m * w0;
    p.gas_damping_ref = 2.0 * z.zeta_gas * m * w0;
    p.contact_damping = contact_damping_for(restitution, p.contact_stiffness, m);
    return p;
}

}  // namespace

double actuation_gap_for(const CalibrationTargets& t) {
    return t.thermal_shift / (1.0 - std::pow(1.0 - t.pull_in_drop_0k, 2.0 / 3.0));
}

double contact_damping_for(double e, double kc, double m) {
    const double pi = std::acos(-1.0);
    double le = std::log(e);
    double zeta = -le / std::sqrt(pi * pi + le * le);
    return 2.0 * zeta * std::sqrt(kc * m);
}

SwitchParams calibrate_defaults(const CalibrationTargets& t) {
    if (!(t.v_pull_in > 55.0 && t.v_pull_in < 80.0))
        throw calibration_error("target pull-in voltage must lie in (55, 80) V");
    if (!(t.restitution > 0 && t.restitution < 1))
        throw calibration_error("restitution must lie in (0, 1)");

    SwitchParams p;
    p.lever_ratio = t.lever_ratio;
    p.electrode_area = t.electrode_area;
    p.thermal_gap_shift_max = t.thermal_shift;
    p.gap_actuation_295 = actuation_gap_for(t);
    p.gap_contact_295 = t.contact_gap_fraction * p.gap_actuation_295;
    double g = p.gap_actuation_295;
    p.stiffness = 27.0 * epsilon0 * p.electrode_area * t.lever_ratio * t.lever_ratio *
                  t.v_pull_in * t.v_pull_in / (8.0 * g * g * g);
    p.contact_stiffness = t.contact_stiffness_ratio * p.stiffness;
    p.squeeze_film_standoff = t.squeeze_film_standoff;

    const Environment env0;
    const Waveform square = square_pulse(t.v_step, 50e-6, default_period, 1);
    SimConfig cfg;

    Ratios z{1e-7, 3e-4};
    double m = 3e-11;
    for (int pass = 0; pass < t.passes; ++pass) {
        cfg.t_end = 3.0 * t.switching_time;
        m = bisect(
            [&](double mm) {
                auto tr = simulate_transient(with_mass(p, mm, z, t.restitution), env0, square, cfg);
                auto ts = switching_time(tr);
                return ts && *ts < t.switching_time;
            },
            1e-11, 1e-9, 40, "mass_eff");

        Environment probe = at_temperature(env0, t.onset_probe_temperature);
        double scale = t.onset_pressure_factor / (gas_pressure(probe, probe.temperature) / probe.pressure_ref);
        cfg.t_end = 60e-6;
        z.zeta_gas = bisect(
            [&](double zg) {
                auto q = with_mass(p, m, {z.zeta_struct, zg * scale}, t.restitution);
                return bounce_metrics(simulate_transient(q, probe, square, cfg)).bounce_count > 1;
            },
            1e-7, 2e-3, 40, "gas_damping_ref");

        Environment cold = at_temperature(env0, t_cryo);
        cfg.t_end = 300e-6;
        z.zeta_struct = bisect(
            [&](double zs) {
                auto q = with_mass(p, m, {zs, z.zeta_gas}, t.restitution);
                return bounce_metrics(simulate_transient(q, cold, square, cfg)).ring_down_duration > t.ring_down;
            },
            1e-12, 1e-2, 30, "struct_damping");
    }
    p = with_mass(p, m, z, t.restitution);
    validate(p);
    return p;
}

}  // namespace cryoswitch
