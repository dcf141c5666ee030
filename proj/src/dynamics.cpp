#include "cryoswitch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cryoswitch/errors.hpp"

namespace cryoswitch {

namespace {

// Rarefaction (Knudsen) correction for the squeeze film, fitted form 1 + 9.638 Kn^1.159.
double rarefaction(double mfp, double h) { return 1.0 + 9.638 * std::pow(mfp / h, 1.159); }

struct Model {
    double m, k, lam, eps_a, g_eff, g_c, k_c, c_c;
    double b_struct, b_gas, h0, mfp, film_norm;

    Model(const SwitchParams& p, const Environment& env) {
        double T = env.temperature;
        m = p.mass_eff;
        k = p.stiffness;
        lam = p.lever_ratio;
        eps_a = epsilon0 * p.electrode_area;
        g_eff = gap_at_temperature(p, T);
        g_c = contact_gap_at_temperature(p, T);
        k_c = p.contact_stiffness;
        c_c = p.contact_damping;
        b_struct = p.struct_damping;
        b_gas = p.gas_damping_ref * gas_pressure(env, T) / env.pressure_ref;
        h0 = p.squeeze_film_standoff;
        mfp = mean_free_path(env, T);
        double hr = g_c + h0;
        film_norm = rarefaction(env.mean_free_path_ref, hr);
    }

    double damping(double x) const {
        double hr = g_c + h0;
        double h = std::max(hr - x, h0);
        double r = hr / h;
        return b_struct + b_gas * r * r * r * film_norm / rarefaction(mfp, h);
    }

    double accel(double x, double v, double V) const {
        double gap = g_eff - lam * x;
        if (gap <= 0) throw singularity_error("actuation gap closed during integration");
        double f = lam * eps_a * V * V / (2.0 * gap * gap);
        if (x > g_c) f += std::min(0.0, -k_c * (x - g_c) - c_c * v);
        return (f - k * x - damping(x) * v) / m;
    }
};

}  // namespace

void validate(const SimConfig& cfg, const SwitchParams& p) {
    if (!(cfg.dt > 0)) throw validation_error("dt must be > 0");
    if (!(cfg.t_end > 0)) throw validation_error("t_end must be > 0");
    if (cfg.record_stride < 1) throw validation_error("record_stride must be >= 1");
    if (!(cfg.contact_epsilon > 0)) throw validation_error("contact_epsilon must be > 0");
    const double pi = std::acos(-1.0);
    double limit = 2.0 * pi * std::sqrt(p.mass_eff / (p.stiffness + p.contact_stiffness)) / 20.0;
    if (cfg.dt > limit) {
        std::ostringstream os;
        os << "dt = " << cfg.dt << " s does not resolve the contact spring; use dt <= " << limit;
        throw validation_error(os.str());
    }
}

double electrostatic_force(const SwitchParams& p, double T, double x, double V) {
    double gap = gap_at_temperature(p, T) - p.lever_ratio * x;
    if (gap <= 0) throw singularity_error("electrostatic force evaluated with a closed actuation gap");
    return epsilon0 * p.electrode_area * V * V / (2.0 * gap * gap);
}

double damping_coefficient(const SwitchParams& p, const Environment& env) {
    return p.struct_damping + p.gas_damping_ref * gas_pressure(env, env.temperature) / env.pressure_ref;
}

double squeeze_film_factor(const SwitchParams& p, const Environment& env, double x) {
    Model mo(p, env);
    double hr = mo.g_c + mo.h0;
    double h = std::max(hr - x, mo.h0);
    double r = hr / h;
    return r * r * r * mo.film_norm / rarefaction(mo.mfp, h);
}

double damping_at(const SwitchParams& p, const Environment& env, double x) {
    return Model(p, env).damping(x);
}

Trace simulate_transient(const SwitchParams& p, const Environment& env, const Waveform& w,
                         const SimConfig& cfg) {
    validate(p);
    validate(env);
    validate(w);
    validate(cfg, p);
    const Model mo(p, env);
    const double dt = cfg.dt;
    const long n = std::lround(cfg.t_end / dt);

    Trace tr;
    tr.contact_gap = mo.g_c;
    tr.contact_epsilon = cfg.contact_epsilon;
    tr.rising_edge = first_rising_edge(w);
    size_t n_rec = static_cast<size_t>(n / cfg.record_stride + 1);
    tr.times.reserve(n_rec);
    tr.tip_position.reserve(n_rec);
    tr.tip_velocity.reserve(n_rec);
    tr.gate_voltage.reserve(n_rec);

    double x = cfg.x0, v = cfg.v0;
    auto record = [&](long i) {
        double t = i * dt;
        tr.times.push_back(t);
        tr.tip_position.push_back(x);
        tr.tip_velocity.push_back(v);
        tr.gate_voltage.push_back(evaluate(w, t));
    };
    record(0);

    const double limit = mo.g_c * 1.01;
    bool touching = x > mo.g_c;
    double min_x = x;  // lowest point of the current flight
    for (long i = 0; i < n; ++i) {
        double t = i * dt;
        // voltage held over the step; the midpoint keeps grid-aligned edges unambiguous
        double V = evaluate(w, t + 0.5 * dt);
        double xn = 0.0, vn = 0.0;
        bool blown = false;
        try {
            double k1x = v, k1v = mo.accel(x, v, V);
            double k2x = v + 0.5 * dt * k1v, k2v = mo.accel(x + 0.5 * dt * k1x, k2x, V);
            double k3x = v + 0.5 * dt * k2v, k3v = mo.accel(x + 0.5 * dt * k2x, k3x, V);
            double k4x = v + dt * k3v, k4v = mo.accel(x + dt * k3x, k4x, V);
            xn = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
            vn = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        } catch (const singularity_error&) {
            blown = true;
        }

        if (blown || !std::isfinite(xn) || xn > limit) {
            std::ostringstream os;
            os << "tip overshoot past contact exceeds 1% at t = " << t + dt << " s; reduce dt (now " << dt << " s)";
            throw stability_error(os.str());
        }
        bool now = xn > mo.g_c;
        if (now != touching) {
            double frac = (mo.g_c - x) / (xn - x);
            double tc = t + frac * dt;
            if (now) {
                ContactEvent ev;
                ev.touch_time = tc;
                ev.impact_velocity = v + frac * (vn - v);
                ev.separation_before = mo.g_c - min_x;
                tr.contact_events.push_back(ev);
            } else {
                tr.contact_events.back().leave_time = tc;
                min_x = xn;
            }
            touching = now;
        }
        if (!touching) min_x = std::min(min_x, xn);
        x = xn;
        v = vn;
        if ((i + 1) % cfg.record_stride == 0) record(i + 1);
    }
    return tr;
}

PullInSweep quasi_static_sweep(const SwitchParams& p, const Environment& env, double v_max,
                               double v_step) {
    if (!(v_step > 0)) throw validation_error("v_step must be > 0");
    validate(p);
    const double T = env.temperature;
    const double g = gap_at_temperature(p, T);
    const double gc = contact_gap_at_temperature(p, T);
    const double lam = p.lever_ratio;
    const double ea = epsilon0 * p.electrode_area;

    PullInSweep out;
    const long steps = static_cast<long>(std::floor(v_max / v_step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        double V = i * v_step;
        auto f = [&](double x) {
            double gap = g - lam * x;
            return p.stiffness * x - lam * ea * V * V / (2.0 * gap * gap);
        };
        // f is concave on the travel, so its maximum separates the stable root from pull-in
        double x_top = (g - std::cbrt(lam * lam * ea * V * V / p.stiffness)) / lam;
        x_top = std::clamp(x_top, 0.0, gc);
        if (f(x_top) < 0) {
            out.v_pull_in = V;
            break;
        }
        if (V == 0.0) {
            out.curve.push_back({V, 0.0});
            continue;
        }
        double lo = 0.0, hi = x_top;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * g; ++it) {
            double mid = 0.5 * (lo + hi);
            if (f(mid) < 0)
                lo = mid;
            else
                hi = mid;
        }
        out.curve.push_back({V, 0.5 * (lo + hi)});
    }
    return out;
}

BounceMetrics bounce_metrics(const Trace& tr) {
    if (tr.times.empty()) throw validation_error("bounce_metrics needs a nonempty trace");
    BounceMetrics m;
    const auto& ev = tr.contact_events;
    if (!ev.empty()) {
        m.first_impact_velocity = ev.front().impact_velocity;
        double last = ev.front().touch_time;
        for (size_t j = 1; j < ev.size(); ++j) {
            if (ev[j].separation_before > tr.contact_epsilon) {
                ++m.bounce_count;
                last = ev[j].touch_time;
            }
        }
        m.ring_down_duration = last - ev.front().touch_time;
    }
    double edge = tr.rising_edge.value_or(0.0);
    double xf = tr.tip_position.back();
    size_t settled = 0;
    for (size_t i = tr.tip_position.size(); i-- > 0;) {
        if (std::abs(tr.tip_position[i] - xf) > tr.contact_epsilon) {
            settled = i + 1;
            break;
        }
    }
    if (settled > 0) m.settle_time = std::max(0.0, tr.times[std::min(settled, tr.times.size() - 1)] - edge);
    return m;
}

std::optional<double> switching_time(const Trace& tr) {
    if (!tr.rising_edge) throw validation_error("switching_time needs a rising gate edge");
    if (tr.contact_events.empty()) return std::nullopt;
    return tr.contact_events.front().touch_time - *tr.rising_edge;
}

}  // namespace cryoswitch
