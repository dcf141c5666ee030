#include "cryoswitch/network.hpp"

#include <cmath>
#include <sstream>

#include "cryoswitch/errors.hpp"
#include "cryoswitch/parallel.hpp"

namespace cryoswitch {

void validate(const LogicCircuit& c, const SwitchParams& p, double T) {
    if (c.switch_count != 2) throw validation_error("logic circuits use exactly two switches");
    if (!(c.r_load > 0)) throw validation_error("r_load must be > 0");
    double r_on = on_resistance(p, T) * c.switch_count;
    if (!(c.r_load >= 1e3 * r_on && p.r_off_dc / c.switch_count >= 1e3 * c.r_load)) {
        std::ostringstream os;
        os << "logic levels need r_on << r_load << r_off by 1e3 each (r_on " << r_on << ", r_load " << c.r_load
           << ", r_off " << p.r_off_dc << ")";
        throw integrity_error(os.str());
    }
}

double divider_output(double v_supply, double r_load, double r_network) {
    if (!(r_load > 0)) throw validation_error("r_load must be > 0");
    if (!(r_network >= 0)) throw validation_error("r_network must be >= 0");
    return v_supply * r_network / (r_network + r_load);
}

double series_parallel_resistance(const std::vector<bool>& states, Topology topo, const SwitchParams& p,
                                  double T) {
    if (states.empty()) throw validation_error("switch network needs at least one switch");
    double r_on = on_resistance(p, T);
    double acc = 0.0;
    for (bool closed : states) {
        double r = closed ? r_on : p.r_off_dc;
        if (topo == Topology::series) {
            acc += r;
        } else {
            if (r == 0) return 0.0;
            acc += 1.0 / r;
        }
    }
    return topo == Topology::series ? acc : 1.0 / acc;
}

int logic_level(double v_out, double v_supply) {
    double th = 0.5 * v_supply;
    if (std::abs(v_out - th) <= 0.1 * th) {
        std::ostringstream os;
        os << "ambiguous logic level " << v_out << " V near threshold " << th << " V";
        throw integrity_error(os.str());
    }
    return v_out > th ? 1 : 0;
}

namespace {

LogicOutput gate(int a, int b, Topology want, const LogicCircuit& c, const SwitchParams& p, double T) {
    if (c.topology != want)
        throw validation_error(want == Topology::series ? "nand needs a series circuit" : "nor needs a parallel circuit");
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) throw validation_error("logic inputs must be 0 or 1");
    validate(c, p, T);
    LogicOutput o;
    o.v_out = divider_output(c.v_supply, c.r_load, series_parallel_resistance({a == 1, b == 1}, want, p, T));
    o.bit = logic_level(o.v_out, c.v_supply);
    return o;
}

bool gate_closed(const GateDrive& g, double t, double v_pi) {
    if (const bool* b = std::get_if<bool>(&g)) return *b;
    return evaluate(std::get<Waveform>(g), t) > v_pi;
}

}  // namespace

LogicOutput nand(int in1, int in2, const LogicCircuit& c, const SwitchParams& p, double T) {
    return gate(in1, in2, Topology::series, c, p, T);
}

LogicOutput nor(int in1, int in2, const LogicCircuit& c, const SwitchParams& p, double T) {
    return gate(in1, in2, Topology::parallel, c, p, T);
}

RouteResult route(const SP4TDevice& dev, double t) {
    validate(dev.params);
    double v_pi = pull_in_voltage(dev.params, dev.temperature);
    double r_on = on_resistance(dev.params, dev.temperature);
    RouteResult r;
    int asserted = 0;
    for (int i = 0; i < 4; ++i) {
        bool closed = gate_closed(dev.gate_states[i], t, v_pi);
        asserted += closed;
        double rs = closed ? r_on : dev.params.r_off_dc;
        r.outputs[i] = dev.input_signal * dev.r_load / (dev.r_load + rs);
        r.raw[i] = closed ? dev.input_signal : 0.0;
    }
    r.multi_assert = asserted > 1;
    return r;
}

LogicTrace logic_transient(const LogicCircuit& c, const std::array<Waveform, 2>& gates, const SwitchParams& p,
                           const Environment& env, const SimConfig& cfg, int workers) {
    validate(c, p, env.temperature);
    LogicTrace out;
    auto traces = parallel_map<Trace>(2, workers, [&](size_t i) { return simulate_transient(p, env, gates[i], cfg); });
    out.switches = {std::move(traces[0]), std::move(traces[1])};
    const auto& a = out.switches[0];
    const auto& b = out.switches[1];
    out.times = a.times;
    out.v_out.reserve(a.times.size());
    for (size_t i = 0; i < a.times.size(); ++i) {
        std::vector<bool> st{a.tip_position[i] > a.contact_gap, b.tip_position[i] > b.contact_gap};
        double rn = series_parallel_resistance(st, c.topology, p, env.temperature);
        out.v_out.push_back(divider_output(c.v_supply, c.r_load, rn));
    }
    return out;
}

}  // namespace cryoswitch
