#pragma once

#include <array>
#include <variant>
#include <vector>

#include "cryoswitch/core_model.hpp"
#include "cryoswitch/dynamics.hpp"
#include "cryoswitch/waveform.hpp"

namespace cryoswitch {

enum class Topology { series, parallel };

struct LogicCircuit {
    Topology topology = Topology::series;
    double r_load = 1e4;
    double v_supply = 1.0;
    int switch_count = 2;
};

// A gate is either held at a logic level or driven by a waveform; a driven switch is
// treated as closed while the gate voltage exceeds the pull-in voltage.
using GateDrive = std::variant<bool, Waveform>;

struct SP4TDevice {
    SwitchParams params;
    std::array<GateDrive, 4> gate_states{false, false, false, false};
    double input_signal = 1.0;
    double r_load = 1e4;  // per output
    double temperature = t_ref;
};

struct RouteResult {
    std::array<double, 4> outputs{};  // across each output's load
    std::array<double, 4> raw{};      // input signal if the path is closed, else 0
    bool multi_assert = false;
};

struct LogicOutput {
    double v_out = 0.0;
    int bit = 0;
};

struct LogicTrace {
    std::vector<double> times;
    std::vector<double> v_out;
    std::array<Trace, 2> switches;
};

void validate(const LogicCircuit& c, const SwitchParams& p, double T);

RouteResult route(const SP4TDevice& dev, double t);

double divider_output(double v_supply, double r_load, double r_network);
double series_parallel_resistance(const std::vector<bool>& states, Topology topo, const SwitchParams& p,
                                  double T);

LogicOutput nand(int in1, int in2, const LogicCircuit& c, const SwitchParams& p, double T);
LogicOutput nor(int in1, int in2, const LogicCircuit& c, const SwitchParams& p, double T);

// Thresholds v_out at v_supply/2; throws integrity_error inside the +-10% guard band.
int logic_level(double v_out, double v_supply);

LogicTrace logic_transient(const LogicCircuit& c, const std::array<Waveform, 2>& gates, const SwitchParams& p,
                           const Environment& env, const SimConfig& cfg, int workers = 1);

}  // namespace cryoswitch
