#include "cryoswitch/waveform.hpp"

#include <cmath>
#include <sstream>

#include "cryoswitch/errors.hpp"

namespace cryoswitch {

void validate(const Waveform& w) {
    if (!(w.period > 0)) throw validation_error("waveform period must be > 0");
    if (w.repetitions < 1) throw validation_error("waveform repetitions must be >= 1");
    double total = 0.0;
    for (size_t i = 0; i < w.segments.size(); ++i) {
        const auto& s = w.segments[i];
        if (!(s.duration > 0))
            throw validation_error("segment " + std::to_string(i) + " duration must be > 0");
        if (!(s.voltage >= 0))
            throw validation_error("segment " + std::to_string(i) + " voltage must be >= 0");
        total += s.duration;
    }
    // allow rounding slop from summing microsecond durations
    if (total > w.period * (1.0 + 1e-12))
        throw validation_error("segment durations exceed the period");
}

Waveform square_pulse(double v, double t_on, double period, int reps) {
    if (!(t_on < period)) throw validation_error("square pulse needs t_on < period");
    Waveform w{{{v, t_on}, {0.0, period - t_on}}, period, reps};
    validate(w);
    return w;
}

void check_region_ordering(const EngineeredSpec& s, double v_pi) {
    auto fail = [](const std::string& what) { throw validation_error("region ordering violated: " + what); };
    if (!(s.v_coast < v_pi)) fail("v_coast < V_pi");
    if (!(v_pi < s.v_kick)) fail("V_pi < v_kick");
    if (!(v_pi < s.v_catch)) fail("V_pi < v_catch");
    const double d[] = {s.t_kick, s.t_coast, s.t_hold, s.t_release_coast, s.t_catch};
    for (double x : d)
        if (!(x > 0)) fail("all durations > 0");
}

Waveform engineered_waveform(const EngineeredSpec& s, double v_pi, double period, int reps) {
    check_region_ordering(s, v_pi);
    Waveform w;
    w.period = period;
    w.repetitions = reps;
    w.segments = {{s.v_kick, s.t_kick},
                  {s.v_coast, s.t_coast},
                  {s.v_hold, s.t_hold},
                  {s.v_release_coast, s.t_release_coast},
                  {s.v_catch, s.t_catch}};
    double used = s.t_kick + s.t_coast + s.t_hold + s.t_release_coast + s.t_catch;
    if (used > period * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "engineered waveform lasts " << used << " s, longer than the period " << period << " s";
        throw validation_error(os.str());
    }
    if (period - used > 1e-15) w.segments.push_back({0.0, period - used});
    validate(w);
    return w;
}

double evaluate(const Waveform& w, double t) {
    if (t < 0) throw domain_error("waveform evaluated at negative time");
    if (t >= w.period * w.repetitions) return 0.0;
    double tau = std::fmod(t, w.period);
    double acc = 0.0;
    for (const auto& s : w.segments) {
        acc += s.duration;
        if (tau < acc) return s.voltage;
    }
    return 0.0;
}

std::optional<double> first_rising_edge(const Waveform& w) {
    double prev = 0.0, t = 0.0;
    for (const auto& s : w.segments) {
        if (s.voltage > prev) return t;
        prev = s.voltage;
        t += s.duration;
    }
    return std::nullopt;
}

double actuation_power(double c_gate, double v, double f) {
    return 0.5 * c_gate * v * v * f;
}

}  // namespace cryoswitch
