#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cryoswitch/dynamics.hpp"
#include "cryoswitch/errors.hpp"

using namespace cryoswitch;
using doctest::Approx;

namespace {

const Waveform square90 = square_pulse(90.0, 50e-6, 100e-6, 1);

Environment at(double T) { return at_temperature(Environment{}, T); }

}  // namespace

TEST_CASE("electrostatic force") {
    auto p = default_params();
    CHECK(electrostatic_force(p, 295.0, 1e-7, 0.0) == 0.0);
    CHECK(electrostatic_force(p, 295.0, 1e-7, 40.0) == electrostatic_force(p, 295.0, 1e-7, -40.0));
    // eps0 * A * 90^2 / (2 g^2), evaluated by hand
    CHECK(electrostatic_force(p, 295.0, 0.0, 90.0) == Approx(5.487655816500434e-05).epsilon(1e-12));
    CHECK(electrostatic_force(p, 295.0, 1e-6, 90.0) > electrostatic_force(p, 295.0, 0.0, 90.0));
    double x_closed = p.gap_actuation_295 / p.lever_ratio;
    CHECK_THROWS_AS(electrostatic_force(p, 295.0, x_closed, 90.0), singularity_error);
}

TEST_CASE("damping coefficient follows the package pressure") {
    auto p = default_params();
    CHECK(damping_coefficient(p, at(295.0)) == Approx(p.struct_damping + p.gas_damping_ref).epsilon(1e-14));
    CHECK(damping_coefficient(p, at(5.8)) == Approx(p.struct_damping + 1e-4 * p.gas_damping_ref).epsilon(1e-12));
    CHECK(damping_coefficient(p, at(100.0)) ==
          Approx(p.struct_damping + (100.0 / 295.0) * p.gas_damping_ref).epsilon(1e-12));
}

TEST_CASE("squeeze film stiffens near contact and vanishes in rarefied gas") {
    auto p = default_params();
    CHECK(squeeze_film_factor(p, at(295.0), 0.0) == Approx(1.0).epsilon(1e-14));
    double prev = 0.0;
    for (double f = 0.0; f <= 1.0; f += 0.05) {
        double s = squeeze_film_factor(p, at(295.0), f * p.gap_contact_295);
        CHECK(s > prev);
        prev = s;
    }
    CHECK(squeeze_film_factor(p, at(5.8), 0.0) < 0.05);
    CHECK(damping_at(p, at(295.0), 0.0) == Approx(damping_coefficient(p, at(295.0))).epsilon(1e-14));
}

TEST_CASE("zero drive keeps the beam at rest") {
    auto p = default_params();
    Waveform zero{{{0.0, 100e-6}}, 100e-6, 1};
    SimConfig cfg;
    cfg.t_end = 20e-6;
    auto tr = simulate_transient(p, at(295.0), zero, cfg);
    for (double x : tr.tip_position) CHECK(x == 0.0);
    CHECK(tr.contact_events.empty());
}

TEST_CASE("undamped free oscillation matches the harmonic oscillator") {
    auto p = default_params();
    p.struct_damping = 0.0;
    p.gas_damping_ref = 0.0;
    Waveform zero{{{0.0, 1e-3}}, 1e-3, 1};
    const double pi = std::acos(-1.0);
    double w0 = std::sqrt(p.stiffness / p.mass_eff);
    double period = 2 * pi / w0;
    SimConfig cfg;
    cfg.x0 = 1e-9;
    cfg.t_end = 100.5 * period;
    auto tr = simulate_transient(p, at(295.0), zero, cfg);

    // upward zero crossings, linearly interpolated
    std::vector<double> up;
    for (size_t i = 1; i < tr.times.size(); ++i) {
        double a = tr.tip_position[i - 1], b = tr.tip_position[i];
        if (a < 0 && b >= 0) up.push_back(tr.times[i - 1] + (tr.times[i] - tr.times[i - 1]) * (-a) / (b - a));
    }
    REQUIRE(up.size() >= 100);
    double measured = (up.back() - up.front()) / (up.size() - 1);
    CHECK(1.0 / measured == Approx(w0 / (2 * pi)).epsilon(1e-3));

    auto energy = [&](size_t i) {
        double x = tr.tip_position[i], v = tr.tip_velocity[i];
        return 0.5 * p.mass_eff * v * v + 0.5 * p.stiffness * x * x;
    };
    double e0 = energy(0), worst = 0.0;
    for (size_t i = 0; i < tr.times.size(); ++i) worst = std::max(worst, std::abs(energy(i) - e0) / e0);
    CHECK(worst < 1e-6);
}

TEST_CASE("room-temperature square pulse closes in about 2.7 us") {
    auto p = default_params();
    SimConfig cfg;
    cfg.t_end = 10e-6;
    auto tr = simulate_transient(p, at(295.0), square90, cfg);
    auto ts = switching_time(tr);
    REQUIRE(ts.has_value());
    CHECK(*ts == Approx(2.7e-6).epsilon(0.02));
}

TEST_CASE("below pull-in the switch does not close") {
    auto p = default_params();
    SimConfig cfg;
    cfg.t_end = 40e-6;
    auto tr = simulate_transient(p, at(295.0), square_pulse(50.0, 50e-6, 100e-6, 1), cfg);
    CHECK_FALSE(switching_time(tr).has_value());
    Waveform zero{{{0.0, 10e-6}}, 10e-6, 1};
    cfg.t_end = 1e-6;
    CHECK_THROWS_AS(switching_time(simulate_transient(p, at(295.0), zero, cfg)), validation_error);
}

TEST_CASE("traces are bit-reproducible") {
    auto p = default_params();
    SimConfig cfg;
    cfg.t_end = 30e-6;
    auto a = simulate_transient(p, at(5.8), square90, cfg);
    auto b = simulate_transient(p, at(5.8), square90, cfg);
    CHECK(a.tip_position == b.tip_position);
    CHECK(a.tip_velocity == b.tip_velocity);
    CHECK(a.contact_events.size() == b.contact_events.size());
}

TEST_CASE("halving dt barely moves the switching time") {
    auto p = default_params();
    SimConfig cfg;
    cfg.t_end = 6e-6;
    auto t1 = switching_time(simulate_transient(p, at(295.0), square90, cfg));
    cfg.dt *= 0.5;
    auto t2 = switching_time(simulate_transient(p, at(295.0), square90, cfg));
    REQUIRE(t1);
    REQUIRE(t2);
    CHECK(std::abs(*t1 - *t2) / *t2 < 1e-3);
}

TEST_CASE("contact stop, bouncing and damping order") {
    auto p = default_params();
    SimConfig cfg;
    auto cold = simulate_transient(p, at(5.8), square90, cfg);
    auto warm = simulate_transient(p, at(295.0), square90, cfg);
    double peak = *std::max_element(cold.tip_position.begin(), cold.tip_position.end());
    CHECK(peak <= 1.01 * cold.contact_gap);
    auto mc = bounce_metrics(cold), mw = bounce_metrics(warm);
    CHECK(mw.bounce_count <= 1);
    CHECK(mc.bounce_count >= 5);
    CHECK(mw.bounce_count <= mc.bounce_count);
    CHECK(mc.ring_down_duration >= 75e-6);
    CHECK(mc.ring_down_duration <= 300e-6);
    CHECK(mc.first_impact_velocity > mw.first_impact_velocity);
}

TEST_CASE("soft contact spring raises a stability error") {
    auto p = default_params();
    p.contact_stiffness = 5 * p.stiffness;
    SimConfig cfg;
    cfg.t_end = 10e-6;
    CHECK_THROWS_AS(simulate_transient(p, at(5.8), square90, cfg), stability_error);
}

TEST_CASE("dt must resolve the contact spring") {
    auto p = default_params();
    SimConfig cfg;
    cfg.dt = 5e-9;
    CHECK_THROWS_AS(simulate_transient(p, at(295.0), square90, cfg), validation_error);
}

TEST_CASE("quasi-static sweep reproduces the closed-form pull-in") {
    auto p = default_params();
    for (double T : {295.0, 150.0, 77.0, 5.8, 0.0}) {
        auto sw = quasi_static_sweep(p, at(T), 100.0, 0.1);
        REQUIRE(sw.v_pull_in.has_value());
        CHECK(*sw.v_pull_in == Approx(pull_in_voltage(p, T)).epsilon(0.01));
        CHECK(*sw.v_pull_in >= pull_in_voltage(p, T));
        double g = gap_at_temperature(p, T);
        for (const auto& pt : sw.curve) CHECK(p.lever_ratio * pt.deflection <= g / 3.0 * (1 + 1e-9));
    }
    auto sw = quasi_static_sweep(p, at(295.0), 50.0, 1.0);
    CHECK(sw.curve.front().deflection == 0.0);
    CHECK_FALSE(sw.v_pull_in.has_value());
    CHECK_THROWS_AS(quasi_static_sweep(p, at(295.0), 50.0, 0.0), validation_error);

    auto a = quasi_static_sweep(p, at(295.0), 100.0, 0.01);
    auto b = quasi_static_sweep(p, at(5.8), 100.0, 0.01);
    CHECK(*b.v_pull_in / *a.v_pull_in == Approx(0.969).epsilon(0.005 / 0.969));
}

TEST_CASE("static deflection balances spring and electrostatic force") {
    auto p = default_params();
    auto sw = quasi_static_sweep(p, at(295.0), 60.0, 5.0);
    for (const auto& pt : sw.curve) {
        double f = p.lever_ratio * electrostatic_force(p, 295.0, pt.deflection, pt.voltage);
        CHECK(std::abs(p.stiffness * pt.deflection - f) <= 1e-9 * (std::abs(f) + 1e-15));
    }
}

TEST_CASE("bounce metrics on crafted traces") {
    Trace none;
    none.times = {0.0, 1e-6, 2e-6};
    none.tip_position = {0.0, 0.0, 0.0};
    none.tip_velocity = {0.0, 0.0, 0.0};
    none.gate_voltage = {0.0, 0.0, 0.0};
    none.contact_gap = 1e-6;
    auto m0 = bounce_metrics(none);
    CHECK(m0.bounce_count == 0);
    CHECK(m0.first_impact_velocity == 0.0);
    CHECK(m0.ring_down_duration == 0.0);
    CHECK(m0.settle_time == 0.0);

    Trace t = none;
    t.rising_edge = 0.0;
    t.contact_events = {{1e-6, 2e-6, 1.5, 1e-6},
                        {3e-6, 4e-6, 0.5, 5e-9},
                        {5e-6, 6e-6, 0.2, 2e-9},
                        {7e-6, 7.5e-6, 0.1, 0.5e-9},  // grazing, below the threshold
                        {8e-6, -1.0, 0.05, 3e-9}};
    auto m = bounce_metrics(t);
    CHECK(m.bounce_count == 3);
    CHECK(m.first_impact_velocity == 1.5);
    CHECK(m.ring_down_duration == Approx(7e-6));
    CHECK(*switching_time(t) == Approx(1e-6));
    CHECK_THROWS_AS(bounce_metrics(Trace{}), validation_error);
}

TEST_CASE("settle time counts from the rising edge") {
    Trace t;
    t.times = {0, 1, 2, 3, 4, 5};
    t.tip_position = {0, 5, 3, 1, 1, 1};
    t.tip_velocity = std::vector<double>(6, 0.0);
    t.gate_voltage = std::vector<double>(6, 1.0);
    t.contact_epsilon = 0.5;
    t.rising_edge = 1.0;
    CHECK(bounce_metrics(t).settle_time == Approx(2.0));
}
