#include <doctest.h>

#include "cryoswitch/dynamics.hpp"
#include "cryoswitch/errors.hpp"
#include "cryoswitch/optimize.hpp"

using namespace cryoswitch;
using doctest::Approx;

namespace {

const Environment cold = at_temperature(Environment{}, 5.8);
const ParameterMask landing = mask_of({SpecParam::v_coast, SpecParam::t_coast, SpecParam::t_kick});

double square_impact(const SwitchParams& p) {
    SimConfig cfg;
    cfg.t_end = 20e-6;
    return bounce_metrics(simulate_transient(p, cold, square_pulse(90.0, 50e-6, 100e-6, 1), cfg)).first_impact_velocity;
}

}  // namespace

TEST_CASE("spec vector round trip") {
    EngineeredSpec s{91, 1e-6, 20, 2e-6, 85, 40e-6, 1, 1.5e-6, 79, 2.5e-6};
    auto b = from_vector(to_vector(s));
    CHECK(to_vector(b) == to_vector(s));
    CHECK(std::string(spec_param_name(SpecParam::t_catch)) == "t_catch");
}

TEST_CASE("zero weights return the template untouched") {
    auto p = default_params();
    OptimizerOptions o;
    o.max_evaluations = 12;
    auto r = optimize_waveform(p, cold, EngineeredSpec{}, landing, default_bounds(p, 5.8), {0, 0, 0, 0, 3.8e-6}, o);
    CHECK(r.objective == 0.0);
    CHECK(to_vector(r.spec) == to_vector(EngineeredSpec{}));
}

TEST_CASE("optimizer never returns anything worse than the template") {
    auto p = default_params();
    OptimizerOptions o;
    o.max_evaluations = 25;
    EngineeredSpec templates[] = {
        EngineeredSpec{},
        EngineeredSpec{95, 1.2e-6, 30, 2e-6, 90, 47e-6, 0, 1e-6, 80, 2e-6},
        EngineeredSpec{80, 3e-6, 10, 0.5e-6, 90, 47e-6, 0, 1e-6, 80, 2e-6},
    };
    for (const auto& t : templates) {
        auto r = optimize_waveform(p, cold, t, landing, default_bounds(p, 5.8), ObjectiveWeights{}, o);
        CHECK(r.objective <= r.template_objective);
        CHECK(r.objective == score_landing(p, cold, r.spec, ObjectiveWeights{}, o).objective);
        for (size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i].second <= r.history[i - 1].second);
    }
}

TEST_CASE("optimized landing is an order of magnitude softer than a square pulse") {
    auto p = default_params();
    auto r = optimize_waveform(p, cold, EngineeredSpec{}, landing, default_bounds(p, 5.8), ObjectiveWeights{});
    REQUIRE(r.score.feasible);
    CHECK(square_impact(p) / r.score.impact_velocity >= 10.0);
    CHECK(r.score.t_close >= 0.5 * 3.3e-6);
    CHECK(r.score.t_close <= 2.0 * 3.3e-6);
    CHECK(r.score.bounce_count <= 1);
}

TEST_CASE("optimizer is deterministic and independent of the worker count") {
    auto p = default_params();
    OptimizerOptions o;
    o.max_evaluations = 30;
    auto a = optimize_waveform(p, cold, EngineeredSpec{}, landing, default_bounds(p, 5.8), ObjectiveWeights{}, o);
    o.workers = 3;
    auto b = optimize_waveform(p, cold, EngineeredSpec{}, landing, default_bounds(p, 5.8), ObjectiveWeights{}, o);
    CHECK(to_vector(a.spec) == to_vector(b.spec));
    CHECK(a.objective == b.objective);
    CHECK(a.history == b.history);
}

TEST_CASE("optimizer errors") {
    auto p = default_params();
    CHECK_THROWS_AS(optimize_waveform(p, cold, EngineeredSpec{}, ParameterMask{}, default_bounds(p, 5.8),
                                      ObjectiveWeights{}),
                    validation_error);

    // a kick far too short to reach contact, followed by no hold voltage
    EngineeredSpec weak{90, 0.2e-6, 0, 1e-6, 0, 47e-6, 0, 1e-6, 80, 2e-6};
    auto b = default_bounds(p, 5.8);
    b[static_cast<int>(SpecParam::t_kick)] = {0.1e-6, 0.3e-6};
    OptimizerOptions o;
    o.max_evaluations = 10;
    o.t_end = 20e-6;
    CHECK_THROWS_AS(optimize_waveform(p, cold, weak, mask_of({SpecParam::t_kick}), b, ObjectiveWeights{}, o),
                    optimization_error);
}

TEST_CASE("landing score rejects region-ordering violations") {
    auto p = default_params();
    EngineeredSpec s;
    s.v_coast = 80.0;
    auto sc = score_landing(p, cold, s, ObjectiveWeights{});
    CHECK_FALSE(sc.feasible);
    CHECK(sc.diagnostic.find("v_coast") != std::string::npos);
}
