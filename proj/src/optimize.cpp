#include "cryoswitch/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cryoswitch/dynamics.hpp"
#include "cryoswitch/errors.hpp"
#include "cryoswitch/parallel.hpp"

namespace cryoswitch {

std::array<double, n_spec_params> to_vector(const EngineeredSpec& s) {
    return {s.v_kick, s.t_kick, s.v_coast, s.t_coast, s.v_hold, s.t_hold,
            s.v_release_coast, s.t_release_coast, s.v_catch, s.t_catch};
}

EngineeredSpec from_vector(const std::array<double, n_spec_params>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
}

const char* spec_param_name(SpecParam k) {
    static const char* names[] = {"v_kick", "t_kick", "v_coast", "t_coast", "v_hold", "t_hold",
                                  "v_release_coast", "t_release_coast", "v_catch", "t_catch"};
    return names[static_cast<int>(k)];
}

ParameterMask mask_of(std::initializer_list<SpecParam> free) {
    ParameterMask m{};
    for (auto k : free) m[static_cast<int>(k)] = true;
    return m;
}

Bounds default_bounds(const SwitchParams& p, double T) {
    double vpi = pull_in_voltage(p, T);
    return {{{1.01 * vpi, 100.0},
             {0.2e-6, 5e-6},
             {0.0, 0.99 * vpi},
             {0.1e-6, 5e-6},
             {1.01 * vpi, 100.0},
             {10e-6, 60e-6},
             {0.0, 0.99 * vpi},
             {0.1e-6, 5e-6},
             {1.01 * vpi, 100.0},
             {0.1e-6, 5e-6}}};
}

LandingScore score_landing(const SwitchParams& p, const Environment& env, const EngineeredSpec& spec,
                           const ObjectiveWeights& w, const OptimizerOptions& opt) {
    LandingScore s;
    s.objective = std::numeric_limits<double>::infinity();
    try {
        Waveform wf = engineered_waveform(spec, pull_in_voltage(p, env.temperature));
        SimConfig cfg;
        cfg.t_end = opt.t_end;
        cfg.record_stride = 10;
        Trace tr = simulate_transient(p, env, wf, cfg);
        auto ts = switching_time(tr);
        if (!ts) {
            s.diagnostic = "did not close";
            return s;
        }
        auto m = bounce_metrics(tr);
        s.feasible = true;
        s.t_close = *ts;
        s.impact_velocity = m.first_impact_velocity;
        s.bounce_count = m.bounce_count;
        s.settle_time = m.settle_time;
        s.objective = w.impact * s.impact_velocity * s.impact_velocity + w.bounce * s.bounce_count +
                      w.settle * s.settle_time + w.budget * std::max(0.0, s.t_close - w.t_budget);
    } catch (const validation_error& e) {
        s.diagnostic = e.what();
    } catch (const stability_error& e) {
        s.diagnostic = e.what();
    }
    return s;
}

namespace {

struct Vertex {
    std::vector<double> u;
    double f = 0.0;
};

bool better(const Vertex& a, const Vertex& b) {
    if (a.f != b.f) return a.f < b.f;
    return a.u < b.u;  // lexicographic tie-break keeps the ordering deterministic
}

}  // namespace

OptimizationResult optimize_waveform(const SwitchParams& p, const Environment& env,
                                     const EngineeredSpec& templ, const ParameterMask& free,
                                     const Bounds& bounds, const ObjectiveWeights& w,
                                     const OptimizerOptions& opt) {
    std::vector<int> idx;
    for (int i = 0; i < n_spec_params; ++i)
        if (free[i]) idx.push_back(i);
    if (idx.empty()) throw validation_error("optimize_waveform needs at least one free parameter");
    for (int i : idx)
        if (!(bounds[i].lo <= bounds[i].hi))
            throw validation_error(std::string("bad bounds for ") + spec_param_name(static_cast<SpecParam>(i)));
    const size_t d = idx.size();
    const auto base = to_vector(templ);

    auto to_spec = [&](const std::vector<double>& u) {
        auto v = base;
        for (size_t j = 0; j < d; ++j) {
            const auto& b = bounds[idx[j]];
            v[idx[j]] = b.lo + std::clamp(u[j], 0.0, 1.0) * (b.hi - b.lo);
        }
        return from_vector(v);
    };

    OptimizationResult res;
    res.spec = templ;
    res.score = score_landing(p, env, templ, w, opt);
    res.objective = res.score.objective;
    res.template_objective = res.objective;
    res.evaluations = 1;
    res.history.push_back({1, res.objective});
    LandingScore best_infeasible = res.score;

    std::map<std::vector<double>, double> cache;
    auto eval_batch = [&](std::vector<Vertex*> vs) {
        std::vector<Vertex*> todo;
        for (auto* v : vs) {
            for (auto& x : v->u) x = std::clamp(x, 0.0, 1.0);
            auto it = cache.find(v->u);
            if (it != cache.end())
                v->f = it->second;
            else if (std::none_of(todo.begin(), todo.end(), [&](Vertex* t) { return t->u == v->u; }))
                todo.push_back(v);
        }
        auto scores = parallel_map<LandingScore>(todo.size(), opt.workers, [&](size_t i) {
            return score_landing(p, env, to_spec(todo[i]->u), w, opt);
        });
        for (size_t i = 0; i < todo.size(); ++i) {
            cache[todo[i]->u] = scores[i].objective;
            ++res.evaluations;
            if (scores[i].objective < res.objective) {
                res.objective = scores[i].objective;
                res.spec = to_spec(todo[i]->u);
                res.score = scores[i];
            }
            if (!scores[i].feasible) best_infeasible = scores[i];
            res.history.push_back({res.evaluations, res.objective});
        }
        for (auto* v : vs) v->f = cache.at(v->u);
    };
    auto eval_one = [&](Vertex& v) { eval_batch({&v}); };

    std::vector<double> center(d);
    for (size_t j = 0; j < d; ++j) {
        const auto& b = bounds[idx[j]];
        center[j] = b.hi > b.lo ? std::clamp((base[idx[j]] - b.lo) / (b.hi - b.lo), 0.0, 1.0) : 0.0;
    }
    double step = 0.25;
    for (int restart = 0; restart <= opt.max_restarts && res.evaluations < opt.max_evaluations; ++restart) {
        std::vector<Vertex> s(d + 1);
        for (size_t i = 0; i <= d; ++i) {
            s[i].u = center;
            if (i > 0) {
                size_t j = i - 1;
                s[i].u[j] += (center[j] + step <= 1.0) ? step : -step;
            }
        }
        {
            std::vector<Vertex*> all;
            for (auto& v : s) all.push_back(&v);
            eval_batch(all);
        }
        double best_f = std::numeric_limits<double>::infinity();
        int since_improved = 0;
        while (res.evaluations < opt.max_evaluations) {
            std::sort(s.begin(), s.end(), better);
            if (s[0].f < best_f) {
                best_f = s[0].f;
                since_improved = 0;
            } else if (++since_improved > static_cast<int>(10 * d)) {
                break;
            }
            double diam = 0.0;
            for (size_t i = 1; i <= d; ++i)
                for (size_t j = 0; j < d; ++j) diam = std::max(diam, std::abs(s[i].u[j] - s[0].u[j]));
            bool flat = std::isfinite(s[d].f) && s[d].f - s[0].f <= opt.tolerance * (1.0 + std::abs(s[0].f));
            if (flat && diam < 1e-3) break;

            std::vector<double> c(d, 0.0);
            for (size_t i = 0; i < d; ++i)
                for (size_t j = 0; j < d; ++j) c[j] += s[i].u[j] / d;
            auto along = [&](double a) {
                Vertex v;
                v.u.resize(d);
                for (size_t j = 0; j < d; ++j) v.u[j] = c[j] + a * (s[d].u[j] - c[j]);
                return v;
            };
            Vertex r = along(-1.0);
            eval_one(r);
            if (better(r, s[0])) {
                Vertex e = along(-2.0);
                eval_one(e);
                s[d] = better(e, r) ? e : r;
            } else if (better(r, s[d - 1])) {
                s[d] = r;
            } else {
                Vertex k = better(r, s[d]) ? along(-0.5) : along(0.5);
                eval_one(k);
                if (better(k, better(r, s[d]) ? r : s[d])) {
                    s[d] = k;
                } else {
                    std::vector<Vertex*> moved;
                    for (size_t i = 1; i <= d; ++i) {
                        for (size_t j = 0; j < d; ++j) s[i].u[j] = s[0].u[j] + 0.5 * (s[i].u[j] - s[0].u[j]);
                        moved.push_back(&s[i]);
                    }
                    eval_batch(moved);
                }
            }
        }
        std::sort(s.begin(), s.end(), better);
        center = s[0].u;
        step *= 0.5;
    }

    if (!res.score.feasible) {
        throw optimization_error("no candidate closed the switch; best infeasible diagnostic: " +
                                 best_infeasible.diagnostic);
    }
    return res;
}

}  // namespace cryoswitch
