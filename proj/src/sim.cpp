#include "ctt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ctt/errors.hpp"

namespace ctt {

namespace {

enum class CostKind { Ctt, Lqg };

struct EngineSetup {
    std::vector<HeaterType> dyn_types;  // ambient as seen by the dynamics
    std::vector<double> u_free;         // per agent, with the assumed ambient
    const GFunction* g = nullptr;       // pressure integral of the EAT, if any
    CostKind cost_kind = CostKind::Ctt;
};

std::size_t checked_steps(const SimOptions& opts) {
    if (!(opts.dt > 0.0) || !(opts.t_end > 0.0))
        throw InvalidParameterError("simulation requires dt > 0 and t_end > 0");
    const double raw = opts.t_end / opts.dt;
    const auto steps = static_cast<std::size_t>(std::llround(raw));
    if (steps == 0 || std::abs(raw - static_cast<double>(steps)) > 1e-9)
        throw InvalidParameterError("t_end must be an integer number of steps");
    return steps;
}

std::vector<double> assumed_u_free(const std::vector<Agent>& agents,
                                   const std::vector<HeaterType>& assumed_types) {
    std::vector<double> uf(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i)
        uf[i] = u_free(agents[i], assumed_types[agents[i].type_index]);
    return uf;
}

/// Step-synchronous Euler-Maruyama driver. `control(i, x, step)` yields the
/// deviation power of agent i; `post(step, eat, q_hat)` runs once per step
/// on the freshly reduced empirical mean (serial, in step order).
template <class ControlFn, class PostFn>
SimResult run_engine(const std::vector<Agent>& agents, const Scenario& scenario,
                     const EngineSetup& setup, const SimOptions& opts,
                     ControlFn&& control, PostFn&& post) {
    if (agents.empty()) throw InvalidParameterError("population size must be at least 1");
    const std::size_t n = agents.size();
    const std::size_t steps = checked_steps(opts);
    const TimeGrid sim_grid{opts.dt, steps};
    const double dt = opts.dt;
    const double sqrt_dt = std::sqrt(dt);
    const double y = scenario.y();
    const double z = scenario.z();
    const CostParams& cost = scenario.costs;

    SimResult res;
    res.eat = Trajectory(sim_grid);
    res.q_realized = Trajectory(sim_grid);
    res.excursion.assign(n, 0.0);
    res.terminal_x.assign(n, 0.0);
    res.cost.assign(n, 0.0);
    res.energy_kwh.assign(n, 0.0);
    const std::size_t tracked = std::min(opts.sample_paths, n);
    res.path_x.assign(tracked, std::vector<double>(steps + 1, 0.0));
    res.path_u.assign(tracked, std::vector<double>(steps + 1, 0.0));

    std::vector<double> x(n), prev_integrand(n, 0.0), prev_u(n, 0.0);
    std::vector<std::size_t> violations(n, 0);
    std::vector<std::mt19937_64> rng;
    rng.reserve(n);
    std::vector<std::normal_distribution<double>> gauss(n,
                                                        std::normal_distribution<double>(0.0, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = agents[i].x0;
        rng.emplace_back(split_seed(opts.seed, i));
    }

    double eat0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) eat0 += x[i];
    res.eat[0] = eat0 / static_cast<double>(n);

    double q_acc = 0.0;  // signed running pressure integral of the EAT
    double g_prev = setup.g ? g_eval(*setup.g, res.eat[0] - y) : 0.0;
    post(std::size_t{0}, res.eat[0], res.q_realized[0]);

    const bool parallel = opts.parallel;
    for (std::size_t step = 0; step <= steps; ++step) {
        const bool last = step == steps;
        const double t = sim_grid.t(step);
        const double disc = std::exp(-cost.delta * t);
        const double q_hat = res.q_realized[step];

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
        for (std::size_t i = 0; i < n; ++i) {
            const Agent& agent = agents[i];
            const HeaterType& type = setup.dyn_types[agent.type_index];
            const double xi_now = x[i];
            const double u = control(i, xi_now, step);

            double f;
            if (setup.cost_kind == CostKind::Ctt) {
                const double dz = xi_now - z;
                const double d0 = xi_now - agent.x0;
                f = disc * (0.5 * q_hat * dz * dz + 0.5 * cost.q_x0 * d0 * d0 +
                            0.5 * cost.r * u * u);
            } else {
                const double dy = xi_now - y;
                f = disc * (cost.q_lq * dy * dy + cost.r * u * u);
            }
            if (step > 0) {
                res.cost[i] += 0.5 * dt * (prev_integrand[i] + f);
                res.energy_kwh[i] += 0.5 * dt * (prev_u[i] + u);
            }
            prev_integrand[i] = f;
            prev_u[i] = u;

            if (xi_now < scenario.band.l || xi_now > scenario.band.h) ++violations[i];
            res.excursion[i] = std::max(res.excursion[i], std::abs(xi_now - agent.x0));
            if (i < tracked) {
                res.path_x[i][step] = xi_now;
                res.path_u[i][step] = u;
            }
            if (last) {
                res.terminal_x[i] = xi_now;
            } else {
                const double sigma = opts.sigma_override.value_or(type.sigma);
                const double noise = gauss[i](rng[i]);  // drawn even when sigma == 0
                const double move = -type.a * (xi_now - type.x_out) +
                                    type.b * (u + setup.u_free[i]);
                x[i] = xi_now + move * dt + sigma * sqrt_dt * noise;
            }
        }

        if (!last) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += x[i];  // fixed order
            res.eat[step + 1] = sum / static_cast<double>(n);
            if (setup.g) {
                const double g_cur = g_eval(*setup.g, res.eat[step + 1] - y);
                q_acc += 0.5 * dt * (g_prev + g_cur);
                g_prev = g_cur;
                res.q_realized[step + 1] = std::abs(q_acc);
            }
            post(step + 1, res.eat[step + 1], res.q_realized[step + 1]);
        }
    }

    res.comfort_violations = std::accumulate(violations.begin(), violations.end(), std::size_t{0});
    return res;
}

std::size_t law_stride(const TimeGrid& law_grid, const SimOptions& opts, std::size_t steps) {
    const double ratio = opts.dt / law_grid.dt;
    const auto stride = static_cast<std::size_t>(std::llround(ratio));
    if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-9)
        throw InvalidParameterError("simulation dt must be an integer multiple of the law grid dt");
    if (steps * stride > law_grid.n_steps)
        throw InvalidParameterError("control laws end before the simulation horizon");
    return stride;
}

}  // namespace

ControlLaw MfLaw::for_anchor(double x0) const {
    ControlLaw law;
    law.pi = pi;
    law.alpha = alpha_unit;
    for (double& v : law.alpha.values) v *= (x0 - z);
    law.z = z;
    law.r = r;
    law.b = b;
    return law;
}

std::vector<MfLaw> build_mf_laws(const Scenario& scenario, const Trajectory& q_y) {
    std::vector<MfLaw> laws;
    laws.reserve(scenario.types.count());
    for (const auto& type : scenario.types.types) {
        MfLaw law;
        law.pi = solve_riccati(q_y, type, scenario.costs);
        law.alpha_unit = solve_offset(law.pi, scenario.z() + 1.0, type, scenario.costs,
                                      scenario.z());
        law.z = scenario.z();
        law.b = type.b;
        law.r = scenario.costs.r;
        laws.push_back(std::move(law));
    }
    return laws;
}

SimResult simulate_population(const std::vector<Agent>& agents, const Scenario& scenario,
                              const std::vector<MfLaw>& laws, const GFunction& g,
                              const SimOptions& opts) {
    if (laws.size() != scenario.types.count())
        throw InvalidParameterError("one mean field law per heater type is required");
    const std::size_t steps = checked_steps(opts);
    const std::size_t stride = law_stride(laws.front().pi.grid, opts, steps);

    EngineSetup setup;
    setup.dyn_types = scenario.types.types;
    setup.u_free = assumed_u_free(agents, scenario.types.types);
    setup.g = &g;
    setup.cost_kind = CostKind::Ctt;

    auto control = [&](std::size_t i, double xv, std::size_t step) {
        const Agent& agent = agents[i];
        return laws[agent.type_index].control(xv, agent.x0, step * stride);
    };
    return run_engine(agents, scenario, setup, opts, control,
                      [](std::size_t, double, double) {});
}

SimResult simulate_population_serial(const std::vector<Agent>& agents,
                                     const Scenario& scenario,
                                     const std::vector<MfLaw>& laws, const GFunction& g,
                                     const SimOptions& opts) {
    SimOptions serial = opts;
    serial.parallel = false;
    return simulate_population(agents, scenario, laws, g, serial);
}

SimResult lqg_baseline(const std::vector<Agent>& agents, const Scenario& scenario,
                       const SimOptions& opts) {
    std::vector<StationaryLaw> laws;
    laws.reserve(scenario.types.count());
    for (const auto& type : scenario.types.types)
        laws.push_back(standard_lqg_law(type, scenario.costs, scenario.y()));

    EngineSetup setup;
    setup.dyn_types = scenario.types.types;
    setup.u_free = assumed_u_free(agents, scenario.types.types);
    setup.cost_kind = CostKind::Lqg;

    auto control = [&](std::size_t i, double xv, std::size_t) {
        const Agent& agent = agents[i];
        return laws[agent.type_index].control(xv, agent.x0);
    };
    return run_engine(agents, scenario, setup, opts, control,
                      [](std::size_t, double, double) {});
}

SimResult robustness_sim(const std::vector<Agent>& agents, const Scenario& assumed,
                         const std::vector<MfLaw>& assumed_laws, const GFunction& g,
                         const RobustnessOptions& robust, const SimOptions& opts) {
    const std::size_t steps = checked_steps(opts);
    const std::size_t stride = law_stride(assumed_laws.front().pi.grid, opts, steps);

    EngineSetup setup;
    setup.dyn_types = assumed.types.types;
    for (auto& type : setup.dyn_types) type.x_out = robust.true_x_out;
    setup.u_free = assumed_u_free(agents, assumed.types.types);  // biased feedforward
    setup.g = &g;
    setup.cost_kind = CostKind::Ctt;

    const auto window_steps = static_cast<std::size_t>(std::llround(robust.window / opts.dt));
    if (window_steps == 0)
        throw InvalidParameterError("plateau window shorter than one simulation step");

    struct Phase2State {
        bool switched = false;
        double switch_time = -1.0;
        std::vector<double> pi;
        std::vector<double> alpha_unit;
    } state;
    state.pi.assign(assumed.types.count(), 0.0);
    state.alpha_unit.assign(assumed.types.count(), 0.0);

    Trajectory eat_seen(TimeGrid{opts.dt, steps});

    auto rebuild_stationary = [&](double q_hat) {
        for (std::size_t s = 0; s < assumed.types.count(); ++s) {
            const HeaterType& type = assumed.types.types[s];
            const double pi = algebraic_riccati(type, q_hat, assumed.costs);
            const double c2 = type.b * type.b / assumed.costs.r;
            state.pi[s] = pi;
            state.alpha_unit[s] = (type.a * pi - assumed.costs.q_x0) /
                                  (type.a + assumed.costs.delta + c2 * pi);
        }
    };

    auto post = [&](std::size_t step, double eat, double q_hat) {
        eat_seen[step] = eat;
        if (!state.switched && step >= window_steps) {
            if (std::abs(eat - eat_seen[step - window_steps]) < robust.threshold) {
                state.switched = true;
                state.switch_time = static_cast<double>(step) * opts.dt;
            }
        }
        if (state.switched) rebuild_stationary(q_hat);
    };

    auto control = [&](std::size_t i, double xv, std::size_t step) {
        const Agent& agent = agents[i];
        const std::size_t s = agent.type_index;
        if (!state.switched)
            return assumed_laws[s].control(xv, agent.x0, step * stride);
        const HeaterType& type = assumed.types.types[s];
        const double z = assumed.z();
        const double alpha = state.alpha_unit[s] * (agent.x0 - z);
        return -(type.b / assumed.costs.r) * (state.pi[s] * xv + alpha - state.pi[s] * z);
    };

    SimResult res = run_engine(agents, assumed, setup, opts, control, post);
    res.switched = state.switched;
    res.switch_time = state.switch_time;
    return res;
}

NashGapStats epsilon_nash_gap(const std::vector<Agent>& agents, const Scenario& scenario,
                              const std::vector<MfLaw>& laws, const GFunction& g,
                              const SimOptions& opts, std::size_t probe_count) {
    const SimResult base = simulate_population(agents, scenario, laws, g, opts);
    const std::size_t n = agents.size();
    probe_count = std::min(probe_count, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 pick(split_seed(opts.seed, n + 0x5eedULL));
    std::shuffle(order.begin(), order.end(), pick);

    const std::size_t steps = base.eat.grid.n_steps;
    const double dt = opts.dt;
    const double sqrt_dt = std::sqrt(dt);
    const double z = scenario.z();
    const CostParams& cost = scenario.costs;

    NashGapStats stats;
    stats.per_probe.assign(probe_count, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (opts.parallel)
#endif
    for (std::size_t p = 0; p < probe_count; ++p) {
        const std::size_t i = order[p];
        const Agent& agent = agents[i];
        const HeaterType& type = scenario.types.types[agent.type_index];
        const double sigma = opts.sigma_override.value_or(type.sigma);
        const double uf = u_free(agent, type);

        // exact best response to the realized pressure trajectory
        const Trajectory pi = solve_riccati(base.q_realized, type, cost);
        const Trajectory alpha = solve_offset(pi, agent.x0, type, cost, z);

        std::mt19937_64 rng(split_seed(opts.seed, i));  // same noise as the base run
        std::normal_distribution<double> gauss(0.0, 1.0);

        double x = agent.x0;
        double cost_br = 0.0;
        double prev_f = 0.0;
        for (std::size_t step = 0; step <= steps; ++step) {
            const double t = dt * static_cast<double>(step);
            const double u = -(type.b / cost.r) * (pi[step] * x + alpha[step] - pi[step] * z);
            const double dz = x - z;
            const double d0 = x - agent.x0;
            const double f = std::exp(-cost.delta * t) *
                             (0.5 * base.q_realized[step] * dz * dz +
                              0.5 * cost.q_x0 * d0 * d0 + 0.5 * cost.r * u * u);
            if (step > 0) cost_br += 0.5 * dt * (prev_f + f);
            prev_f = f;
            if (step < steps) {
                const double noise = gauss(rng);
                const double move = -type.a * (x - type.x_out) + type.b * (u + uf);
                x += move * dt + sigma * sqrt_dt * noise;
            }
        }

        const double j0 = base.cost[i];
        stats.per_probe[p] = (j0 - cost_br) / std::abs(j0);
    }

    for (double v : stats.per_probe) {
        stats.mean_rel += v;
        stats.max_rel = std::max(stats.max_rel, v);
    }
    if (probe_count > 0) stats.mean_rel /= static_cast<double>(probe_count);
    return stats;
}

ExcursionSummary excursion_stats(const SimResult& result) {
    ExcursionSummary s;
    const std::size_t n = result.excursion.size();
    if (n == 0) return s;
    for (std::size_t i = 0; i < n; ++i) {
        s.mean_excursion += result.excursion[i];
        s.total_energy_kwh += result.energy_kwh[i];
        s.mean_cost += result.cost[i];
    }
    s.mean_excursion /= static_cast<double>(n);
    s.mean_cost /= static_cast<double>(n);

    double mean_t = 0.0;
    for (double v : result.terminal_x) mean_t += v;
    mean_t /= static_cast<double>(n);
    double var = 0.0;
    for (double v : result.terminal_x) var += (v - mean_t) * (v - mean_t);
    s.terminal_spread = std::sqrt(var / static_cast<double>(n));
    return s;
}

}  // namespace ctt
