#include "ctt/near_fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctt/errors.hpp"
#include "ctt/lqg.hpp"

namespace ctt {

namespace {

// signed limit of the unit-gain pressure integral, read at T_max
double signed_limit(const Trajectory& x_bar, const GFunction& g_unit, double y) {
    Trajectory integrand(x_bar.grid);
    for (std::size_t i = 0; i < x_bar.size(); ++i)
        integrand[i] = g_eval(g_unit, x_bar[i] - y);
    return trapezoid(integrand);
}

Trajectory boost_profile(const TimeGrid& grid, double q_star, double boost, double t0) {
    Trajectory q(grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        q[i] = grid.t(i) <= t0 ? boost * q_star : q_star;
    return q;
}

}  // namespace

void Algo1Params::validate() const {
    if (!(1.0 < n1 && n1 < n2))
        throw InvalidParameterError("step multipliers must satisfy 1 < n1 < n2");
    if (!(t0 > 0.0)) throw InvalidParameterError("boost duration t0 must be positive");
    if (!(d_mu > 0.0)) throw InvalidParameterError("finite-difference step d_mu must be positive");
    if (!(e1 > 0.0) || !(e2_rel > 0.0))
        throw InvalidParameterError("tolerances e1, e2 must be positive");
    if (!(gamma > 0.0)) throw InvalidParameterError("descent step gamma must be positive");
}

double q_inf_star(const HeaterType& type, const CostParams& cost,
                  double xbar0, double y, double z) {
    if (y == z)
        throw InvalidParameterError(
            "division by zero: mean target y coincides with the boundary target z");
    const double b2 = type.b * type.b;
    return (type.a * (type.a + cost.delta) * cost.r + cost.q_x0 * b2) / b2 *
           ((xbar0 - y) / (y - z));
}

BoundaryTrajectories boundary_trajectories(const Algo1Params& p, const Scenario& scenario) {
    p.validate();
    if (scenario.types.count() != 1)
        throw InvalidParameterError("the near fixed point search handles uniform populations only");
    const HeaterType& type = scenario.types.types[0];
    const double q_star =
        q_inf_star(type, scenario.costs, scenario.xbar0(), scenario.y(), scenario.z());

    BoundaryTrajectories b;
    const Trajectory q_sup = boost_profile(scenario.grid, q_star, p.n1, p.t0);
    const Trajectory q_inf = boost_profile(scenario.grid, q_star, p.n2, p.t0);
    b.x_sup = t_op(q_sup, type, scenario.costs, scenario.xbar0(), scenario.z());
    b.x_inf = t_op(q_inf, type, scenario.costs, scenario.xbar0(), scenario.z());
    return b;
}

MuBracket mu_bounds(const Trajectory& x_sup, const Trajectory& x_inf,
                    const GFunction& g_unit, double y, double q_star) {
    MuBracket m;
    m.lim_sup = signed_limit(x_sup, g_unit, y);
    m.lim_inf = signed_limit(x_inf, g_unit, y);
    if (!(m.lim_sup > 0.0) || !(m.lim_inf > 0.0))
        throw DegenerateScenarioError(
            "limiting pressure integral is nonpositive: the undershoot outweighs the "
            "overshoot; retune t0, n1, n2");
    m.mu_sup = q_star / m.lim_sup;
    m.mu_inf = q_star / m.lim_inf;
    return m;
}

DichotomyResult dichotomy_f(double mu, const Trajectory& x_sup, const Trajectory& x_inf,
                            const GFunction& g_unit, double y, double q_star, double e2) {
    // the limit is linear in mu for both shapes, so bisect on mu * L(f)
    const double v_lo = mu * signed_limit(x_inf, g_unit, y);
    const double v_hi = mu * signed_limit(x_sup, g_unit, y);
    if (q_star < v_lo - e2 || q_star > v_hi + e2)
        throw BracketError("target pressure level not bracketed by the boundary trajectories");

    double f_lo = 0.0, f_hi = 1.0;
    DichotomyResult res;
    res.x_bar = x_sup;
    double f = 1.0, value = v_hi;
    if (std::abs(v_lo - q_star) < std::abs(v_hi - q_star)) {
        f = 0.0;
        value = v_lo;
        res.x_bar = x_inf;
    }
    std::size_t it = 0;
    const std::size_t max_it = 200;
    while (std::abs(value - q_star) >= e2 && it < max_it) {
        ++it;
        f = 0.5 * (f_lo + f_hi);
        res.x_bar = lin_comb(1.0 - f, x_inf, f, x_sup);
        value = mu * signed_limit(res.x_bar, g_unit, y);
        if (value >= q_star)
            f_hi = f;
        else
            f_lo = f;
    }
    res.f = f;
    res.iterations = it;
    return res;
}

NearFixedPoint algorithm1(const Algo1Params& p, const Scenario& scenario,
                          GFunction::Kind kind, double beta) {
    p.validate();
    scenario.validate();
    if (scenario.types.count() != 1)
        throw InvalidParameterError("the near fixed point search handles uniform populations only");

    const HeaterType& type = scenario.types.types[0];
    const double y = scenario.y();
    const double q_star =
        q_inf_star(type, scenario.costs, scenario.xbar0(), scenario.y(), scenario.z());
    const double e2 = p.e2_rel * q_star;
    const GFunction g_unit = scenario.make_g(kind, 1.0, beta);

    // boundary trajectories; if they have not settled on y by T_max, double
    // the horizon once before trusting the limits
    Scenario work = scenario;
    BoundaryTrajectories bounds = boundary_trajectories(p, work);
    if (std::abs(bounds.x_sup.back() - y) >= 1e-4 ||
        std::abs(bounds.x_inf.back() - y) >= 1e-4) {
        work.grid.n_steps *= 2;
        bounds = boundary_trajectories(p, work);
    }

    const MuBracket bracket = mu_bounds(bounds.x_sup, bounds.x_inf, g_unit, y, q_star);
    const double width = bracket.mu_inf - bracket.mu_sup;
    const double lo = bracket.mu_sup + 1e-3 * width;
    const double hi = bracket.mu_inf - 1e-3 * width - p.d_mu;
    if (!(lo < hi))
        throw DegenerateScenarioError("gain bracket too narrow for the finite-difference step");

    if (p.mu_init && (*p.mu_init <= bracket.mu_sup || *p.mu_init >= bracket.mu_inf))
        throw BracketError("mu_init lies outside (mu_sup, mu_inf)");

    NearFixedPoint out;
    out.mu_sup = bracket.mu_sup;
    out.mu_inf = bracket.mu_inf;

    struct Eval {
        double residual = 0.0;
        double f = 0.0;
        double q_gap = 0.0;
        Trajectory x_bar;
    };
    auto evaluate = [&](double mu) {
        const DichotomyResult d =
            dichotomy_f(mu, bounds.x_sup, bounds.x_inf, g_unit, y, q_star, e2);
        const GFunction g = g_unit.with_mu(mu);
        const Trajectory mx = m_op(d.x_bar, work, g);
        Eval e;
        e.residual = l2_norm(lin_comb(1.0, d.x_bar, -1.0, mx));
        e.f = d.f;
        e.q_gap = std::abs(delta_op(d.x_bar, g, y).back() - q_star);
        e.x_bar = d.x_bar;
        return e;
    };

    double mu = std::clamp(p.mu_init.value_or(0.5 * (bracket.mu_sup + bracket.mu_inf)), lo, hi);
    Eval cur = evaluate(mu);
    double best_mu = mu;
    Eval best = cur;

    double gamma = p.gamma;
    std::size_t bad_steps = 0;
    bool done = false;
    for (std::size_t iter = 0; iter < p.max_iter && !done; ++iter) {
        out.log.push_back({iter, mu, cur.f, cur.residual, cur.q_gap});

        // mu + d_mu stays inside the bracket by construction of hi
        const Eval ahead = evaluate(mu + p.d_mu);
        const double grad = (ahead.residual - cur.residual) / p.d_mu;
        if (grad == 0.0) break;

        // backtracking with growth: halve gamma until the step improves,
        // double it after an accepted step
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            const double trial_mu = std::clamp(mu - gamma * grad, lo, hi);
            if (trial_mu == mu) {
                done = true;  // projected step cannot move: minimum at the edge
                break;
            }
            const Eval trial = evaluate(trial_mu);
            if (trial.residual < cur.residual) {
                if (std::abs(trial.residual - cur.residual) < p.e1) done = true;
                mu = trial_mu;
                cur = trial;
                if (cur.residual < best.residual) {
                    best = cur;
                    best_mu = mu;
                }
                accepted = true;
                gamma = std::min(gamma * 2.0, 1e12);
                break;
            }
            gamma *= 0.5;
        }
        if (accepted) {
            bad_steps = 0;
        } else if (!done) {
            ++bad_steps;
            if (bad_steps >= 20) {
                out.stagnated = true;
                break;
            }
        }
    }

    out.mu_star = best_mu;
    out.x_bar = best.x_bar;
    out.q_y = delta_op(best.x_bar, g_unit.with_mu(best_mu), y);
    out.residual_l2 = best.residual;
    out.terminal_gap = std::abs(best.x_bar.back() - y);
    out.f_star = best.f;
    return out;
}

}  // namespace ctt
