#include "ctt/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ctt/errors.hpp"
#include "ctt/lqg.hpp"

namespace ctt {

namespace {

// exact one-interval weights of int_0^dt e^{-A(dt-s)} (1, s/dt) ds,
// written with x = A*dt; series kicks in where the closed form cancels.
struct ExpWeights {
    double decay;   // e^{-x}
    double w_left;  // weight of the integrand value at the interval start
    double w_right; // weight at the interval end
};

ExpWeights exp_weights(double x, double dt) {
    ExpWeights w{};
    w.decay = std::exp(-x);
    if (x > 1e-5) {
        const double total = dt * (-std::expm1(-x)) / x;
        w.w_right = (dt / x) * (1.0 - (-std::expm1(-x)) / x);
        w.w_left = total - w.w_right;
    } else {
        w.w_right = dt * (0.5 - x / 6.0);
        w.w_left = dt * (0.5 - x / 3.0);
    }
    return w;
}

}  // namespace

NormK NormK::default_for(const Scenario& scenario) {
    return NormK{0.5 * (scenario.types.min_a() + scenario.costs.delta)};
}

void NormK::validate(const Scenario& scenario) const {
    const double limit = scenario.types.min_a() + scenario.costs.delta;
    if (!(k > 0.0) || !(k < limit))
        throw InvalidParameterError("norm weight k must satisfy 0 < k < min_s a^s + delta");
}

double norm_k(const Trajectory& x, NormK k) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        m = std::max(m, std::exp(-k.k * x.grid.t(i)) * std::abs(x[i]));
    return m;
}

Trajectory delta_op(const Trajectory& x_bar, const GFunction& g, double y) {
    Trajectory q(x_bar.grid);
    double acc = 0.0;
    const double half_dt = 0.5 * x_bar.grid.dt;
    double prev = g_eval(g, x_bar[0] - y);
    q[0] = 0.0;
    for (std::size_t i = 1; i < x_bar.size(); ++i) {
        const double cur = g_eval(g, x_bar[i] - y);
        acc += half_dt * (prev + cur);
        q[i] = std::abs(acc);
        prev = cur;
    }
    return q;
}

PerTypeSolution t_op_full(const Trajectory& q, const HeaterType& type,
                          const CostParams& cost, double xbar0, double z) {
    PerTypeSolution s;
    s.pi = solve_riccati(q, type, cost);
    s.alpha = solve_offset(s.pi, xbar0, type, cost, z);
    s.x_bar_s = forward_mean(s.pi, s.alpha, type, cost, xbar0, z);
    return s;
}

Trajectory t_op(const Trajectory& q, const HeaterType& type, const CostParams& cost,
                double xbar0, double z) {
    return t_op_full(q, type, cost, xbar0, z).x_bar_s;
}

Trajectory t_delta_explicit(const Trajectory& x_bar, const HeaterType& type,
                            const GFunction& g, double y, const CostParams& cost,
                            double xbar0, double z) {
    const Trajectory q = delta_op(x_bar, g, y);
    const Trajectory pi = solve_riccati(q, type, cost);

    const TimeGrid grid = q.grid;
    const std::size_t n = grid.n_steps;
    const double dt = grid.dt;
    const double c2 = type.b * type.b / cost.r;
    const double cs = (c2 * cost.q_x0 + type.a * type.a + type.a * cost.delta) * (xbar0 - z);

    // discounted rate a + delta + c2*pi drives psi; phi runs at the same
    // rate minus delta
    std::vector<double> a_psi(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        a_psi[i] = type.a + cost.delta + c2 * pi[i];

    // inner improper integral I(eta) = int_eta^inf psi(tau, eta) dtau,
    // truncated at T_max with the steady-state continuation tail
    std::vector<double> inner(grid.size());
    inner[n] = 1.0 / a_psi[n];
    for (std::size_t i = n; i-- > 0;) {
        const double dq = dt * 0.5 * (a_psi[i] + a_psi[i + 1]);
        const ExpWeights w = exp_weights(dq, dt);
        inner[i] = w.decay * inner[i + 1] + (w.w_left + w.w_right);
    }

    Trajectory out(grid);
    out[0] = xbar0;
    double phi = 1.0;     // phi(t, 0)
    double outer = 0.0;   // int_0^t phi(t, eta) I(eta) deta
    for (std::size_t i = 0; i < n; ++i) {
        const double dp = dt * 0.5 * (a_psi[i] + a_psi[i + 1]) - cost.delta * dt;
        const ExpWeights w = exp_weights(dp, dt);
        outer = w.decay * outer + w.w_left * inner[i] + w.w_right * inner[i + 1];
        phi *= w.decay;
        out[i + 1] = z + phi * (xbar0 - z) + cs * outer;
    }
    return out;
}

Trajectory m_op(const Trajectory& x_bar, const Scenario& scenario, const GFunction& g) {
    const double lo = scenario.g_low();
    const double hi = scenario.g_high();
    constexpr double slack = 1e-9;

    Trajectory clipped = x_bar;
    for (std::size_t i = 0; i < clipped.size(); ++i) {
        double& v = clipped[i];
        if (v < lo - slack || v > hi + slack)
            throw DomainError("mean trajectory leaves [z, xbar0]");
        v = std::clamp(v, lo, hi);
    }

    const Trajectory q = delta_op(clipped, g, scenario.y());
    const std::size_t m = scenario.types.count();
    std::vector<Trajectory> responses(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (m > 1)
#endif
    for (std::size_t s = 0; s < m; ++s)
        responses[s] = t_op(q, scenario.types.types[s], scenario.costs,
                            scenario.xbar0(), scenario.z());

    // reduce in type order so the result is independent of the schedule
    Trajectory out(x_bar.grid, 0.0);
    for (std::size_t s = 0; s < m; ++s)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += scenario.types.weights[s] * responses[s][i];
    return out;
}

MeanFieldSolution picard_iterate(const Trajectory& x_init, const Scenario& scenario,
                                 const GFunction& g, NormK k, double tol,
                                 std::size_t max_iter, double damping) {
    k.validate(scenario);
    if (!(damping > 0.0) || damping > 1.0)
        throw InvalidParameterError("picard damping must lie in (0, 1]");

    Trajectory x = x_init;
    Trajectory best_x = x;
    double best_res = std::numeric_limits<double>::infinity();
    double best_res_l2 = 0.0;
    std::size_t iterations = 0;
    bool converged = false;

    for (std::size_t it = 0; it <= max_iter; ++it) {
        const Trajectory mx = m_op(x, scenario, g);
        const Trajectory diff = lin_comb(1.0, x, -1.0, mx);
        const double res = norm_k(diff, k);
        if (res < best_res) {
            best_res = res;
            best_res_l2 = l2_norm(diff);
            best_x = x;
        }
        iterations = it;
        if (res < tol) {
            converged = true;
            break;
        }
        if (it == max_iter) break;
        x = lin_comb(1.0 - damping, x, damping, mx);
    }

    MeanFieldSolution sol;
    sol.x_bar = best_x;
    sol.q_y = delta_op(best_x, g, scenario.y());
    sol.per_type.reserve(scenario.types.count());
    for (const auto& type : scenario.types.types)
        sol.per_type.push_back(
            t_op_full(sol.q_y, type, scenario.costs, scenario.xbar0(), scenario.z()));
    sol.residual_k = best_res;
    sol.residual_l2 = best_res_l2;
    sol.converged = converged;
    sol.iterations = iterations;
    return sol;
}

double lipschitz_bound_rk(const Scenario& scenario, NormK k) {
    k.validate(scenario);
    const double kk = k.k;
    const double min_a = scenario.types.min_a();
    const double delta = scenario.costs.delta;
    const double gap = std::abs(scenario.xbar0() - scenario.z());
    const double denom = 2.0 * min_a + delta - kk;
    if (!(denom > 0.0))
        throw InvalidParameterError("k too large: 2 min_s a^s + delta - k must be positive");

    double rk = 0.0;
    for (std::size_t s = 0; s < scenario.types.count(); ++s) {
        const HeaterType& t = scenario.types.types[s];
        const double b2r = t.b * t.b / scenario.costs.r;
        if (!(t.a + delta - kk > 0.0))
            throw InvalidParameterError("k too large: a^s + delta - k must be positive");
        const double cs = (b2r * scenario.costs.q_x0 + t.a * t.a + t.a * delta) * gap;
        const double c1 = gap * b2r / (kk * kk * denom);
        const double ls = b2r * cs / (kk * denom * (t.a + delta));
        const double c2 = ls / ((t.a + delta - kk) * (t.a + kk));
        const double c3 = ls / t.a;
        rk += scenario.types.weights[s] * (c1 + c2 + c3);
    }
    return rk;
}

GrowthBounds growth_bounds(const GFunction& g, const Scenario& scenario, NormK k) {
    k.validate(scenario);
    const double min_a = scenario.types.min_a();
    const double delta = scenario.costs.delta;
    const double radius = std::abs(scenario.xbar0() - scenario.z());
    GrowthBounds b;
    b.k0 = g.max_abs_on(radius);
    b.k1 = b.k0 / (2.0 * min_a);
    b.k2 = b.k0 / (4.0 * min_a * min_a) + scenario.costs.q_x0 / (2.0 * min_a);
    b.k3 = g.lipschitz() / (k.k * (2.0 * min_a + delta - k.k));
    return b;
}

double m_derivative_bound(const GFunction& g, const Scenario& scenario) {
    const double radius = std::abs(scenario.xbar0() - scenario.z());
    const double k0 = g.max_abs_on(radius);
    const double min_a = scenario.types.min_a();
    const double k2 = k0 / (4.0 * min_a * min_a) + scenario.costs.q_x0 / (2.0 * min_a);
    const double gap = radius;

    double bound = 0.0;
    for (std::size_t s = 0; s < scenario.types.count(); ++s) {
        const HeaterType& t = scenario.types.types[s];
        const double b2r = t.b * t.b / scenario.costs.r;
        const double cs = (b2r * scenario.costs.q_x0 + t.a * t.a + t.a * scenario.costs.delta) * gap;
        const double d_dot = b2r * k0 / (2.0 * t.a);           // bound on |dA/dt|
        const double ms = t.a + b2r * k2 + d_dot / t.a;        // bound on phi(t,0) A_t
        const double k1s = ms * gap;
        const double k2s = cs / t.a;
        const double m1s = 2.0 + d_dot / (t.a * t.a);          // bound on f_t A_t
        const double k3s = cs * m1s / t.a;
        bound += scenario.types.weights[s] * (k1s + k2s + k3s);
    }
    return bound;
}

DiscontinuityReport sup_norm_discontinuity_demo(int n_max) {
    // counterexample data: g(x) = x, xbar0 = 1, y = 0, z = -1, no anchor
    Scenario sc;
    sc.types.types = {derive_rates(0.57, 0.27, -10.0, 0.0)};
    sc.types.weights = {1.0};
    sc.initial = InitialDistribution{1.0, 0.0};
    sc.band = ComfortBand{-1.0, 1.0, -1.0, 0.0};
    sc.costs = CostParams{1e-3, 0.0, 10.0, 200.0};
    const GFunction g = GFunction::linear(1.0);

    const double a = sc.types.types[0].a;
    const double t0 = 40.0 / a;
    const std::size_t steps = 200000;

    DiscontinuityReport report;

    // M(y) stays at xbar0 for all time; checked on the base horizon
    sc.grid = TimeGrid{t0 / static_cast<double>(steps), steps};
    const Trajectory flat_y(sc.grid, sc.y());
    const Trajectory m_y = m_op(flat_y, sc, g);
    report.m_of_y_error =
        sup_diff(m_y, Trajectory(sc.grid, sc.xbar0()));

    for (int n = 1; n <= n_max; ++n) {
        // horizon doubles with n so the pressure integral reaches the same
        // level 0.5^n * T_max(n) = t0 for every member of the sequence
        const double horizon = t0 * std::ldexp(1.0, n);
        sc.grid = TimeGrid{horizon / static_cast<double>(steps), steps};

        const double offset = std::ldexp(1.0, -n);  // 0.5^n
        const Trajectory x_n(sc.grid, sc.y() + offset);
        const Trajectory m_x = m_op(x_n, sc, g);

        DiscontinuityRow row;
        row.n = n;
        row.x_gap_sup = offset;
        row.horizon = horizon;
        row.m_terminal = m_x.back();
        double gap = 0.0;
        for (double v : m_x.values) gap = std::max(gap, std::abs(v - sc.xbar0()));
        row.m_gap_sup = gap;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace ctt
