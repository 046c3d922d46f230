#include "ctt/lqg.hpp"

#include <cmath>

#include "ctt/errors.hpp"

namespace ctt {

namespace {

constexpr double kOverflowGuard = 1e12;

void check_finite(double v, std::size_t step, const char* what) {
    if (!std::isfinite(v) || std::abs(v) > kOverflowGuard)
        throw NumericInstabilityError(std::string(what) + " integration overflow", step);
}

}  // namespace

void CostParams::validate() const {
    if (!(delta > 0.0)) throw InvalidParameterError("discount rate delta must be positive");
    if (q_x0 < 0.0) throw InvalidParameterError("anchor weight q_x0 must be nonnegative");
    if (!(r > 0.0)) throw InvalidParameterError("control weight r must be positive");
    if (!(q_lq > 0.0)) throw InvalidParameterError("baseline weight q_lq must be positive");
}

double feedback_control(const ControlLaw& law, double x, std::size_t t_index) {
    const double pi = law.pi[t_index];
    const double alpha = law.alpha[t_index];
    return -(law.b / law.r) * (pi * x + alpha - pi * law.z);
}

double algebraic_riccati(const HeaterType& type, double q_const, const CostParams& cost) {
    const double q = q_const + cost.q_x0;
    if (q < 0.0) throw InvalidParameterError("total cost weight must be nonnegative");
    if (q == 0.0) return 0.0;
    const double c2 = type.b * type.b / cost.r;
    const double c1 = 2.0 * type.a + cost.delta;
    // stable form of the positive quadratic root
    return 2.0 * q / (c1 + std::sqrt(c1 * c1 + 4.0 * c2 * q));
}

Trajectory solve_riccati(const Trajectory& q, const HeaterType& type, const CostParams& cost) {
    const TimeGrid grid = q.grid;
    const double dt = grid.dt;
    const double c1 = 2.0 * type.a + cost.delta;
    const double c2 = type.b * type.b / cost.r;
    const double q0 = cost.q_x0;

    auto rhs = [&](double qt, double pi) { return c1 * pi + c2 * pi * pi - qt - q0; };

    Trajectory pi(grid);
    pi[grid.n_steps] = algebraic_riccati(type, q.back(), cost);
    for (std::size_t i = grid.n_steps; i-- > 0;) {
        const double qr = q[i + 1], ql = q[i];
        const double qm = 0.5 * (ql + qr);
        const double p1 = pi[i + 1];
        const double k1 = rhs(qr, p1);
        const double k2 = rhs(qm, p1 - 0.5 * dt * k1);
        const double k3 = rhs(qm, p1 - 0.5 * dt * k2);
        const double k4 = rhs(ql, p1 - dt * k3);
        double v = p1 - dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_finite(v, i, "Riccati");
        if (v < 0.0 && v > -1e-12) v = 0.0;  // round-off only; exact solution stays >= 0
        pi[i] = v;
    }
    return pi;
}

Trajectory solve_offset(const Trajectory& pi, double anchor, const HeaterType& type,
                        const CostParams& cost, double z) {
    const TimeGrid grid = pi.grid;
    const double dt = grid.dt;
    const double c2 = type.b * type.b / cost.r;
    const double gap = anchor - z;

    auto coeff = [&](double pit) { return type.a + cost.delta + c2 * pit; };
    auto force = [&](double pit) { return (type.a * pit - cost.q_x0) * gap; };
    auto rhs = [&](double pit, double al) { return coeff(pit) * al - force(pit); };

    Trajectory alpha(grid);
    const double pi_end = pi.back();
    alpha[grid.n_steps] = force(pi_end) / coeff(pi_end);
    for (std::size_t i = grid.n_steps; i-- > 0;) {
        const double pr = pi[i + 1], pl = pi[i];
        const double pm = 0.5 * (pl + pr);
        const double a1 = alpha[i + 1];
        const double k1 = rhs(pr, a1);
        const double k2 = rhs(pm, a1 - 0.5 * dt * k1);
        const double k3 = rhs(pm, a1 - 0.5 * dt * k2);
        const double k4 = rhs(pl, a1 - dt * k3);
        const double v = a1 - dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_finite(v, i, "offset");
        alpha[i] = v;
    }
    return alpha;
}

Trajectory forward_mean(const Trajectory& pi, const Trajectory& alpha,
                        const HeaterType& type, const CostParams& cost,
                        double xbar0, double z) {
    const TimeGrid grid = pi.grid;
    const double dt = grid.dt;
    const double c2 = type.b * type.b / cost.r;

    auto rhs = [&](double pit, double alt, double x) {
        return -(type.a + c2 * pit) * x - c2 * (alt - pit * z) + type.a * xbar0;
    };

    Trajectory x(grid);
    x[0] = xbar0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double pl = pi[i], pr = pi[i + 1], pm = 0.5 * (pl + pr);
        const double al = alpha[i], ar = alpha[i + 1], am = 0.5 * (al + ar);
        const double x0 = x[i];
        const double k1 = rhs(pl, al, x0);
        const double k2 = rhs(pm, am, x0 + 0.5 * dt * k1);
        const double k3 = rhs(pm, am, x0 + 0.5 * dt * k2);
        const double k4 = rhs(pr, ar, x0 + dt * k3);
        const double v = x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_finite(v, i, "mean dynamics");
        x[i + 1] = v;
    }
    return x;
}

StationaryLaw standard_lqg_law(const HeaterType& type, const CostParams& cost, double y) {
    CostParams flat = cost;
    flat.q_x0 = 0.0;  // the baseline cost has no initial-temperature anchor
    const double pi_bar = algebraic_riccati(type, cost.q_lq, flat);
    const double c2 = type.b * type.b / cost.r;
    const double alpha_unit = type.a * pi_bar / (type.a + cost.delta + c2 * pi_bar);
    return StationaryLaw{pi_bar, alpha_unit, y, type.b, cost.r};
}

double discounted_cost(const Trajectory& x, const Trajectory& u, const Trajectory& q,
                       double x0, const CostParams& cost, double z) {
    Trajectory integrand(x.grid);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx_z = x[i] - z;
        const double dx_0 = x[i] - x0;
        const double f = 0.5 * q[i] * dx_z * dx_z + 0.5 * cost.q_x0 * dx_0 * dx_0 +
                         0.5 * cost.r * u[i] * u[i];
        integrand[i] = std::exp(-cost.delta * x.grid.t(i)) * f;
    }
    return trapezoid(integrand);
}

}  // namespace ctt
