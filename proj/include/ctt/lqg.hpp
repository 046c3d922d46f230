#pragma once

#include "ctt/population.hpp"
#include "ctt/trajectory.hpp"

namespace ctt {

/// Cost weights of the individual tracking problem: discount rate delta
/// (1/h), initial-anchor weight q_x0, control weight r, and the tracking
/// weight q_lq of the plain LQG baseline.
struct CostParams {
    double delta = 1e-3;
    double q_x0 = 200.0;
    double r = 10.0;
    double q_lq = 200.0;

    void validate() const;
};

/// Affine feedback law u(x, t) = -(b/r) * (pi_t * x + alpha_t - pi_t * z)
/// for one agent (alpha is anchored to that agent's initial temperature).
struct ControlLaw {
    Trajectory pi;
    Trajectory alpha;
    double z = 0.0;
    double r = 1.0;
    double b = 1.0;
};

double feedback_control(const ControlLaw& law, double x, std::size_t t_index);

/// Stationary tracking law toward a common target: u = -(b/r) *
/// (pi*x + alpha_unit*(x0 - target) - pi*target).
struct StationaryLaw {
    double pi = 0.0;
    double alpha_unit = 0.0;
    double target = 0.0;
    double b = 1.0;
    double r = 1.0;

    double control(double x, double x0) const {
        const double alpha = alpha_unit * (x0 - target);
        return -(b / r) * (pi * x + alpha - pi * target);
    }
};

/// Unique nonnegative root of (b^2/r) pi^2 + (2a+delta) pi - (q_const + q_x0) = 0.
double algebraic_riccati(const HeaterType& type, double q_const, const CostParams& cost);

/// Bounded solution of the backward Riccati equation
///   dpi/dt = (2a+delta) pi + (b^2/r) pi^2 - q_t - q_x0,
/// integrated by fixed-step RK4 from pi(T_max) = algebraic_riccati(q(T_max)).
Trajectory solve_riccati(const Trajectory& q, const HeaterType& type, const CostParams& cost);

/// Bounded solution of the offset equation
///   dalpha/dt = (a + delta + (b^2/r) pi_t) alpha - (a pi_t - q_x0)(anchor - z),
/// backward RK4 from the steady-state-consistent terminal value. The anchor
/// is the agent's own initial temperature for an individual best response,
/// or the population's initial mean inside the mean field system.
Trajectory solve_offset(const Trajectory& pi, double anchor, const HeaterType& type,
                        const CostParams& cost, double z);

/// Forward RK4 solution of the closed-loop mean dynamics
///   dxbar/dt = -(a + (b^2/r) pi_t) xbar - (b^2/r)(alpha_t - pi_t z) + a xbar0,
/// from xbar(0) = xbar0.
Trajectory forward_mean(const Trajectory& pi, const Trajectory& alpha,
                        const HeaterType& type, const CostParams& cost,
                        double xbar0, double z);

/// Plain LQG tracker of the common target y: constant gain from the
/// algebraic Riccati equation with weight q_lq (no initial-temperature
/// anchor in the cost), constant offset per unit anchor gap.
StationaryLaw standard_lqg_law(const HeaterType& type, const CostParams& cost, double y);

/// Trapezoidal quadrature of e^{-delta t} [ (q_t/2)(x-z)^2
/// + (q_x0/2)(x-x0)^2 + (r/2) u^2 ] over the grid.
double discounted_cost(const Trajectory& x, const Trajectory& u, const Trajectory& q,
                       double x0, const CostParams& cost, double z);

}  // namespace ctt
