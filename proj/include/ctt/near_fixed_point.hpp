#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctt/mean_field.hpp"
#include "ctt/scenario.hpp"

namespace ctt {

/// Hyperparameters of the desirable near fixed point search.
struct Algo1Params {
    double n1 = 1.1;        ///< boost multiplier of the upper boundary trajectory
    double n2 = 1.5;        ///< boost multiplier of the lower boundary trajectory
    double t0 = 0.25;       ///< boost duration (h)
    double d_mu = 1.0;      ///< finite-difference step in mu
    double e1 = 1e-6;       ///< descent termination tolerance on the L2 residual
    double e2_rel = 1e-4;   ///< dichotomy tolerance, relative to q_inf_star
    double gamma = 10.0;    ///< initial descent step size (adapted by backtracking)
    std::size_t max_iter = 400;
    std::optional<double> mu_init;

    void validate() const;
};

struct DescentRow {
    std::size_t iter = 0;
    double mu = 0.0;
    double f = 0.0;
    double residual_l2 = 0.0;
    double q_limit_gap = 0.0;
};

/// Desirable near fixed point: gain mu_star and the mean trajectory whose
/// steady state sits exactly on the target.
struct NearFixedPoint {
    double mu_star = 0.0;
    Trajectory x_bar;
    Trajectory q_y;
    double residual_l2 = 0.0;
    double terminal_gap = 0.0;   ///< |xbar(T_max) - y|
    double f_star = 0.0;
    double mu_sup = 0.0;
    double mu_inf = 0.0;
    bool stagnated = false;
    std::vector<DescentRow> log;
};

/// Steady-state pressure coefficient that pins the mean at y:
///   q = [a(a+delta) r + q_x0 b^2]/b^2 * (xbar0 - y)/(y - z).
double q_inf_star(const HeaterType& type, const CostParams& cost,
                  double xbar0, double y, double z);

/// Upper/lower boundary trajectories of the search family, generated by
/// boosting the steady-state coefficient by n1 (resp. n2) on [0, t0].
struct BoundaryTrajectories {
    Trajectory x_sup;
    Trajectory x_inf;
};

BoundaryTrajectories boundary_trajectories(const Algo1Params& p, const Scenario& scenario);

/// Gain bracket: mu_sup = q_star / lim Delta_1(x_sup) and likewise for
/// mu_inf, with the unit-gain running integral evaluated at T_max.
struct MuBracket {
    double mu_sup = 0.0;
    double mu_inf = 0.0;
    double lim_sup = 0.0;   ///< lim Delta_1(x_sup)
    double lim_inf = 0.0;   ///< lim Delta_1(x_inf)
};

MuBracket mu_bounds(const Trajectory& x_sup, const Trajectory& x_inf,
                    const GFunction& g_unit, double y, double q_star);

/// Bisection over convex combinations x^f = (1-f) x_inf + f x_sup until
/// |lim Delta_mu(x^f) - q_star| < e2. Returns the combination and f.
struct DichotomyResult {
    Trajectory x_bar;
    double f = 0.0;
    std::size_t iterations = 0;
};

DichotomyResult dichotomy_f(double mu, const Trajectory& x_sup, const Trajectory& x_inf,
                            const GFunction& g_unit, double y, double q_star, double e2);

/// Full search: boundary construction, gain bracket, and projected
/// gradient descent of || xbar(mu) - M_mu(xbar(mu)) ||_L2 over mu.
/// Restricted to single-type populations.
NearFixedPoint algorithm1(const Algo1Params& p, const Scenario& scenario,
                          GFunction::Kind kind, double beta);

}  // namespace ctt
