#pragma once

#include <cstddef>
#include <vector>

#include "ctt/scenario.hpp"
#include "ctt/trajectory.hpp"

namespace ctt {

/// Weighted sup-norm ||x||_k = sup_t |e^{-kt} x_t|; valid for
/// 0 < k < min_s a^s + delta.
struct NormK {
    double k = 0.0;

    static NormK default_for(const Scenario& scenario);
    void validate(const Scenario& scenario) const;
};

double norm_k(const Trajectory& x, NormK k);

/// Per-type best-response bundle of one mean field candidate.
struct PerTypeSolution {
    Trajectory pi;
    Trajectory alpha;
    Trajectory x_bar_s;
};

/// Candidate or actual fixed point of the mean field operator.
struct MeanFieldSolution {
    Trajectory x_bar;
    std::vector<PerTypeSolution> per_type;
    Trajectory q_y;
    double residual_k = 0.0;
    double residual_l2 = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Pressure coefficient q_t = | integral_0^t g(xbar - y) dtau | as a
/// running trapezoidal integral; q(0) = 0.
Trajectory delta_op(const Trajectory& x_bar, const GFunction& g, double y);

/// Best-response mean of one heater type to a pressure trajectory q:
/// chains solve_riccati -> solve_offset (anchored at xbar0) -> forward_mean.
Trajectory t_op(const Trajectory& q, const HeaterType& type, const CostParams& cost,
                double xbar0, double z);

/// As t_op but returning the intermediate Riccati and offset solutions.
PerTypeSolution t_op_full(const Trajectory& q, const HeaterType& type,
                          const CostParams& cost, double xbar0, double z);

/// Closed-form kernel representation of T^s(Delta(xbar)):
///   z + phi(t,0)(xbar0 - z) + C^s * int_0^t phi(t,eta) int_eta^inf psi(tau,eta) dtau deta,
/// evaluated by exponential-exact quadrature on the grid. Serves as the
/// independent oracle for t_op(delta_op(.)).
Trajectory t_delta_explicit(const Trajectory& x_bar, const HeaterType& type,
                            const GFunction& g, double y, const CostParams& cost,
                            double xbar0, double z);

/// Mean field operator M = sum_s n_s T^s(Delta(xbar)). The input must stay
/// within [z, xbar0] (up to a 1e-9 float slack, which is clipped).
Trajectory m_op(const Trajectory& x_bar, const Scenario& scenario, const GFunction& g);

/// Damped Picard iteration x <- (1-theta) x + theta M(x) until
/// ||x - M(x)||_k < tol or max_iter; returns the best iterate seen.
MeanFieldSolution picard_iterate(const Trajectory& x_init, const Scenario& scenario,
                                 const GFunction& g, NormK k, double tol,
                                 std::size_t max_iter, double damping);

/// Closed-form Lipschitz factor R_k of M in the weighted norm (the bound
/// is lambda * R_k with lambda the Lipschitz constant of g).
double lipschitz_bound_rk(const Scenario& scenario, NormK k);

/// Growth constants of the pressure/Riccati analysis: q_t <= k0 t,
/// pi_t <= k1 t + k2, and ||pi - pi'||_k <= k3 ||xbar - xbar'||_k.
struct GrowthBounds {
    double k0 = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
};

GrowthBounds growth_bounds(const GFunction& g, const Scenario& scenario, NormK k);

/// Uniform bound on |d/dt M(xbar)| over all xbar in the candidate set,
/// assembled from the same closed-form constants used in the analysis.
double m_derivative_bound(const GFunction& g, const Scenario& scenario);

/// One row of the sup-norm discontinuity demonstration.
struct DiscontinuityRow {
    int n = 0;
    double x_gap_sup = 0.0;       ///< ||xbar^(n) - y||_inf
    double m_gap_sup = 0.0;       ///< ||M(xbar^(n)) - M(y)||_inf
    double m_terminal = 0.0;      ///< M(xbar^(n))(T_max(n))
    double horizon = 0.0;
};

struct DiscontinuityReport {
    std::vector<DiscontinuityRow> rows;
    double m_of_y_error = 0.0;    ///< ||M(y) - xbar0||_inf
};

/// Reproduces the failure of sup-norm continuity on the textbook
/// counterexample g(x)=x, xbar0=1, y=0, z=-1: the inputs converge to y
/// while the responses drift to z on per-n horizons 2^n * t0_base.
DiscontinuityReport sup_norm_discontinuity_demo(int n_max);

}  // namespace ctt
