#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ctt {

/// Uniform time grid on [0, dt*n_steps]. Times are in hours; every
/// trajectory taking part in one computation shares one grid.
struct TimeGrid {
    double dt = 1e-3;
    std::size_t n_steps = 6000;

    double t(std::size_t i) const { return dt * static_cast<double>(i); }
    double t_max() const { return t(n_steps); }
    std::size_t size() const { return n_steps + 1; }

    bool operator==(const TimeGrid&) const = default;
};

/// Uniformly sampled real-valued function of time; values[i] is the value
/// at t = i*dt. The universal currency of the solvers in this library.
struct Trajectory {
    TimeGrid grid;
    std::vector<double> values;

    Trajectory() = default;
    explicit Trajectory(TimeGrid g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    double back() const { return values.back(); }

    bool same_grid(const Trajectory& other) const { return grid == other.grid; }
};

/// Cumulative trapezoidal integral; result[0] = 0.
Trajectory running_integral(const Trajectory& x);

/// Trapezoidal integral over the whole grid.
double trapezoid(const Trajectory& x);

double sup_norm(const Trajectory& x);
double l2_norm(const Trajectory& x);
double sup_diff(const Trajectory& x, const Trajectory& y);

/// c1*x + c2*y on a shared grid.
Trajectory lin_comb(double c1, const Trajectory& x, double c2, const Trajectory& y);

/// Largest absolute one-sided difference quotient |x[i+1]-x[i]|/dt.
double max_derivative(const Trajectory& x);

}  // namespace ctt
