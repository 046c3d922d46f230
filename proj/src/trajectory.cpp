#include "ctt/trajectory.hpp"

#include <algorithm>
#include <cassert>

namespace ctt {

Trajectory running_integral(const Trajectory& x) {
    Trajectory out(x.grid);
    double acc = 0.0;
    out[0] = 0.0;
    const double half_dt = 0.5 * x.grid.dt;
    for (std::size_t i = 1; i < x.size(); ++i) {
        acc += half_dt * (x[i - 1] + x[i]);
        out[i] = acc;
    }
    return out;
}

double trapezoid(const Trajectory& x) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double acc = 0.5 * (x[0] + x[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += x[i];
    return acc * x.grid.dt;
}

double sup_norm(const Trajectory& x) {
    double m = 0.0;
    for (double v : x.values) m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const Trajectory& x) {
    Trajectory sq(x.grid);
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];
    return std::sqrt(trapezoid(sq));
}

double sup_diff(const Trajectory& x, const Trajectory& y) {
    assert(x.same_grid(y));
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

Trajectory lin_comb(double c1, const Trajectory& x, double c2, const Trajectory& y) {
    assert(x.same_grid(y));
    Trajectory out(x.grid);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = c1 * x[i] + c2 * y[i];
    return out;
}

double max_derivative(const Trajectory& x) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        m = std::max(m, std::abs(x[i + 1] - x[i]) / x.grid.dt);
    return m;
}

}  // namespace ctt
