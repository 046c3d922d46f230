#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace ctt {

/// Physical parameters of one heater class. `a` is the thermal decay rate
/// (1/h), `b` the control gain (degC per kWh), `x_out` the ambient
/// temperature (degC) and `sigma` the volatility (degC per sqrt hour).
struct HeaterType {
    double a = 1.0;
    double b = 1.0;
    double x_out = 0.0;
    double sigma = 0.0;
};

/// Build a HeaterType from thermal mass C_a (kWh/degC) and wall
/// conductance U_a (kW/degC): a = U_a/C_a and b = 1/C_a exactly.
HeaterType derive_rates(double C_a, double U_a, double x_out, double sigma);

/// Finite mixture of heater classes with positive weights summing to 1.
struct TypeDistribution {
    std::vector<HeaterType> types;
    std::vector<double> weights;

    std::size_t count() const { return types.size(); }
    double min_a() const;
    void validate() const;
};

/// Gaussian distribution of initial temperatures.
struct InitialDistribution {
    double mean = 21.0;
    double std_dev = 1.0;
};

/// Comfort band [l, h] with the active boundary target z (one of l, h)
/// and the mean target y. Energy release: z = l <= y <= mean_0 <= h;
/// energy absorption mirrored.
struct ComfortBand {
    double l = 17.0;
    double h = 25.0;
    double z = 17.0;
    double y = 20.0;
};

/// Pressure function g. Linear: g(x) = mu*x. ExpClamped: mu*(e^{beta x}-1)
/// on [lo, hi], frozen at the boundary values outside, where lo = z - y and
/// hi = mean_0 - y are fixed once per scenario.
struct GFunction {
    enum class Kind { Linear, ExpClamped };

    Kind kind = Kind::Linear;
    double mu = 1.0;
    double beta = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    static GFunction linear(double mu);
    static GFunction exp_clamped(double mu, double beta, double lo, double hi);

    /// Same shape with a different gain.
    GFunction with_mu(double new_mu) const;

    /// Lipschitz constant on the clamp interval (and hence globally):
    /// mu for linear, mu*beta*e^{beta*hi} for the clamped exponential.
    double lipschitz() const;

    /// max |g(x)| over |x| <= radius.
    double max_abs_on(double radius) const;
};

double g_eval(const GFunction& g, double x);

/// One simulated heater.
struct Agent {
    std::size_t type_index = 0;
    double x0 = 0.0;
    double x = 0.0;
};

/// Feedforward power (kW) that exactly offsets heat loss at the agent's
/// initial temperature; excluded from the control penalty.
double u_free(const Agent& agent, const HeaterType& type);

/// Temperature drift (degC/h) under deviation control u on top of u_free.
double drift(double x, double u, const Agent& agent, const HeaterType& type);

/// Deterministic i.i.d. sampling of a finite population: types from the
/// weights, x0 ~ Gaussian(mean, std^2), one stream per agent index.
std::vector<Agent> sample_population(const TypeDistribution& dist,
                                     const InitialDistribution& init,
                                     std::size_t n, std::uint64_t seed);

/// Documented sub-seed splitting function: all randomness flows from one
/// seed, streams are derived as splitmix64 applied to seed + stream id.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ctt
