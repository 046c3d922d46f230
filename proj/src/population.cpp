#include "ctt/population.hpp"

#include <cmath>
#include <random>

#include "ctt/errors.hpp"

namespace ctt {

HeaterType derive_rates(double C_a, double U_a, double x_out, double sigma) {
    if (!(C_a > 0.0)) throw InvalidParameterError("thermal mass C_a must be positive");
    if (!(U_a > 0.0)) throw InvalidParameterError("conductance U_a must be positive");
    if (sigma < 0.0) throw InvalidParameterError("volatility sigma must be nonnegative");
    return HeaterType{U_a / C_a, 1.0 / C_a, x_out, sigma};
}

double TypeDistribution::min_a() const {
    double m = types.front().a;
    for (const auto& t : types) m = std::min(m, t.a);
    return m;
}

void TypeDistribution::validate() const {
    if (types.empty() || types.size() != weights.size())
        throw InvalidParameterError("type list and weight list must be nonempty and equal-sized");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw InvalidParameterError("every type weight must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidParameterError("type weights must sum to 1");
    for (const auto& t : types) {
        if (!(t.a > 0.0) || !(t.b > 0.0) || t.sigma < 0.0)
            throw InvalidParameterError("heater type requires a > 0, b > 0, sigma >= 0");
    }
}

GFunction GFunction::linear(double mu) {
    if (!(mu > 0.0)) throw InvalidParameterError("pressure gain mu must be positive");
    GFunction g;
    g.kind = Kind::Linear;
    g.mu = mu;
    return g;
}

GFunction GFunction::exp_clamped(double mu, double beta, double lo, double hi) {
    if (!(mu > 0.0)) throw InvalidParameterError("pressure gain mu must be positive");
    if (!(beta > 0.0)) throw InvalidParameterError("exponent beta must be positive");
    if (!(lo <= hi)) throw InvalidParameterError("clamp interval is empty");
    GFunction g;
    g.kind = Kind::ExpClamped;
    g.mu = mu;
    g.beta = beta;
    g.lo = lo;
    g.hi = hi;
    return g;
}

GFunction GFunction::with_mu(double new_mu) const {
    GFunction g = *this;
    if (!(new_mu > 0.0)) throw InvalidParameterError("pressure gain mu must be positive");
    g.mu = new_mu;
    return g;
}

double GFunction::lipschitz() const {
    if (kind == Kind::Linear) return mu;
    return mu * beta * std::exp(beta * hi);
}

double GFunction::max_abs_on(double radius) const {
    const double a = std::abs(g_eval(*this, -radius));
    const double b = std::abs(g_eval(*this, radius));
    return std::max(a, b);  // g is nondecreasing, extremes sit at the ends
}

double g_eval(const GFunction& g, double x) {
    if (g.kind == GFunction::Kind::Linear) return g.mu * x;
    const double xc = std::min(std::max(x, g.lo), g.hi);
    return g.mu * std::expm1(g.beta * xc);
}

double u_free(const Agent& agent, const HeaterType& type) {
    return type.a * (agent.x0 - type.x_out) / type.b;
}

double drift(double x, double u, const Agent& agent, const HeaterType& type) {
    return -type.a * (x - type.x_out) + type.b * (u + u_free(agent, type));
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 on seed + (stream+1) * golden gamma
    std::uint64_t x = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::vector<Agent> sample_population(const TypeDistribution& dist,
                                     const InitialDistribution& init,
                                     std::size_t n, std::uint64_t seed) {
    dist.validate();
    if (n == 0) throw InvalidParameterError("population size must be at least 1");
    if (init.std_dev < 0.0) throw InvalidParameterError("initial std must be nonnegative");

    std::vector<Agent> agents(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::mt19937_64 rng(split_seed(seed, i));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double u = unif(rng);
        std::size_t idx = 0;
        double acc = 0.0;
        for (std::size_t s = 0; s < dist.count(); ++s) {
            acc += dist.weights[s];
            if (u <= acc) { idx = s; break; }
            idx = s;
        }
        double x0 = init.mean;
        if (init.std_dev > 0.0) {
            std::normal_distribution<double> gauss(init.mean, init.std_dev);
            x0 = gauss(rng);
        }
        agents[i] = Agent{idx, x0, x0};
    }
    return agents;
}

}  // namespace ctt
