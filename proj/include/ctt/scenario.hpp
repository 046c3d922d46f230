#pragma once

#include "ctt/lqg.hpp"
#include "ctt/population.hpp"
#include "ctt/trajectory.hpp"

namespace ctt {

/// Everything the mean field operators need besides the pressure function:
/// heater mixture, initial distribution, comfort band with targets, cost
/// weights and the shared time grid.
struct Scenario {
    TypeDistribution types;
    InitialDistribution initial;
    ComfortBand band;
    CostParams costs;
    TimeGrid grid;

    double xbar0() const { return initial.mean; }
    double y() const { return band.y; }
    double z() const { return band.z; }

    /// Candidate mean trajectories live between z and xbar0 (in either order).
    double g_low() const { return band.z < initial.mean ? band.z : initial.mean; }
    double g_high() const { return band.z < initial.mean ? initial.mean : band.z; }

    /// Pressure function of the requested kind with clamp interval
    /// [z - y, xbar0 - y] fixed from this scenario.
    GFunction make_g(GFunction::Kind kind, double mu, double beta) const;

    void validate() const;
};

}  // namespace ctt
