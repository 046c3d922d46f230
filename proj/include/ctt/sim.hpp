#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ctt/lqg.hpp"
#include "ctt/mean_field.hpp"
#include "ctt/scenario.hpp"

namespace ctt {

/// Per-type mean field control law with the offset stored per unit of
/// (x0 - z), so one solve serves every agent of the type.
struct MfLaw {
    Trajectory pi;
    Trajectory alpha_unit;
    double z = 0.0;
    double b = 1.0;
    double r = 1.0;

    double control(double x, double x0, std::size_t idx) const {
        const double alpha = alpha_unit[idx] * (x0 - z);
        return -(b / r) * (pi[idx] * x + alpha - pi[idx] * z);
    }

    /// Concrete affine law for one agent.
    ControlLaw for_anchor(double x0) const;
};

/// Solve the per-type Riccati/offset pair for a given pressure trajectory.
std::vector<MfLaw> build_mf_laws(const Scenario& scenario, const Trajectory& q_y);

/// Monte Carlo run settings. The SDE step must be an integer multiple of
/// the control-law grid step (laws are sampled with that stride).
struct SimOptions {
    double dt = 1e-3;
    double t_end = 3.0;
    std::uint64_t seed = 1;
    std::size_t sample_paths = 0;
    std::optional<double> sigma_override;
    bool parallel = true;
};

struct SimResult {
    Trajectory eat;                       ///< empirical average temperature
    Trajectory q_realized;                ///< pressure integral of the EAT (when g given)
    std::vector<double> excursion;        ///< per agent max_t |x_t - x0|
    std::vector<double> terminal_x;       ///< per agent x(T)
    std::vector<double> cost;             ///< per agent discounted cost
    std::vector<double> energy_kwh;       ///< per agent signed integral of u dt
    std::vector<std::vector<double>> path_x;  ///< first sample_paths agents
    std::vector<std::vector<double>> path_u;
    std::size_t comfort_violations = 0;   ///< (agent, step) samples outside [l, h]
    double switch_time = -1.0;            ///< robustness runs only
    bool switched = false;
};

/// Population under the mean field laws; Euler-Maruyama with one noise
/// stream per agent keyed on (seed, agent index), so results do not depend
/// on the parallel schedule.
SimResult simulate_population(const std::vector<Agent>& agents, const Scenario& scenario,
                              const std::vector<MfLaw>& laws, const GFunction& g,
                              const SimOptions& opts);

/// Serial reference implementation; bitwise-identical to the parallel run.
SimResult simulate_population_serial(const std::vector<Agent>& agents,
                                     const Scenario& scenario,
                                     const std::vector<MfLaw>& laws, const GFunction& g,
                                     const SimOptions& opts);

/// Same population driven by the plain per-device LQG trackers.
SimResult lqg_baseline(const std::vector<Agent>& agents, const Scenario& scenario,
                       const SimOptions& opts);

/// Controller switching under model mismatch: the mean field laws are
/// computed for `assumed`, dynamics run with the true ambient temperature,
/// and `agents` carry the true initial temperatures. Once the EAT plateaus
/// (|EAT(t) - EAT(t-window)| < threshold) every device switches to the
/// stationary law rebuilt each step from the measured pressure integral.
struct RobustnessOptions {
    double true_initial_mean = 21.5;
    double true_x_out = -11.0;
    double window = 0.25;
    double threshold = 0.02;
};

SimResult robustness_sim(const std::vector<Agent>& agents, const Scenario& assumed,
                         const std::vector<MfLaw>& assumed_laws, const GFunction& g,
                         const RobustnessOptions& robust, const SimOptions& opts);

/// Unilateral-deviation statistics: for `probe_count` agents, re-solve the
/// exact best response against the realized pressure trajectory (others
/// held fixed) and report the relative cost improvement.
struct NashGapStats {
    double mean_rel = 0.0;
    double max_rel = 0.0;
    std::vector<double> per_probe;
};

NashGapStats epsilon_nash_gap(const std::vector<Agent>& agents, const Scenario& scenario,
                              const std::vector<MfLaw>& laws, const GFunction& g,
                              const SimOptions& opts, std::size_t probe_count);

/// Aggregate excursion/spread/energy summary of a finished run.
struct ExcursionSummary {
    double mean_excursion = 0.0;
    double terminal_spread = 0.0;
    double total_energy_kwh = 0.0;
    double mean_cost = 0.0;
};

ExcursionSummary excursion_stats(const SimResult& result);

}  // namespace ctt
