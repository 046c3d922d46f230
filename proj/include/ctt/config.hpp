#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctt/near_fixed_point.hpp"
#include "ctt/scenario.hpp"
#include "ctt/sim.hpp"

namespace ctt {

/// One heater class as written in a config file (physical parameters).
struct TypeConfig {
    double c_a = 0.57;
    double u_a = 0.27;
    double x_out = -10.0;
    double sigma = 0.15;
    double weight = 1.0;
};

struct SegmentConfig {
    double y = 20.0;
    double duration = 1.5;
};

/// Declarative description of one scenario: population, targets, costs,
/// pressure function, grids and run settings.
struct ScenarioConfig {
    std::vector<TypeConfig> population;
    double initial_mean = 21.0;
    double initial_std = 1.0;
    double comfort_l = 17.0;
    double comfort_h = 25.0;
    double target_y = 20.0;
    bool release = true;  // direction: release -> z = l, absorb -> z = h
    CostParams costs;
    GFunction::Kind g_kind = GFunction::Kind::Linear;
    std::optional<double> g_mu;  // empty means "auto" (run the gain search)
    double g_beta = 3.0;
    TimeGrid grid{1e-3, 6000};
    std::size_t sim_n = 200;
    double sim_dt = 1e-3;
    double sim_t = 3.0;
    std::uint64_t seed = 1;
    std::size_t sample_paths = 10;
    Algo1Params algo1;
    RobustnessOptions robustness;
    std::vector<SegmentConfig> segments;

    Scenario scenario() const;
    SimOptions sim_options() const;

    /// All invariant violations, collected (empty when valid).
    std::vector<std::string> violations() const;
};

/// Parse and validate a config file. Throws InvalidParameterError with a
/// line/column position on malformed input, or with the collected list of
/// invariant violations.
ScenarioConfig load_config(const std::string& path);

/// Parse from an in-memory JSON document (used by load_config and tests).
ScenarioConfig parse_config(const std::string& text);

std::string serialize_config(const ScenarioConfig& cfg);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace ctt
