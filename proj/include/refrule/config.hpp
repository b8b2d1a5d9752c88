#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "refrule/acoe.hpp"
#include "refrule/cost.hpp"
#include "refrule/dynamics.hpp"
#include "refrule/policy.hpp"
#include "refrule/simulator.hpp"

namespace refrule {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AnchorConfig {
    long n_samples = 500000;
    double tol = 1e-6;
    std::uint64_t seed = 42;
};

// Everything a run can be configured with. Sections a file omits keep these
// defaults (the dynamics default to the canonical uniform benchmark).
struct LoadedConfig {
    DynamicsSpec dynamics = uniform_benchmark();
    Policy policy = StatusQuo{};
    CostFn cost = Quadratic{};
    SimConfig sim;
    AcoeConfig acoe;
    Interval acoe_state_range{0.0, 1.0};
    AnchorConfig anchor;
};

// Parses an INI-style file with sections [dynamics], [policy], [cost],
// [sim], [acoe], [anchor]. '#' starts a comment. Unknown sections or keys
// are hard errors; every message carries the line number.
LoadedConfig load_config(const std::string& path);

// Value syntaxes, shared by config files and command-line flags.
ScalarDist parse_scalar_dist(const std::string& text);
BaseIntervalDist parse_base_dist(const std::string& text);
Policy parse_policy(const std::string& text);
CostFn parse_cost(const std::string& text);

// Two numeric columns (grid, target), optional single header line.
TabulatedReference load_table_csv(const std::string& path);

}  // namespace refrule
