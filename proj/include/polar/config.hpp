#pragma once

#include <map>
#include <string>

#include "polar/equilibrium.hpp"
#include "polar/simulation.hpp"

namespace polar {

// Fully resolved run parameters: interaction game, benefit curve, simulation
// settings, and grid settings for the analysis commands. Parsed from a flat
// key=value file ('#' comments); unknown keys are hard errors.
struct RunConfig {
    InteractionParams params;
    BenefitCurve curve;
    SimConfig sim;
    Model model = Model::Fixed;

    // Analysis grids.
    double theta_min = -1.0, theta_max = 1.0;
    int theta_steps = 201;
    double p_min = 0.0, p_max = 1.0;
    int p_steps = 201;
    int resolution = 201;      // PIP / optimal-strategy grid
    double theta = 0.0;        // single-theta commands
    std::string sweep_param = "q_out";
    double sweep_min = 0.5, sweep_max = 1.0;
    int sweep_steps = 101;
    std::string sweep_mode = "optimal";  // or "stable_set"

    Init init;

    // Every key actually set, in file order, for the manifest.
    std::map<std::string, std::string> raw;
};

// Thrown on unknown keys, unparsable or out-of-range values; the message
// names the offending key (and line).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunConfig load_config(const std::string& path);

// Applies one key=value pair; load_config and flag overrides share this path.
void apply_config_key(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace polar
