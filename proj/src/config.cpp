#include "polar/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace polar {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': unparsable value '" + value + "'");
    }
    if (used != value.size() || !std::isfinite(v))
        throw ConfigError("config key '" + key + "': unparsable value '" + value + "'");
    return v;
}

double parse_in_range(const std::string& key, const std::string& value, double lo, double hi) {
    const double v = parse_double(key, value);
    if (v < lo || v > hi)
        throw ConfigError("config key '" + key + "': value " + value + " out of range [" +
                          std::to_string(lo) + "," + std::to_string(hi) + "]");
    return v;
}

long long parse_int(const std::string& key, const std::string& value, long long lo,
                    long long hi) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': unparsable value '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("config key '" + key + "': unparsable value '" + value + "'");
    if (v < lo || v > hi)
        throw ConfigError("config key '" + key + "': value " + value + " out of range");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': unparsable value '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("config key '" + key + "': unparsable value '" + value + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_key(RunConfig& c, const std::string& key, const std::string& value) {
    // Interaction game (uppercase aliases for the benefit parameters).
    if (key == "B_i") c.params.b_in = parse_in_range(key, value, 1e-12, 1e12);
    else if (key == "B_o") c.params.b_out = parse_in_range(key, value, 1e-12, 1e12);
    else if (key == "q_i") c.params.q_in = parse_in_range(key, value, 0.0, 1.0);
    else if (key == "q_o") c.params.q_out = parse_in_range(key, value, 0.0, 1.0);
    else if (key == "n") c.params.n = static_cast<int>(parse_int(key, value, 1, 100000));
    // Benefit curve.
    else if (key == "h") c.curve.steepness = parse_in_range(key, value, 1e-12, 1e12);
    else if (key == "r") c.curve.slope = parse_in_range(key, value, 0.0, 1e12);
    else if (key == "beta") {
        c.curve.curvature_exp = parse_double(key, value);
    } else if (key == "curve") {
        if (value == "sigmoid_linear") c.curve.kind = CurveKind::SigmoidLinear;
        else if (value == "power_curvature") c.curve.kind = CurveKind::PowerCurvature;
        else throw ConfigError("config key 'curve': unknown value '" + value + "'");
    }
    // Model selection.
    else if (key == "model") {
        if (value == "fixed") c.model = Model::Fixed;
        else if (value == "social") c.model = Model::Social;
        else throw ConfigError("config key 'model': unknown value '" + value + "'");
        c.sim.model = c.model;
    }
    // Simulation.
    else if (key == "N") c.sim.population_size = static_cast<int>(parse_int(key, value, 2, 100000000));
    else if (key == "sigma") c.sim.selection_strength = parse_in_range(key, value, 0.0, 1e12);
    else if (key == "mu") c.sim.mutation_rate = parse_in_range(key, value, 0.0, 1.0);
    else if (key == "delta") c.sim.mutation_delta = parse_in_range(key, value, 1e-12, 1.0);
    else if (key == "mutation_kernel") {
        if (value == "global_uniform") c.sim.mutation_kernel = MutationKernelKind::GlobalUniform;
        else if (value == "local_step") c.sim.mutation_kernel = MutationKernelKind::LocalStep;
        else throw ConfigError("config key 'mutation_kernel': unknown value '" + value + "'");
    } else if (key == "payoff_mode") {
        if (value == "realized") c.sim.payoff_mode = PayoffMode::Realized;
        else if (value == "expected") c.sim.payoff_mode = PayoffMode::Expected;
        else throw ConfigError("config key 'payoff_mode': unknown value '" + value + "'");
    } else if (key == "group_mode") {
        if (value == "fixed_split") c.sim.group_mode = GroupMode::FixedSplit;
        else if (value == "reshuffle") c.sim.group_mode = GroupMode::Reshuffle;
        else throw ConfigError("config key 'group_mode': unknown value '" + value + "'");
    } else if (key == "schedule") {
        if (value == "constant") c.sim.schedule.kind = EnvironmentSchedule::Kind::Constant;
        else if (value == "sinusoid") c.sim.schedule.kind = EnvironmentSchedule::Kind::Sinusoid;
        else throw ConfigError("config key 'schedule': unknown value '" + value + "'");
    } else if (key == "theta") {
        c.theta = parse_double(key, value);
        c.sim.schedule.theta = c.theta;
    } else if (key == "amplitude") c.sim.schedule.amplitude = parse_double(key, value);
    else if (key == "period_events") c.sim.schedule.period = parse_in_range(key, value, 1.0, 1e15);
    else if (key == "phase") c.sim.schedule.phase = parse_double(key, value);
    else if (key == "total_events") c.sim.total_events = parse_u64(key, value);
    else if (key == "checkpoints") c.sim.checkpoints = static_cast<int>(parse_int(key, value, 1, 100000000));
    else if (key == "ensemble_size") c.sim.ensemble_size = static_cast<int>(parse_int(key, value, 1, 100000000));
    else if (key == "seed") c.sim.seed = parse_u64(key, value);
    else if (key == "initial") {
        if (value == "uniform_at") c.init.kind = Init::Kind::UniformAt;
        else if (value == "random_uniform") c.init.kind = Init::Kind::RandomUniform;
        else throw ConfigError("config key 'initial': unknown value '" + value + "'");
    } else if (key == "initial_p") c.init.p0 = parse_in_range(key, value, 0.0, 1.0);
    // Analysis grids.
    else if (key == "theta_min") c.theta_min = parse_double(key, value);
    else if (key == "theta_max") c.theta_max = parse_double(key, value);
    else if (key == "theta_steps") c.theta_steps = static_cast<int>(parse_int(key, value, 1, 100000000));
    else if (key == "p_min") c.p_min = parse_in_range(key, value, 0.0, 1.0);
    else if (key == "p_max") c.p_max = parse_in_range(key, value, 0.0, 1.0);
    else if (key == "p_steps") c.p_steps = static_cast<int>(parse_int(key, value, 1, 100000000));
    else if (key == "resolution") c.resolution = static_cast<int>(parse_int(key, value, 2, 100000000));
    else if (key == "sweep_param") c.sweep_param = value;
    else if (key == "sweep_min") c.sweep_min = parse_double(key, value);
    else if (key == "sweep_max") c.sweep_max = parse_double(key, value);
    else if (key == "sweep_steps") c.sweep_steps = static_cast<int>(parse_int(key, value, 1, 100000000));
    else if (key == "sweep_mode") {
        if (value != "optimal" && value != "stable_set")
            throw ConfigError("config key 'sweep_mode': unknown value '" + value + "'");
        c.sweep_mode = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
    c.raw[key] = value;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            apply_config_key(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

}  // namespace polar
