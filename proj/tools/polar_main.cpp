#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polar/config.hpp"
#include "polar/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polar;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string model_name(Model m) { return m == Model::Fixed ? "fixed" : "social"; }

json resolved_parameters(const RunConfig& c) {
    json j;
    j["B_i"] = c.params.b_in;
    j["B_o"] = c.params.b_out;
    j["q_i"] = c.params.q_in;
    j["q_o"] = c.params.q_out;
    j["n"] = c.params.n;
    j["curve"] = c.curve.kind == CurveKind::SigmoidLinear ? "sigmoid_linear" : "power_curvature";
    j["h"] = c.curve.steepness;
    j["r"] = c.curve.slope;
    j["beta"] = c.curve.curvature_exp;
    j["model"] = model_name(c.model);
    j["N"] = c.sim.population_size;
    j["sigma"] = c.sim.selection_strength;
    j["mu"] = c.sim.mutation_rate;
    j["delta"] = c.sim.mutation_delta;
    j["mutation_kernel"] = c.sim.mutation_kernel == MutationKernelKind::GlobalUniform
                               ? "global_uniform"
                               : "local_step";
    j["payoff_mode"] = c.sim.payoff_mode == PayoffMode::Realized ? "realized" : "expected";
    j["group_mode"] =
        c.sim.group_mode == GroupMode::FixedSplit ? "fixed_split" : "reshuffle";
    j["schedule"] = c.sim.schedule.kind == EnvironmentSchedule::Kind::Constant ? "constant"
                                                                               : "sinusoid";
    j["theta"] = c.theta;
    j["amplitude"] = c.sim.schedule.amplitude;
    j["period_events"] = c.sim.schedule.period;
    j["phase"] = c.sim.schedule.phase;
    j["total_events"] = c.sim.total_events;
    j["checkpoints"] = c.sim.checkpoints;
    j["ensemble_size"] = c.sim.ensemble_size;
    j["seed"] = c.sim.seed;
    j["initial"] = c.init.kind == Init::Kind::UniformAt ? "uniform_at" : "random_uniform";
    j["initial_p"] = c.init.p0;
    j["theta_min"] = c.theta_min;
    j["theta_max"] = c.theta_max;
    j["theta_steps"] = c.theta_steps;
    j["p_min"] = c.p_min;
    j["p_max"] = c.p_max;
    j["p_steps"] = c.p_steps;
    j["resolution"] = c.resolution;
    j["sweep_param"] = c.sweep_param;
    j["sweep_min"] = c.sweep_min;
    j["sweep_max"] = c.sweep_max;
    j["sweep_steps"] = c.sweep_steps;
    j["sweep_mode"] = c.sweep_mode;
    return j;
}

struct CommonFlags {
    std::optional<std::string> config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "flat key=value config file");
    cmd->add_option("--out", flags.out_dir, "output directory")->required();
    cmd->add_option("--seed", flags.seed, "64-bit RNG seed (overrides config)");
    cmd->add_option("--threads", flags.threads,
                    "worker threads (0 = number of processors)");
}

RunConfig resolve(const CommonFlags& flags) {
    RunConfig config = flags.config_path ? load_config(*flags.config_path) : RunConfig{};
    if (flags.seed) config.sim.seed = *flags.seed;
    config.params.validate();
    return config;
}

void write_manifest(const fs::path& out_dir, const std::string& command, const RunConfig& config,
                    const std::vector<std::string>& outputs, double duration_seconds,
                    int threads) {
    json manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["rng"] = SplitMix64::kName;
    manifest["seed"] = config.sim.seed;
    manifest["threads"] = threads;
    manifest["parameters"] = resolved_parameters(config);
    manifest["outputs"] = outputs;
    manifest["duration_seconds"] = duration_seconds;
    std::ofstream out(out_dir / "manifest.json");
    out << manifest.dump(2) << '\n';
}

// Parses "min:max:steps".
void parse_grid_spec(const std::string& spec, double& lo, double& hi, int& steps) {
    double a, b;
    int s;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &a, &b, &s) != 3 || s < 1)
        throw CLI::ValidationError("grid spec must be min:max:steps, got '" + spec + "'");
    lo = a;
    hi = b;
    steps = s;
}

int run_optimize(const CommonFlags& flags, const std::string& theta_range,
                 const std::string& param_sweep, const std::string& mode_flag) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig config = resolve(flags);
    if (!theta_range.empty())
        parse_grid_spec(theta_range, config.theta_min, config.theta_max, config.theta_steps);
    if (!param_sweep.empty()) {
        const auto colon = param_sweep.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--param-sweep must be name:min:max:steps");
        config.sweep_param = param_sweep.substr(0, colon);
        parse_grid_spec(param_sweep.substr(colon + 1), config.sweep_min, config.sweep_max,
                        config.sweep_steps);
    }
    if (!mode_flag.empty()) config.sweep_mode = mode_flag;
    if (config.theta_steps < 1 || config.theta_min > config.theta_max)
        throw CLI::ValidationError("empty theta range");

    const auto theta_grid = linspace(config.theta_min, config.theta_max, config.theta_steps);
    const auto param_grid = linspace(config.sweep_min, config.sweep_max, config.sweep_steps);
    const SweepMode mode =
        config.sweep_mode == "optimal" ? SweepMode::Optimal : SweepMode::StableSet;
    const SweepResult result = sweep(config.sweep_param, param_grid, theta_grid, config.model,
                                     config.curve, config.params, mode, flags.threads);

    fs::create_directories(flags.out_dir);
    CsvWriter csv(flags.out_dir + "/data.csv", {"theta", "swept_param_value", "p_star"});
    for (std::size_t vi = 0; vi < param_grid.size(); ++vi) {
        for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
            for (double p_star : result.at(static_cast<int>(vi), static_cast<int>(ti))) {
                csv.begin_row();
                csv.field(theta_grid[ti]);
                csv.field(param_grid[vi]);
                csv.field(p_star);
                csv.end_row();
            }
        }
    }
    json summary;
    summary["sweep_param"] = config.sweep_param;
    summary["mode"] = config.sweep_mode;
    summary["clamped_negative_kernel"] = result.clamped_negative_kernel;
    std::ofstream(flags.out_dir + "/summary.json") << summary.dump(2) << '\n';

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(flags.out_dir, "optimize", config, {"data.csv", "summary.json"}, seconds,
                   flags.threads);
    return 0;
}

int run_pip(const CommonFlags& flags, std::optional<std::string> model_flag,
            std::optional<double> theta_flag, std::optional<int> resolution_flag) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig config = resolve(flags);
    if (model_flag) {
        if (*model_flag == "fixed") config.model = Model::Fixed;
        else if (*model_flag == "social") config.model = Model::Social;
        else throw CLI::ValidationError("unknown model '" + *model_flag + "'");
    }
    if (theta_flag) config.theta = *theta_flag;
    if (resolution_flag) config.resolution = *resolution_flag;

    const PipGrid grid = pip(config.theta, config.model, config.curve, config.params,
                             config.resolution, flags.threads);
    const auto stable =
        attracting_strategies(config.theta, config.model, config.curve, config.params);

    fs::create_directories(flags.out_dir);
    CsvWriter csv(flags.out_dir + "/data.csv", {"p_mutant", "p_resident", "sign"});
    for (std::size_t i = 0; i < grid.mutant_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.resident_axis.size(); ++j) {
            csv.begin_row();
            csv.field(grid.mutant_axis[i]);
            csv.field(grid.resident_axis[j]);
            csv.field(grid.at(static_cast<int>(i), static_cast<int>(j)));
            csv.end_row();
        }
    }
    json summary;
    summary["model"] = model_name(config.model);
    summary["theta"] = config.theta;
    summary["stable_strategies"] = stable;
    std::ofstream(flags.out_dir + "/summary.json") << summary.dump(2) << '\n';

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(flags.out_dir, "pip", config, {"data.csv", "summary.json"}, seconds,
                   flags.threads);
    return 0;
}

int run_field(const CommonFlags& flags, std::optional<std::string> model_flag,
              const std::string& theta_grid_spec, const std::string& p_grid_spec) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig config = resolve(flags);
    if (model_flag) {
        if (*model_flag == "fixed") config.model = Model::Fixed;
        else if (*model_flag == "social") config.model = Model::Social;
        else throw CLI::ValidationError("unknown model '" + *model_flag + "'");
    }
    if (!theta_grid_spec.empty())
        parse_grid_spec(theta_grid_spec, config.theta_min, config.theta_max,
                        config.theta_steps);
    if (!p_grid_spec.empty())
        parse_grid_spec(p_grid_spec, config.p_min, config.p_max, config.p_steps);

    const auto theta_grid = linspace(config.theta_min, config.theta_max, config.theta_steps);
    const auto p_grid = linspace(config.p_min, config.p_max, config.p_steps);
    const GradientField field = gradient_field(theta_grid, p_grid, config.model, config.curve,
                                               config.params, flags.threads);

    fs::create_directories(flags.out_dir);
    CsvWriter csv(flags.out_dir + "/data.csv", {"theta", "p", "gradient"});
    for (const auto& sample : field.samples) {
        csv.begin_row();
        csv.field(sample.theta);
        csv.field(sample.p);
        csv.field(sample.value);
        csv.end_row();
    }
    json summary;
    summary["model"] = model_name(config.model);
    summary["theta_steps"] = config.theta_steps;
    summary["p_steps"] = config.p_steps;
    std::ofstream(flags.out_dir + "/summary.json") << summary.dump(2) << '\n';

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(flags.out_dir, "field", config, {"data.csv", "summary.json"}, seconds,
                   flags.threads);
    return 0;
}

int run_simulate(const CommonFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig config = resolve(flags);
    config.sim.model = config.model;
    config.sim.validate();

    const EnsembleStats stats = run_ensemble(config.sim, config.curve, config.params,
                                             config.init, config.sim.seed, flags.threads);

    fs::create_directories(flags.out_dir);
    CsvWriter csv(flags.out_dir + "/data.csv", {"event_index", "theta", "mean_p", "std_p"});
    for (std::size_t i = 0; i < stats.event_index.size(); ++i) {
        csv.begin_row();
        csv.field(stats.event_index[i]);
        csv.field(stats.theta[i]);
        csv.field(stats.mean_p[i]);
        csv.field(stats.std_p[i]);
        csv.end_row();
    }
    json summary;
    summary["model"] = model_name(config.model);
    summary["final_mean_p"] = stats.mean_p.empty() ? 0.0 : stats.mean_p.back();
    summary["checkpoints"] = stats.mean_p.size();
    std::ofstream(flags.out_dir + "/summary.json") << summary.dump(2) << '\n';

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(flags.out_dir, "simulate", config, {"data.csv", "summary.json"}, seconds,
                   flags.threads);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polarization dynamics: exact fitness analysis and individual-based simulation"};
    app.require_subcommand(1);

    CommonFlags opt_flags, pip_flags, field_flags, sim_flags;
    std::string theta_range, param_sweep, opt_mode;
    std::optional<std::string> pip_model, field_model;
    std::optional<double> pip_theta;
    std::optional<int> pip_resolution;
    std::string field_theta_grid, field_p_grid;

    auto* optimize = app.add_subcommand(
        "optimize", "optimal / stable strategies over a (theta, parameter) grid");
    add_common(optimize, opt_flags);
    optimize->add_option("--theta-range", theta_range, "theta grid as min:max:steps");
    optimize->add_option("--param-sweep", param_sweep, "swept parameter as name:min:max:steps");
    optimize->add_option("--mode", opt_mode, "optimal (fixed model) or stable_set");

    auto* pip_cmd = app.add_subcommand("pip", "pairwise invasibility plot at one theta");
    add_common(pip_cmd, pip_flags);
    pip_cmd->add_option("--model", pip_model, "fixed or social");
    pip_cmd->add_option("--theta", pip_theta, "environment quality");
    pip_cmd->add_option("--resolution", pip_resolution, "grid points per axis");

    auto* field_cmd = app.add_subcommand("field", "selection gradient field over (theta, p)");
    add_common(field_cmd, field_flags);
    field_cmd->add_option("--model", field_model, "fixed or social");
    field_cmd->add_option("--theta-grid", field_theta_grid, "theta grid as min:max:steps");
    field_cmd->add_option("--p-grid", field_p_grid, "p grid as min:max:steps");

    auto* sim_cmd = app.add_subcommand("simulate", "stochastic ensemble simulation");
    add_common(sim_cmd, sim_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (optimize->parsed()) return run_optimize(opt_flags, theta_range, param_sweep, opt_mode);
        if (pip_cmd->parsed()) return run_pip(pip_flags, pip_model, pip_theta, pip_resolution);
        if (field_cmd->parsed())
            return run_field(field_flags, field_model, field_theta_grid, field_p_grid);
        if (sim_cmd->parsed()) return run_simulate(sim_flags);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
