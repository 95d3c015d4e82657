// Acceptance suite: one pass/fail line per criterion, non-zero exit if any
// criterion fails. argv[1] = path to the CLI binary (determinism check).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "polar/equilibrium.hpp"
#include "polar/simulation.hpp"

using namespace polar;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const char* description, bool pass, double seconds) {
    std::printf("%s  criterion %d: %s  (%.1fs)\n", pass ? "PASS" : "FAIL", criterion,
                description, seconds);
    if (!pass) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Baseline parameter set with steepness 10, slope 0.02.
const InteractionParams kParams{};
const BenefitCurve kCurve{};

bool criterion_normalization_and_oracle() {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        InteractionParams params;
        params.n = 1 + static_cast<int>(gen() % 10);
        params.q_in = unit(gen);
        params.q_out = unit(gen);
        params.b_in = 0.1 + unit(gen);
        params.b_out = 0.1 + unit(gen);
        BenefitCurve curve;
        curve.steepness = 0.5 + 20.0 * unit(gen);
        curve.slope = 0.05 * unit(gen);
        const double p = unit(gen);
        const double p_res = unit(gen);
        const double theta = 2.0 * unit(gen) - 1.0;

        const double mass = brute::probability_mass(p, params.n, params.q_in, params.q_out);
        if (std::abs(mass - 1.0) > 1e-12) return false;

        const double oracle_fixed =
            brute::expected_fitness(p, theta, params.n, params.q_in, params.q_out, params.b_in,
                                    params.b_out, curve.steepness, curve.slope);
        if (std::abs(expected_fitness_fixed(p, theta, curve, params) - oracle_fixed) > 1e-12)
            return false;

        const double oracle_social = brute::expected_fitness(
            p, theta, params.n, params.q_in, params.q_out * (1.0 - p_res), params.b_in,
            params.b_out, curve.steepness, curve.slope);
        if (std::abs(expected_fitness_social(p, p_res, theta, curve, params) - oracle_social) >
            1e-12)
            return false;
    }
    return true;
}

bool criterion_gradient_agreement() {
    std::mt19937_64 gen(55);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Model model : {Model::Fixed, Model::Social}) {
        for (int rep = 0; rep < 100; ++rep) {
            const double p = 0.01 + 0.98 * unit(gen);
            const double theta = 2.0 * unit(gen) - 1.0;
            const double a =
                selection_gradient(p, theta, model, kCurve, kParams, GradientMethod::Analytic)
                    .value;
            const double fd = selection_gradient(p, theta, model, kCurve, kParams,
                                                 GradientMethod::CentralDifference, 1e-5)
                                  .value;
            if (std::abs(a - fd) / std::max(std::abs(a), 1e-8) > 1e-6) return false;
        }
    }
    return true;
}

bool criterion_analytic_limits() {
    // Saturated good environment (theta = 5; at theta = -5 the threshold
    // term collapses to ~0 and the gradient with it).
    const double fixed_limit =
        kCurve.slope * (kParams.q_in * kParams.b_in - kParams.q_out * kParams.b_out);
    const double g_fixed = selection_gradient(0.5, 5.0, Model::Fixed, kCurve, kParams).value;
    if (std::abs(g_fixed - fixed_limit) > 1e-6) return false;
    if (std::abs(fixed_limit - (-0.002)) > 1e-12) return false;

    const double expected_root =
        1.0 - kParams.q_in * kParams.b_in / (kParams.q_out * kParams.b_out);
    const auto points = find_singular_points(5.0, Model::Social, kCurve, kParams);
    const SingularPoint* interior = nullptr;
    for (const auto& pt : points)
        if (pt.kind == SingularPoint::Kind::Interior) interior = &pt;
    if (!interior || std::abs(interior->p_star - expected_root) > 1e-6) return false;

    const double eps = 1e-5;
    const double diag =
        (selection_gradient(expected_root + eps, 5.0, Model::Social, kCurve, kParams).value -
         selection_gradient(expected_root - eps, 5.0, Model::Social, kCurve, kParams).value) /
        (2.0 * eps);
    const double expected_diag = kCurve.slope * kParams.q_out * kParams.b_out;  // 0.012
    return diag > 0.0 && std::abs(diag - expected_diag) < 1e-4;
}

bool criterion_bimodal_optimum_map() {
    const auto theta_grid = linspace(-1.0, 1.0, 101);
    const auto q_grid = linspace(0.5, 1.0, 101);
    const auto result =
        sweep("q_out", q_grid, theta_grid, Model::Fixed, kCurve, kParams, SweepMode::Optimal);
    bool saw_low = false, saw_high = false;
    int interior = 0;
    for (int qi = 0; qi < 101; ++qi) {
        for (int ti = 0; ti < 101; ++ti) {
            const double p = result.at(qi, ti)[0];
            if (std::abs(p) <= 1e-6) {
                saw_low = true;
            } else if (std::abs(p - 1.0) <= 1e-6) {
                saw_high = true;
            } else {
                // Genuine interior optima exist in a thin wedge where the
                // expected in- and out-group payoffs nearly balance
                // (q_out*b_out close to q_in*b_in); outside it the map must
                // be strictly bimodal.
                const bool in_wedge = q_grid[qi] < 0.62 && theta_grid[ti] > -0.05 &&
                                      theta_grid[ti] < 0.55;
                if (!in_wedge) return false;
                ++interior;
            }
        }
    }
    if (!(saw_low && saw_high)) return false;
    if (interior > 150) return false;  // wedge stays thin: <1.5% of cells

    const auto cell_at = [&](double q, double theta) {
        int qi = 0, ti = 0;
        for (std::size_t i = 0; i < q_grid.size(); ++i)
            if (std::abs(q_grid[i] - q) < 1e-9) qi = static_cast<int>(i);
        for (std::size_t i = 0; i < theta_grid.size(); ++i)
            if (std::abs(theta_grid[i] - theta) < 1e-9) ti = static_cast<int>(i);
        return result.at(qi, ti)[0];
    };
    if (std::abs(cell_at(0.6, 0.9)) > 1e-6) return false;  // diverse at excellent theta
    bool high_band = false;  // parochial somewhere in the intermediate band
    for (double theta = -0.4; theta <= 0.1; theta += 0.02)
        for (std::size_t ti = 0; ti < theta_grid.size(); ++ti)
            if (std::abs(theta_grid[ti] - theta) < 1e-9 && cell_at(0.6, theta_grid[ti]) > 0.5)
                high_band = true;
    return high_band;
}

bool criterion_pip_structure() {
    // Fixed model, extreme environments: p=0 uninvadable.
    for (double theta : {-1.0, 1.0}) {
        const auto grid = pip(theta, Model::Fixed, kCurve, kParams, 101);
        for (int i = 1; i < 101; ++i)
            if (grid.at(i, 0) > 0) return false;
    }
    // Social model: some intermediate theta has p=1 as the only stable strategy.
    bool only_high = false;
    for (double theta = -0.3; theta <= 0.05 + 1e-9; theta += 0.025) {
        const auto stable = attracting_strategies(theta, Model::Social, kCurve, kParams);
        if (stable.size() == 1 && stable[0] == 1.0) only_high = true;
    }
    if (!only_high) return false;
    // Social model, excellent environment: bistable.
    const auto stable = attracting_strategies(1.0, Model::Social, kCurve, kParams);
    return stable.size() >= 2 && stable.front() <= 0.1 && stable.back() == 1.0;
}

// Desk-scale shifting-environment ensemble. Fitness differences between the
// competing strategies are only ~0.02 at these parameters, so single-round
// realized payoffs drown the signal in sampling noise; the desk runs use
// expected payoffs with a hard selection threshold, plus a mutant supply and
// period long enough that both transitions complete within a checkpoint
// spacing of the gradient's sign change.
SimConfig desk_scale_config(std::uint64_t period_events) {
    SimConfig config;
    config.population_size = 200;
    config.ensemble_size = 100;
    config.total_events = period_events;  // one full period
    config.checkpoints = 80;
    config.schedule.kind = EnvironmentSchedule::Kind::Sinusoid;
    config.schedule.amplitude = 1.0;
    config.schedule.period = static_cast<double>(config.total_events);
    config.payoff_mode = PayoffMode::Expected;
    config.selection_strength = 10000.0;
    config.mutation_rate = 0.05;
    config.seed = 20240817;
    return config;
}

bool criterion_fixed_hysteresis_symmetry() {
    SimConfig config = desk_scale_config(800000);
    config.model = Model::Fixed;
    config.mutation_kernel = MutationKernelKind::GlobalUniform;
    const auto stats =
        run_ensemble(config, kCurve, kParams, {Init::Kind::UniformAt, 0.0}, config.seed);

    double peak_decline = 0.0;
    double worst_extreme = 0.0;
    for (std::size_t c = 0; c < stats.mean_p.size(); ++c) {
        const bool decline = stats.event_index[c] < config.total_events / 2;
        if (decline && stats.theta[c] > -0.5 && stats.theta[c] < 0.2)
            peak_decline = std::max(peak_decline, stats.mean_p[c]);
        if (std::abs(stats.theta[c]) > 0.95)
            worst_extreme = std::max(worst_extreme, stats.mean_p[c]);
    }
    if (peak_decline <= 0.8) return false;
    if (worst_extreme >= 0.3) return false;

    // Return sweep mirrors the decline sweep at matching theta.
    const int checkpoints = static_cast<int>(stats.mean_p.size());
    for (int c = 0; c < checkpoints / 2 - 1; ++c) {
        const int mirror = checkpoints - 2 - c;
        if (std::abs(stats.theta[c] - stats.theta[mirror]) > 1e-3) continue;
        if (std::abs(stats.mean_p[c] - stats.mean_p[mirror]) >= 0.15) return false;
    }
    return true;
}

bool criterion_social_irreversibility() {
    SimConfig config = desk_scale_config(400000);
    config.model = Model::Social;
    config.mutation_kernel = MutationKernelKind::GlobalUniform;
    // Low-polarization equilibrium at theta = +1 sits at the lower boundary.
    const auto stats =
        run_ensemble(config, kCurve, kParams, {Init::Kind::UniformAt, 0.0}, config.seed);
    return stats.mean_p.back() > 0.8;
}

bool criterion_multistability_witness() {
    InteractionParams params;
    params.q_out = 0.51;
    BenefitCurve curve;
    curve.steepness = 100.0;
    curve.slope = 0.01;
    for (int i = 0; i <= 400; ++i) {
        const double theta = -1.0 + i * 0.005;
        const auto stable = attracting_strategies(theta, Model::Social, curve, params);
        if (stable.size() < 3) continue;
        for (double p : stable)
            if (p > 0.8 && p < 0.95) return true;
    }
    return false;
}

bool criterion_cli_determinism(const std::string& cli) {
    const fs::path base = fs::temp_directory_path() / "polar_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path cfg = base / "run.cfg";
    std::ofstream(cfg) << "model = fixed\nN = 100\nensemble_size = 20\n"
                          "total_events = 5000\ncheckpoints = 50\n"
                          "schedule = sinusoid\nperiod_events = 5000\n"
                          "mu = 0.005\nseed = 42\n";
    const auto run = [&](const std::string& out) {
        const std::string cmd =
            cli + " simulate --config " + cfg.string() + " --out " + out + " > /dev/null";
        return std::system(cmd.c_str()) == 0;
    };
    if (!run((base / "a").string()) || !run((base / "b").string())) return false;
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(base / "a" / "data.csv");
    const std::string b = slurp(base / "b" / "data.csv");
    return !a.empty() && a == b;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "./polar";

    const auto check = [&](int criterion, const char* description, bool (*fn)()) {
        Timer t;
        const bool pass = fn();
        report(criterion, description, pass, t.seconds());
    };
    check(1, "normalization and enumeration-oracle equivalence",
          criterion_normalization_and_oracle);
    check(2, "analytic vs central-difference gradients", criterion_gradient_agreement);
    check(3, "saturated-environment analytic limits", criterion_analytic_limits);
    check(4, "bimodal optimal-strategy map", criterion_bimodal_optimum_map);
    check(5, "invasibility structure across environments", criterion_pip_structure);
    check(6, "fixed-model hysteresis symmetry (desk scale)", criterion_fixed_hysteresis_symmetry);
    check(7, "social-model irreversibility (desk scale)", criterion_social_irreversibility);
    check(8, "three attracting equilibria witness", criterion_multistability_witness);
    {
        Timer t;
        const bool pass = criterion_cli_determinism(cli);
        report(9, "byte-identical repeated simulate runs", pass, t.seconds());
    }

    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all criteria passed\n");
    return failures ? 1 : 0;
}
