// Compares the serial reference path (threads = 1) against the OpenMP path
// for the grid and ensemble kernels, and checks the outputs are identical.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "polar/equilibrium.hpp"
#include "polar/simulation.hpp"

using namespace polar;

namespace {

template <typename Fn>
double time_seconds(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int resolution = argc > 1 ? std::atoi(argv[1]) : 401;
    const InteractionParams params{};
    const BenefitCurve curve{};

    PipGrid serial_pip, parallel_pip;
    const double t_pip_serial =
        time_seconds([&] { serial_pip = pip(-0.2, Model::Social, curve, params, resolution, 1); });
    const double t_pip_parallel =
        time_seconds([&] { parallel_pip = pip(-0.2, Model::Social, curve, params, resolution, 0); });
    const bool pip_equal = serial_pip.sign == parallel_pip.sign;
    std::printf("pip %dx%d          serial %.3fs  parallel %.3fs  speedup %.2fx  identical %s\n",
                resolution, resolution, t_pip_serial, t_pip_parallel,
                t_pip_serial / t_pip_parallel, pip_equal ? "yes" : "NO");

    const auto theta_grid = linspace(-1.0, 1.0, resolution);
    const auto p_grid = linspace(0.0, 1.0, resolution);
    GradientField serial_field, parallel_field;
    const double t_field_serial = time_seconds(
        [&] { serial_field = gradient_field(theta_grid, p_grid, Model::Fixed, curve, params, 1); });
    const double t_field_parallel = time_seconds(
        [&] { parallel_field = gradient_field(theta_grid, p_grid, Model::Fixed, curve, params, 0); });
    bool field_equal = serial_field.samples.size() == parallel_field.samples.size();
    for (std::size_t i = 0; field_equal && i < serial_field.samples.size(); ++i)
        field_equal = serial_field.samples[i].value == parallel_field.samples[i].value;
    std::printf("gradient %dx%d     serial %.3fs  parallel %.3fs  speedup %.2fx  identical %s\n",
                resolution, resolution, t_field_serial, t_field_parallel,
                t_field_serial / t_field_parallel, field_equal ? "yes" : "NO");

    SimConfig config;
    config.population_size = 200;
    config.ensemble_size = 64;
    config.total_events = 20000;
    config.checkpoints = 100;
    config.schedule.kind = EnvironmentSchedule::Kind::Sinusoid;
    config.schedule.period = 20000.0;
    EnsembleStats serial_ens, parallel_ens;
    const double t_ens_serial = time_seconds(
        [&] { serial_ens = run_ensemble(config, curve, params, {}, 7, 1); });
    const double t_ens_parallel = time_seconds(
        [&] { parallel_ens = run_ensemble(config, curve, params, {}, 7, 0); });
    bool ens_equal = serial_ens.mean_p.size() == parallel_ens.mean_p.size();
    for (std::size_t i = 0; ens_equal && i < serial_ens.mean_p.size(); ++i)
        ens_equal = serial_ens.mean_p[i] == parallel_ens.mean_p[i] &&
                    serial_ens.std_p[i] == parallel_ens.std_p[i];
    std::printf("ensemble 64x20000  serial %.3fs  parallel %.3fs  speedup %.2fx  identical %s\n",
                t_ens_serial, t_ens_parallel, t_ens_serial / t_ens_parallel,
                ens_equal ? "yes" : "NO");

    return (pip_equal && field_equal && ens_equal) ? 0 : 1;
}
