#include "polar/simulation.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polar {

double EnvironmentSchedule::at(std::uint64_t event_index) const {
    if (kind == Kind::Constant) return theta;
    return amplitude *
           std::cos(2.0 * std::numbers::pi * static_cast<double>(event_index) / period + phase);
}

void EnvironmentSchedule::validate() const {
    if (kind == Kind::Sinusoid && !(period > 0.0))
        throw std::invalid_argument("schedule period must be > 0");
    if (!std::isfinite(kind == Kind::Constant ? theta : amplitude))
        throw std::invalid_argument("schedule parameters must be finite");
}

void SimConfig::validate() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (!(selection_strength >= 0.0))
        throw std::invalid_argument("selection_strength must be >= 0");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
        throw std::invalid_argument("mutation_rate must be in [0,1]");
    if (!(mutation_delta > 0.0 && mutation_delta <= 1.0))
        throw std::invalid_argument("mutation_delta must be in (0,1]");
    if (checkpoints < 1) throw std::invalid_argument("checkpoints must be >= 1");
    if (total_events < static_cast<std::uint64_t>(checkpoints))
        throw std::invalid_argument("total_events must be >= checkpoints");
    if (ensemble_size < 1) throw std::invalid_argument("ensemble_size must be >= 1");
    schedule.validate();
}

namespace {

std::vector<std::uint8_t> split_groups(int size) {
    std::vector<std::uint8_t> g(size);
    for (int i = 0; i < size; ++i) g[i] = static_cast<std::uint8_t>(i >= size / 2);
    return g;
}

}  // namespace

Population Population::uniform_at(int size, double p0) {
    Population pop;
    pop.strategies.assign(size, p0);
    pop.group_of = split_groups(size);
    return pop;
}

Population Population::random_uniform(int size, SplitMix64& rng) {
    Population pop;
    pop.strategies.resize(size);
    for (auto& s : pop.strategies) s = rng.uniform01();
    pop.group_of = split_groups(size);
    return pop;
}

double Population::mean_strategy() const {
    return std::accumulate(strategies.begin(), strategies.end(), 0.0) /
           static_cast<double>(strategies.size());
}

double realized_payoff(int individual_index, const Population& pop, double theta,
                       const BenefitCurve& curve, const InteractionParams& params, Model model,
                       GroupMode group_mode, SplitMix64& rng) {
    const int size = static_cast<int>(pop.strategies.size());
    const double p = pop.strategies[individual_index];
    OutcomeTally tally;
    for (int i = 0; i < params.n; ++i) {
        if (rng.bernoulli(p)) {
            ++tally.k;
            if (rng.bernoulli(params.q_in)) ++tally.l_in;
        } else if (model == Model::Fixed) {
            if (rng.bernoulli(params.q_out)) ++tally.l_out;
        } else {
            // Out-group partner: uniform over the other fixed group, or over
            // everyone else when groups are reshuffled per evaluation.
            int partner;
            if (group_mode == GroupMode::FixedSplit) {
                const std::uint8_t own = pop.group_of[individual_index];
                do {
                    partner = static_cast<int>(rng.uniform_below(size));
                } while (pop.group_of[partner] == own);
            } else {
                partner = static_cast<int>(rng.uniform_below(size - 1));
                if (partner >= individual_index) ++partner;
            }
            if (rng.bernoulli(params.q_out * (1.0 - pop.strategies[partner]))) ++tally.l_out;
        }
    }
    return fitness_kernel(tally, theta, curve, params);
}

double copy_probability(double w_self, double w_observed, double sigma) {
    const double x = sigma * (w_observed - w_self);
    if (x >= 40.0) return 1.0;
    if (x <= -40.0) return 0.0;
    return 1.0 / (1.0 + std::exp(-x));
}

namespace {

double individual_fitness(int idx, const Population& pop, double theta, const SimConfig& config,
                          const BenefitCurve& curve, const InteractionParams& params,
                          SplitMix64& rng) {
    if (config.payoff_mode == PayoffMode::Realized)
        return realized_payoff(idx, pop, theta, curve, params, config.model, config.group_mode,
                               rng);
    if (config.model == Model::Fixed)
        return expected_fitness_fixed(pop.strategies[idx], theta, curve, params);
    // Mean-field resident: average willingness of the opposite group.
    const std::uint8_t own = pop.group_of[idx];
    double sum = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < pop.strategies.size(); ++j) {
        if (pop.group_of[j] != own) {
            sum += pop.strategies[j];
            ++count;
        }
    }
    return expected_fitness_social(pop.strategies[idx], sum / count, theta, curve, params);
}

}  // namespace

void step(Population& pop, std::uint64_t event_index, const SimConfig& config,
          const BenefitCurve& curve, const InteractionParams& params, SplitMix64& rng) {
    const int size = static_cast<int>(pop.strategies.size());
    const double theta = config.schedule.at(event_index);

    // Focal and observed drawn without replacement.
    const int focal = static_cast<int>(rng.uniform_below(size));
    int observed = static_cast<int>(rng.uniform_below(size - 1));
    if (observed >= focal) ++observed;

    const double w_focal = individual_fitness(focal, pop, theta, config, curve, params, rng);
    const double w_observed =
        individual_fitness(observed, pop, theta, config, curve, params, rng);
    if (rng.bernoulli(copy_probability(w_focal, w_observed, config.selection_strength)))
        pop.strategies[focal] = pop.strategies[observed];

    if (rng.bernoulli(config.mutation_rate)) {
        const int target = static_cast<int>(rng.uniform_below(size));
        if (config.mutation_kernel == MutationKernelKind::GlobalUniform) {
            pop.strategies[target] = rng.uniform01();
        } else {
            const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
            double s = pop.strategies[target] + sign * config.mutation_delta;
            pop.strategies[target] = std::min(1.0, std::max(0.0, s));
        }
    }
}

Trajectory run_trajectory(const SimConfig& config, const BenefitCurve& curve,
                          const InteractionParams& params, Init init, std::uint64_t seed) {
    config.validate();
    params.validate();
    SplitMix64 rng(seed);
    Population pop = init.kind == Init::Kind::UniformAt
                         ? Population::uniform_at(config.population_size, init.p0)
                         : Population::random_uniform(config.population_size, rng);

    Trajectory traj;
    traj.event_index.reserve(config.checkpoints);
    traj.theta.reserve(config.checkpoints);
    traj.mean_p.reserve(config.checkpoints);

    std::uint64_t next_checkpoint =
        config.total_events / config.checkpoints;  // record after this many events
    int recorded = 0;
    for (std::uint64_t e = 0; e < config.total_events; ++e) {
        step(pop, e, config, curve, params, rng);
        if (e + 1 == next_checkpoint) {
            traj.event_index.push_back(e);
            traj.theta.push_back(config.schedule.at(e));
            traj.mean_p.push_back(pop.mean_strategy());
            ++recorded;
            next_checkpoint = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(config.total_events) * (recorded + 1)) /
                config.checkpoints);
        }
    }
    return traj;
}

EnsembleStats run_ensemble(const SimConfig& config, const BenefitCurve& curve,
                           const InteractionParams& params, Init init, std::uint64_t base_seed,
                           int threads) {
    config.validate();
    const int replicates = config.ensemble_size;
    std::vector<Trajectory> runs(replicates);

#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt) if (threads != 1)
#else
    (void)threads;
#endif
    for (int r = 0; r < replicates; ++r)
        runs[r] = run_trajectory(config, curve, params, init,
                                 SplitMix64::stream_seed(base_seed, r));

    EnsembleStats stats;
    stats.event_index = runs[0].event_index;
    stats.theta = runs[0].theta;
    const std::size_t points = stats.event_index.size();
    stats.mean_p.assign(points, 0.0);
    stats.std_p.assign(points, 0.0);
    for (std::size_t c = 0; c < points; ++c) {
        double mean = 0.0;
        for (const auto& run : runs) mean += run.mean_p[c];
        mean /= replicates;
        double var = 0.0;
        for (const auto& run : runs) {
            const double d = run.mean_p[c] - mean;
            var += d * d;
        }
        stats.mean_p[c] = mean;
        stats.std_p[c] = std::sqrt(var / replicates);
    }
    return stats;
}

}  // namespace polar
