#pragma once

#include <cstdint>
#include <vector>

#include "polar/equilibrium.hpp"
#include "polar/model.hpp"
#include "polar/rng.hpp"

namespace polar {

struct EnvironmentSchedule {
    enum class Kind { Constant, Sinusoid };
    Kind kind = Kind::Constant;
    double theta = 0.0;      // Constant
    double amplitude = 1.0;  // Sinusoid: amplitude*cos(2*pi*t/period + phase)
    double period = 1.0;     // in copying events
    double phase = 0.0;      // default 0: starts at the best environment, declining

    double at(std::uint64_t event_index) const;
    void validate() const;
};

enum class MutationKernelKind { GlobalUniform, LocalStep };
enum class PayoffMode { Realized, Expected };
enum class GroupMode { FixedSplit, Reshuffle };

struct SimConfig {
    int population_size = 1000;
    double selection_strength = 10.0;
    double mutation_rate = 0.001;  // per copying event
    MutationKernelKind mutation_kernel = MutationKernelKind::GlobalUniform;
    double mutation_delta = 0.01;  // LocalStep size
    Model model = Model::Fixed;
    PayoffMode payoff_mode = PayoffMode::Realized;
    GroupMode group_mode = GroupMode::FixedSplit;
    EnvironmentSchedule schedule;
    std::uint64_t total_events = 100000;
    int checkpoints = 200;
    int ensemble_size = 1000;
    std::uint64_t seed = 1;

    void validate() const;
};

struct Population {
    std::vector<double> strategies;
    std::vector<std::uint8_t> group_of;  // {0,1}; equal split at construction

    static Population uniform_at(int size, double p0);
    static Population random_uniform(int size, SplitMix64& rng);
    double mean_strategy() const;
};

struct Init {
    enum class Kind { UniformAt, RandomUniform };
    Kind kind = Kind::UniformAt;
    double p0 = 0.0;
};

// One round of n sampled interactions for the focal individual; returns the
// fitness kernel of the realized tally. Social model draws an out-group
// partner per attempt (uniform over the other group, or over everyone else
// under GroupMode::Reshuffle) and succeeds with q_out*(1-p_partner).
double realized_payoff(int individual_index, const Population& pop, double theta,
                       const BenefitCurve& curve, const InteractionParams& params, Model model,
                       GroupMode group_mode, SplitMix64& rng);

// Fermi rule: probability of adopting the observed strategy. Saturates
// instead of overflowing for large |sigma*(w_observed - w_self)|.
double copy_probability(double w_self, double w_observed, double sigma);

// One copying event plus (with probability mu) one mutation of a uniformly
// chosen individual.
void step(Population& pop, std::uint64_t event_index, const SimConfig& config,
          const BenefitCurve& curve, const InteractionParams& params, SplitMix64& rng);

struct Trajectory {
    std::vector<std::uint64_t> event_index;
    std::vector<double> theta;
    std::vector<double> mean_p;
};

Trajectory run_trajectory(const SimConfig& config, const BenefitCurve& curve,
                          const InteractionParams& params, Init init, std::uint64_t seed);

struct EnsembleStats {
    std::vector<std::uint64_t> event_index;
    std::vector<double> theta;
    std::vector<double> mean_p;  // ensemble mean of population-mean strategy
    std::vector<double> std_p;   // ensemble standard deviation of the same
};

// ensemble_size independent trajectories on streams split from base_seed;
// replicates may run concurrently, the reduction is order-independent.
EnsembleStats run_ensemble(const SimConfig& config, const BenefitCurve& curve,
                           const InteractionParams& params, Init init, std::uint64_t base_seed,
                           int threads = 0);

}  // namespace polar
