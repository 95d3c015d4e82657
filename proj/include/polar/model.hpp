#pragma once

#include <stdexcept>

namespace polar {

// Interaction game: per-interaction benefits and success probabilities,
// and the number of interactions per fitness evaluation.
struct InteractionParams {
    double b_in = 0.5;   // benefit of a successful in-group interaction
    double b_out = 1.0;  // benefit of a successful out-group interaction
    double q_in = 1.0;   // success probability of an in-group interaction
    double q_out = 0.6;  // intrinsic success probability of an out-group interaction
    int n = 5;           // interactions per fitness evaluation

    // Canonical regime: out-group pays more but fails more often.
    // Checked by callers that care, never enforced (parameter sweeps cross it).
    bool risk_reward_ordered() const { return b_out > b_in && q_out < q_in; }

    void validate() const;
};

// One realization of a round of n interactions.
struct OutcomeTally {
    int k = 0;      // in-group attempts, 0..n
    int l_in = 0;   // in-group successes, 0..k
    int l_out = 0;  // out-group successes, 0..n-k
};

bool tally_valid(const OutcomeTally& t, int n);

enum class CurveKind {
    SigmoidLinear,   // logistic threshold times linear accumulation
    PowerCurvature,  // scaled payoff raised to 10^curvature_exp
    LinearBenefit,   // kernel = accumulated benefit itself (testing/diagnostics)
};

// Functional response mapping accumulated benefit + environment to fitness.
struct BenefitCurve {
    CurveKind kind = CurveKind::SigmoidLinear;
    double steepness = 10.0;      // sigmoid sharpness (SigmoidLinear)
    double slope = 0.02;          // linear accumulation rate (SigmoidLinear)
    double curvature_exp = 0.0;   // exponent is 10^curvature_exp (PowerCurvature)
    bool clamp_negative = false;  // PowerCurvature: clamp negative argument at 0
                                  // instead of throwing (used by sweep drivers)
};

// Binomial coefficient; exact integer table for n <= 64, log-space above.
double binomial_coefficient(int n, int k);

// Probability of one outcome tally under strategy p.
// q_out_eff is the effective out-group success probability: q_out for the
// fixed-risk model, q_out*(1-p_resident) for the social-risk model.
// Convention 0^0 = 1, so degenerate p and q values are exact.
double outcome_probability(const OutcomeTally& tally, double p,
                           const InteractionParams& params, double q_out_eff);

// n*B_i*q_i*p + n*B_o*q_o*(1-p): expected benefit when accumulation is linear.
double expected_linear_benefit(double p, const InteractionParams& params);

// Fitness of one realized tally in environment theta.
// Throws std::domain_error for PowerCurvature with a negative scaled argument
// unless curve.clamp_negative is set.
double fitness_kernel(const OutcomeTally& tally, double theta,
                      const BenefitCurve& curve, const InteractionParams& params);

// Exact expected fitness: triple sum over all tallies (k outer, l_in middle,
// l_out inner, extended-precision accumulation).
double expected_fitness_fixed(double p, double theta, const BenefitCurve& curve,
                              const InteractionParams& params);

// Same sum with q_out_eff = q_out*(1-p_resident). Identical code path to the
// fixed model, so p_resident = 0 coincides bit-for-bit.
double expected_fitness_social(double p_mutant, double p_resident, double theta,
                               const BenefitCurve& curve, const InteractionParams& params);

}  // namespace polar
