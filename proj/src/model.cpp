#include "polar/model.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace polar {

void InteractionParams::validate() const {
    if (!(q_in >= 0.0 && q_in <= 1.0)) throw std::invalid_argument("q_in must be in [0,1]");
    if (!(q_out >= 0.0 && q_out <= 1.0)) throw std::invalid_argument("q_out must be in [0,1]");
    if (!(b_in > 0.0)) throw std::invalid_argument("b_in must be > 0");
    if (!(b_out > 0.0)) throw std::invalid_argument("b_out must be > 0");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
}

bool tally_valid(const OutcomeTally& t, int n) {
    return t.k >= 0 && t.k <= n && t.l_in >= 0 && t.l_in <= t.k && t.l_out >= 0 &&
           t.l_out <= n - t.k;
}

namespace {

constexpr int kExactBinomialMax = 64;

// Pascal triangle up to n = 64 in exact integer arithmetic, built once.
const std::vector<std::array<std::uint64_t, kExactBinomialMax + 1>>& pascal_table() {
    static const auto table = [] {
        std::vector<std::array<std::uint64_t, kExactBinomialMax + 1>> t(kExactBinomialMax + 1);
        for (int n = 0; n <= kExactBinomialMax; ++n) {
            t[n].fill(0);
            t[n][0] = t[n][n] = 1;
            for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
        }
        return t;
    }();
    return table;
}

// p^e with the 0^0 = 1 convention (std::pow already guarantees it).
inline double ipow(double p, int e) { return std::pow(p, static_cast<double>(e)); }

inline double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double z = std::exp(x);
    return z / (1.0 + z);
}

}  // namespace

double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (n <= kExactBinomialMax) return static_cast<double>(pascal_table()[n][k]);
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double outcome_probability(const OutcomeTally& t, double p, const InteractionParams& params,
                           double q_out_eff) {
    if (!tally_valid(t, params.n))
        throw std::invalid_argument("outcome tally violates ordering invariants");
    if (!(q_out_eff >= 0.0 && q_out_eff <= 1.0))
        throw std::invalid_argument("q_out_eff must be in [0,1]");
    const int n = params.n;
    const double choose = binomial_coefficient(n, t.k) * ipow(p, t.k) * ipow(1.0 - p, n - t.k);
    const double in = binomial_coefficient(t.k, t.l_in) * ipow(params.q_in, t.l_in) *
                      ipow(1.0 - params.q_in, t.k - t.l_in);
    const double out = binomial_coefficient(n - t.k, t.l_out) * ipow(q_out_eff, t.l_out) *
                       ipow(1.0 - q_out_eff, n - t.k - t.l_out);
    return choose * in * out;
}

double expected_linear_benefit(double p, const InteractionParams& params) {
    return params.n * (params.b_in * params.q_in * p + params.b_out * params.q_out * (1.0 - p));
}

double fitness_kernel(const OutcomeTally& t, double theta, const BenefitCurve& curve,
                      const InteractionParams& params) {
    const double payoff = t.l_in * params.b_in + t.l_out * params.b_out;
    const double scaled = (payoff + params.n * theta) / params.n;
    switch (curve.kind) {
        case CurveKind::SigmoidLinear:
            return logistic(curve.steepness * scaled) * (1.0 + curve.slope * payoff);
        case CurveKind::PowerCurvature: {
            double arg = scaled;
            if (arg < 0.0) {
                if (!curve.clamp_negative)
                    throw std::domain_error("power-curvature kernel argument is negative");
                arg = 0.0;
            }
            return std::pow(arg, std::pow(10.0, curve.curvature_exp));
        }
        case CurveKind::LinearBenefit:
            return payoff;
    }
    throw std::logic_error("unknown curve kind");
}

namespace {

// Shared triple sum; q_out_eff distinguishes the two models.
double expected_fitness_qeff(double p, double theta, double q_out_eff,
                             const BenefitCurve& curve, const InteractionParams& params) {
    const int n = params.n;
    long double total = 0.0L;
    OutcomeTally t;
    for (t.k = 0; t.k <= n; ++t.k) {
        const double pk =
            binomial_coefficient(n, t.k) * ipow(p, t.k) * ipow(1.0 - p, n - t.k);
        if (pk == 0.0) continue;
        for (t.l_in = 0; t.l_in <= t.k; ++t.l_in) {
            const double pi = binomial_coefficient(t.k, t.l_in) * ipow(params.q_in, t.l_in) *
                              ipow(1.0 - params.q_in, t.k - t.l_in);
            if (pi == 0.0) continue;
            for (t.l_out = 0; t.l_out <= n - t.k; ++t.l_out) {
                const double po = binomial_coefficient(n - t.k, t.l_out) *
                                  ipow(q_out_eff, t.l_out) *
                                  ipow(1.0 - q_out_eff, n - t.k - t.l_out);
                if (po == 0.0) continue;
                total += static_cast<long double>(pk * pi * po) *
                         fitness_kernel(t, theta, curve, params);
            }
        }
    }
    return static_cast<double>(total);
}

}  // namespace

double expected_fitness_fixed(double p, double theta, const BenefitCurve& curve,
                              const InteractionParams& params) {
    return expected_fitness_qeff(p, theta, params.q_out, curve, params);
}

double expected_fitness_social(double p_mutant, double p_resident, double theta,
                               const BenefitCurve& curve, const InteractionParams& params) {
    return expected_fitness_qeff(p_mutant, theta, params.q_out * (1.0 - p_resident), curve,
                                 params);
}

}  // namespace polar
