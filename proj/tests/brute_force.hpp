#pragma once

// Independent reference implementations used only by tests. Deliberately
// shares no code with the library: binomial coefficients come from a local
// Pascal recursion and the sums are direct nested loops over all outcomes.

#include <cmath>
#include <vector>

namespace brute {

inline double choose(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    std::vector<double> row(n + 1, 0.0);
    row[0] = 1.0;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[j] += row[j - 1];
    return row[k];
}

inline double binom_pmf(int count, int total, double prob) {
    return choose(total, count) * std::pow(prob, count) *
           std::pow(1.0 - prob, total - count);
}

inline double sigmoid_linear_kernel(int l_in, int l_out, int n, double theta, double steep,
                                    double slope, double b_in, double b_out) {
    const double payoff = l_in * b_in + l_out * b_out;
    const double x = steep * (payoff + n * theta) / n;
    const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    return s * (1.0 + slope * payoff);
}

// Expected fitness by full enumeration; q_out_eff = q_out for the fixed
// model, q_out*(1-p_resident) for the social model.
inline double expected_fitness(double p, double theta, int n, double q_in, double q_out_eff,
                               double b_in, double b_out, double steep, double slope) {
    double total = 0.0;
    for (int k = 0; k <= n; ++k)
        for (int li = 0; li <= k; ++li)
            for (int lo = 0; lo <= n - k; ++lo)
                total += binom_pmf(k, n, p) * binom_pmf(li, k, q_in) *
                         binom_pmf(lo, n - k, q_out_eff) *
                         sigmoid_linear_kernel(li, lo, n, theta, steep, slope, b_in, b_out);
    return total;
}

inline double probability_mass(double p, int n, double q_in, double q_out_eff) {
    double total = 0.0;
    for (int k = 0; k <= n; ++k)
        for (int li = 0; li <= k; ++li)
            for (int lo = 0; lo <= n - k; ++lo)
                total += binom_pmf(k, n, p) * binom_pmf(li, k, q_in) *
                         binom_pmf(lo, n - k, q_out_eff);
    return total;
}

}  // namespace brute
