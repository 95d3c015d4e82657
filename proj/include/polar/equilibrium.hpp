#pragma once

#include <string>
#include <vector>

#include "polar/model.hpp"

namespace polar {

enum class Model { Fixed, Social };

// Expected fitness of a mutant strategy against a monomorphic resident.
// For the fixed model the resident is irrelevant.
double expected_fitness(Model model, double p_mutant, double p_resident, double theta,
                        const BenefitCurve& curve, const InteractionParams& params);

// Invasion fitness s(f,g) = w_f - w_g.
double invasion_fitness(double p_mutant, double p_resident, double theta, Model model,
                        const BenefitCurve& curve, const InteractionParams& params);

enum class GradientMethod { Analytic, CentralDifference };

struct GradientSample {
    double p = 0.0;
    double theta = 0.0;
    double value = 0.0;  // selection gradient, normalized per interaction (1/n)
};

// Selection gradient d w_f / d p_f at f = g = p, scaled by 1/n so that the
// saturated-environment limit is slope*(q_in*b_in - q_out_eff*b_out)
// independent of n. Analytic form differentiates the mutant binomial
// term-by-term and is valid at the boundaries (one-sided limit).
GradientSample selection_gradient(double p, double theta, Model model,
                                  const BenefitCurve& curve, const InteractionParams& params,
                                  GradientMethod method = GradientMethod::Analytic,
                                  double fd_step = 1e-5);

// Argmax of fixed-model expected fitness over a uniform p grid, refined by
// golden-section search in the winning cell. Ties within 1e-10 go to the
// smallest p.
double optimal_strategy(double theta, const BenefitCurve& curve,
                        const InteractionParams& params, int grid_resolution = 201);

struct SingularPoint {
    enum class Kind { BoundaryLow, BoundaryHigh, Interior };
    double p_star = 0.0;
    double theta = 0.0;
    bool ess = false;                 // d2 s/d f2 < 0 at f = g = p_star
    bool convergence_stable = false;  // d2 s/d g2 > d2 s/d f2 (interior);
                                      // one-sided gradient sign at boundaries
    Kind kind = Kind::Interior;
};

// Fills stability flags via central finite differences of invasion fitness
// (one-sided treatment at the boundaries, reflected in `kind`).
SingularPoint classify_singular_point(double p_star, double theta, Model model,
                                      const BenefitCurve& curve,
                                      const InteractionParams& params, double fd_step = 1e-4);

// Sign-scans the gradient over a p grid, bisects every bracketed root to
// |interval| < 1e-9, appends both boundaries, classifies everything.
std::vector<SingularPoint> find_singular_points(double theta, Model model,
                                                const BenefitCurve& curve,
                                                const InteractionParams& params,
                                                int scan_resolution = 1024);

// Attracting equilibria only (interior roots the gradient flows into, plus
// attracting boundaries), sorted ascending.
std::vector<double> attracting_strategies(double theta, Model model, const BenefitCurve& curve,
                                          const InteractionParams& params,
                                          int scan_resolution = 1024);

struct PipGrid {
    std::vector<double> mutant_axis;
    std::vector<double> resident_axis;
    std::vector<int> sign;  // row-major [mutant][resident], entries in {-1,0,+1}
    int at(int mutant_idx, int resident_idx) const {
        return sign[static_cast<std::size_t>(mutant_idx) * resident_axis.size() + resident_idx];
    }
};

// Sign map of invasion fitness on a uniform (mutant, resident) grid.
// Zero classification uses |s| <= 1e-12.
PipGrid pip(double theta, Model model, const BenefitCurve& curve,
            const InteractionParams& params, int resolution = 201, int threads = 0);

struct GradientField {
    std::vector<double> theta_axis;
    std::vector<double> p_axis;
    std::vector<GradientSample> samples;  // row-major [theta][p]
};

GradientField gradient_field(const std::vector<double>& theta_grid,
                             const std::vector<double>& p_grid, Model model,
                             const BenefitCurve& curve, const InteractionParams& params,
                             int threads = 0);

enum class SweepMode { Optimal, StableSet };

struct SweepResult {
    std::string parameter;
    std::vector<double> theta_axis;
    std::vector<double> param_axis;
    // cells[param_idx * theta_axis.size() + theta_idx] = optimum (one entry)
    // or the full attracting set for that cell.
    std::vector<std::vector<double>> cells;
    bool clamped_negative_kernel = false;  // PowerCurvature sweeps clamp at 0
    const std::vector<double>& at(int param_idx, int theta_idx) const {
        return cells[static_cast<std::size_t>(param_idx) * theta_axis.size() + theta_idx];
    }
};

// Swept parameter names: q_out, q_in, b_in, b_out_gap, n, steepness, slope,
// curvature_exp, q_out_with_fixed_expectation. The last holds q_in*b_in and
// q_out*b_out constant while varying q_out (b_out adjusts). Mode Optimal is
// valid for the fixed model only.
SweepResult sweep(const std::string& parameter, const std::vector<double>& param_grid,
                  const std::vector<double>& theta_grid, Model model, const BenefitCurve& curve,
                  const InteractionParams& params, SweepMode mode, int threads = 0);

// Uniform grid helper: `count` points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace polar
