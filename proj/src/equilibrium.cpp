#include "polar/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polar {

namespace {

// Runs fn(i) for i in [0, count); parallel across cells unless threads == 1.
// Every cell writes to its own slot, so results are order-independent.
template <typename Fn>
void for_each_cell(std::size_t count, int threads, Fn&& fn) {
#ifdef _OPENMP
    if (threads != 1) {
        const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            fn(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)threads;
#endif
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

double q_out_effective(Model model, double p_resident, const InteractionParams& params) {
    return model == Model::Social ? params.q_out * (1.0 - p_resident) : params.q_out;
}

// Inner double sum over (l_in, l_out) at fixed k: probability-weighted kernel.
double inner_kernel_sum(int k, double q_out_eff, double theta, const BenefitCurve& curve,
                        const InteractionParams& params) {
    const int n = params.n;
    long double total = 0.0L;
    OutcomeTally t;
    t.k = k;
    for (t.l_in = 0; t.l_in <= k; ++t.l_in) {
        const double pi = binomial_coefficient(k, t.l_in) *
                          std::pow(params.q_in, t.l_in) *
                          std::pow(1.0 - params.q_in, k - t.l_in);
        if (pi == 0.0) continue;
        for (t.l_out = 0; t.l_out <= n - k; ++t.l_out) {
            const double po = binomial_coefficient(n - k, t.l_out) *
                              std::pow(q_out_eff, t.l_out) *
                              std::pow(1.0 - q_out_eff, n - k - t.l_out);
            if (po == 0.0) continue;
            total += static_cast<long double>(pi * po) * fitness_kernel(t, theta, curve, params);
        }
    }
    return static_cast<double>(total);
}

// Mutant fitness with the resident's q_out_eff frozen (the fixed-model sum
// with q_out replaced); used by the finite-difference gradient.
double mutant_fitness_frozen_qeff(double p_mutant, double theta, double q_out_eff,
                                  const BenefitCurve& curve, const InteractionParams& params) {
    InteractionParams frozen = params;
    frozen.q_out = q_out_eff;
    return expected_fitness_fixed(p_mutant, theta, curve, frozen);
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
    return v;
}

double expected_fitness(Model model, double p_mutant, double p_resident, double theta,
                        const BenefitCurve& curve, const InteractionParams& params) {
    return model == Model::Social
               ? expected_fitness_social(p_mutant, p_resident, theta, curve, params)
               : expected_fitness_fixed(p_mutant, theta, curve, params);
}

double invasion_fitness(double p_mutant, double p_resident, double theta, Model model,
                        const BenefitCurve& curve, const InteractionParams& params) {
    const double wf = expected_fitness(model, p_mutant, p_resident, theta, curve, params);
    const double wg = expected_fitness(model, p_resident, p_resident, theta, curve, params);
    return wf - wg;
}

GradientSample selection_gradient(double p, double theta, Model model,
                                  const BenefitCurve& curve, const InteractionParams& params,
                                  GradientMethod method, double fd_step) {
    const int n = params.n;
    const double q_eff = q_out_effective(model, p, params);
    GradientSample out{p, theta, 0.0};
    if (method == GradientMethod::CentralDifference) {
        // Mutant strategy perturbed, resident held at p; one-sided at the edges.
        const double lo = std::max(0.0, p - fd_step);
        const double hi = std::min(1.0, p + fd_step);
        const double wlo = mutant_fitness_frozen_qeff(lo, theta, q_eff, curve, params);
        const double whi = mutant_fitness_frozen_qeff(hi, theta, q_eff, curve, params);
        out.value = (whi - wlo) / ((hi - lo) * n);
        return out;
    }
    // d/dp [C(n,k) p^k (1-p)^(n-k)] written as the two-term form, which stays
    // finite at p = 0 and p = 1 (one-sided limits).
    long double g = 0.0L;
    for (int k = 0; k <= n; ++k) {
        double d = 0.0;
        if (k > 0) d += k * std::pow(p, k - 1) * std::pow(1.0 - p, n - k);
        if (k < n) d -= (n - k) * std::pow(p, k) * std::pow(1.0 - p, n - k - 1);
        if (d == 0.0) continue;
        g += static_cast<long double>(binomial_coefficient(n, k) * d) *
             inner_kernel_sum(k, q_eff, theta, curve, params);
    }
    out.value = static_cast<double>(g) / n;
    return out;
}

double optimal_strategy(double theta, const BenefitCurve& curve,
                        const InteractionParams& params, int grid_resolution) {
    if (grid_resolution < 2) throw std::invalid_argument("grid_resolution must be >= 2");
    constexpr double kValueTol = 1e-10;
    const auto grid = linspace(0.0, 1.0, grid_resolution);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = expected_fitness_fixed(grid[i], theta, curve, params);
    double best = values[0];
    for (double v : values) best = std::max(best, v);
    std::size_t win = 0;  // smallest p within tolerance of the max
    while (values[win] < best - kValueTol) ++win;

    // Golden-section refinement inside the winning cell's neighborhood.
    double a = grid[win == 0 ? 0 : win - 1];
    double b = grid[std::min(win + 1, grid.size() - 1)];
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = expected_fitness_fixed(x1, theta, curve, params);
    double f2 = expected_fitness_fixed(x2, theta, curve, params);
    while (b - a > 1e-10) {
        if (f1 >= f2) {  // prefer the left half on ties: smallest p wins
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = expected_fitness_fixed(x1, theta, curve, params);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = expected_fitness_fixed(x2, theta, curve, params);
        }
    }
    double refined = 0.5 * (a + b);
    double refined_value = expected_fitness_fixed(refined, theta, curve, params);
    // A grid endpoint that ties the refined value keeps the smaller p.
    if (grid[win] < refined && values[win] >= refined_value - kValueTol) return grid[win];
    return refined;
}

SingularPoint classify_singular_point(double p_star, double theta, Model model,
                                      const BenefitCurve& curve,
                                      const InteractionParams& params, double fd_step) {
    SingularPoint pt;
    pt.p_star = p_star;
    pt.theta = theta;
    const double d = fd_step;
    if (p_star <= d) {
        pt.kind = SingularPoint::Kind::BoundaryLow;
        const double g = selection_gradient(0.0, theta, model, curve, params).value;
        pt.convergence_stable = g < 0.0;  // flow points into the boundary
        pt.ess = invasion_fitness(d, 0.0, theta, model, curve, params) < 0.0;
        return pt;
    }
    if (p_star >= 1.0 - d) {
        pt.kind = SingularPoint::Kind::BoundaryHigh;
        const double g = selection_gradient(1.0, theta, model, curve, params).value;
        pt.convergence_stable = g > 0.0;
        pt.ess = invasion_fitness(1.0 - d, 1.0, theta, model, curve, params) < 0.0;
        return pt;
    }
    pt.kind = SingularPoint::Kind::Interior;
    const auto s = [&](double f, double g) {
        return invasion_fitness(f, g, theta, model, curve, params);
    };
    const double d2f = (s(p_star + d, p_star) - 2.0 * s(p_star, p_star) + s(p_star - d, p_star)) /
                       (d * d);
    const double d2g = (s(p_star, p_star + d) - 2.0 * s(p_star, p_star) + s(p_star, p_star - d)) /
                       (d * d);
    // Curvature-neutral points (e.g. the saturated regime, where fitness is
    // linear in the mutant strategy) produce pure finite-difference noise in
    // d2f, of order eps*|w|/d^2; require the curvature to clear that floor
    // before calling it an ESS.
    const double w_mag =
        std::max(1.0, std::abs(expected_fitness(model, p_star, p_star, theta, curve, params)));
    const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * w_mag / (d * d);
    pt.ess = d2f < -noise_floor;
    pt.convergence_stable = d2g > d2f;
    return pt;
}

std::vector<SingularPoint> find_singular_points(double theta, Model model,
                                                const BenefitCurve& curve,
                                                const InteractionParams& params,
                                                int scan_resolution) {
    if (scan_resolution < 16) throw std::invalid_argument("scan_resolution must be >= 16");
    const auto grid = linspace(0.0, 1.0, scan_resolution);
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        g[i] = selection_gradient(grid[i], theta, model, curve, params).value;

    std::vector<SingularPoint> points;
    points.push_back(classify_singular_point(0.0, theta, model, curve, params));
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (g[i] == 0.0 && i > 0) {
            points.push_back(classify_singular_point(grid[i], theta, model, curve, params));
            continue;
        }
        if (!(g[i] * g[i + 1] < 0.0)) continue;
        double lo = grid[i], hi = grid[i + 1], glo = g[i];
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            const double gm = selection_gradient(mid, theta, model, curve, params).value;
            if ((glo <= 0.0) == (gm <= 0.0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        if (root > 1e-9 && root < 1.0 - 1e-9)
            points.push_back(classify_singular_point(root, theta, model, curve, params));
    }
    points.push_back(classify_singular_point(1.0, theta, model, curve, params));
    return points;
}

std::vector<double> attracting_strategies(double theta, Model model, const BenefitCurve& curve,
                                          const InteractionParams& params, int scan_resolution) {
    // Attraction decided by the gradient's flow direction around each point,
    // which is robust where finite-difference curvature is noisy.
    if (scan_resolution < 16) throw std::invalid_argument("scan_resolution must be >= 16");
    const auto grid = linspace(0.0, 1.0, scan_resolution);
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        g[i] = selection_gradient(grid[i], theta, model, curve, params).value;

    std::vector<double> result;
    if (g.front() < 0.0) result.push_back(0.0);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(g[i] > 0.0 && g[i + 1] < 0.0)) continue;  // downhill crossing: attractor
        double lo = grid[i], hi = grid[i + 1];
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            if (selection_gradient(mid, theta, model, curve, params).value > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        result.push_back(0.5 * (lo + hi));
    }
    if (g.back() > 0.0) result.push_back(1.0);
    std::sort(result.begin(), result.end());
    return result;
}

PipGrid pip(double theta, Model model, const BenefitCurve& curve,
            const InteractionParams& params, int resolution, int threads) {
    if (resolution < 8) throw std::invalid_argument("resolution must be >= 8");
    constexpr double kSignTol = 1e-12;
    PipGrid grid;
    grid.mutant_axis = linspace(0.0, 1.0, resolution);
    grid.resident_axis = linspace(0.0, 1.0, resolution);
    grid.sign.assign(static_cast<std::size_t>(resolution) * resolution, 0);
    for_each_cell(grid.sign.size(), threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / resolution);
        const int j = static_cast<int>(idx % resolution);
        const double s = invasion_fitness(grid.mutant_axis[i], grid.resident_axis[j], theta,
                                          model, curve, params);
        grid.sign[idx] = s > kSignTol ? 1 : (s < -kSignTol ? -1 : 0);
    });
    return grid;
}

GradientField gradient_field(const std::vector<double>& theta_grid,
                             const std::vector<double>& p_grid, Model model,
                             const BenefitCurve& curve, const InteractionParams& params,
                             int threads) {
    if (theta_grid.empty() || p_grid.empty())
        throw std::invalid_argument("gradient_field grids must be non-empty");
    GradientField field;
    field.theta_axis = theta_grid;
    field.p_axis = p_grid;
    field.samples.resize(theta_grid.size() * p_grid.size());
    for_each_cell(field.samples.size(), threads, [&](std::size_t idx) {
        const std::size_t ti = idx / p_grid.size();
        const std::size_t pi = idx % p_grid.size();
        field.samples[idx] =
            selection_gradient(p_grid[pi], theta_grid[ti], model, curve, params);
    });
    return field;
}

namespace {

void apply_swept_parameter(const std::string& name, double value, InteractionParams& params,
                           BenefitCurve& curve, const InteractionParams& base) {
    if (name == "q_out") {
        params.q_out = value;
    } else if (name == "q_in") {
        params.q_in = value;
    } else if (name == "b_in") {
        params.b_in = value;
    } else if (name == "b_out_gap") {
        params.b_out = params.b_in + value;
    } else if (name == "n") {
        params.n = static_cast<int>(std::lround(value));
    } else if (name == "steepness") {
        curve.steepness = value;
    } else if (name == "slope") {
        curve.slope = value;
    } else if (name == "curvature_exp") {
        curve.kind = CurveKind::PowerCurvature;
        curve.curvature_exp = value;
    } else if (name == "q_out_with_fixed_expectation") {
        // Hold q_out*b_out constant while varying the risk.
        const double expectation = base.q_out * base.b_out;
        params.q_out = value;
        params.b_out = expectation / value;
    } else {
        throw std::invalid_argument("unknown sweep parameter: " + name);
    }
}

}  // namespace

SweepResult sweep(const std::string& parameter, const std::vector<double>& param_grid,
                  const std::vector<double>& theta_grid, Model model, const BenefitCurve& curve,
                  const InteractionParams& params, SweepMode mode, int threads) {
    if (mode == SweepMode::Optimal && model != Model::Fixed)
        throw std::invalid_argument("sweep mode 'optimal' is valid for the fixed model only");
    {
        // Validate the name up front, outside the parallel region.
        InteractionParams p = params;
        BenefitCurve c = curve;
        apply_swept_parameter(parameter, param_grid.empty() ? 0.0 : param_grid.front(), p, c,
                              params);
    }
    SweepResult result;
    result.parameter = parameter;
    result.theta_axis = theta_grid;
    result.param_axis = param_grid;
    result.cells.resize(param_grid.size() * theta_grid.size());
    result.clamped_negative_kernel = curve.kind == CurveKind::PowerCurvature ||
                                     parameter == "curvature_exp";
    for_each_cell(result.cells.size(), threads, [&](std::size_t idx) {
        const std::size_t vi = idx / theta_grid.size();
        const std::size_t ti = idx % theta_grid.size();
        InteractionParams cell_params = params;
        BenefitCurve cell_curve = curve;
        apply_swept_parameter(parameter, param_grid[vi], cell_params, cell_curve, params);
        if (result.clamped_negative_kernel) cell_curve.clamp_negative = true;
        if (mode == SweepMode::Optimal)
            result.cells[idx] = {optimal_strategy(theta_grid[ti], cell_curve, cell_params)};
        else
            result.cells[idx] =
                attracting_strategies(theta_grid[ti], model, cell_curve, cell_params);
    });
    return result;
}

}  // namespace polar
