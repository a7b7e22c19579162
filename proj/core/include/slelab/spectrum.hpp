#ifndef SLELAB_SPECTRUM_HPP
#define SLELAB_SPECTRUM_HPP

#include <string>
#include <vector>

#include "slelab/conformal.hpp"
#include "slelab/types.hpp"

namespace slelab {

struct SpectrumOptions {
    int j_min = 4;   // radii 1 - 2^-j
    int j_max = 12;
    std::size_t min_circle_points = 4096;
    std::size_t max_circle_points = 131072;
    std::size_t threads = 0;
};

/// Regression estimate of the integral means growth exponent: means(r) is
/// the circle integral of |f'|^t and beta_hat the least-squares slope of
/// log means against log 1/(1-r) over dyadic radii. Raw slope, no clamping.
struct SpectrumEstimate {
    double t = 0.0;
    std::vector<double> radii;
    std::vector<double> means;
    double beta_hat = 0.0;
    double r_squared = 0.0;
    bool precision_warning = false;  // circle quadrature unconverged somewhere
    bool low_confidence = false;     // r_squared < 0.9
    bool map_bounded = true;

    std::string to_csv() const;   // radius,mean rows
    std::string to_json() const;  // header {t, beta_hat, r_squared, ...}
};

/// Trapezoid circle integrals of |f'|^t at the given radii. The point count
/// per circle grows like 16/(1-r) (clamped to the configured range); a
/// result that still moves more than 1% under point doubling gets the
/// precision warning.
std::vector<double> integral_means(const ConformalMap& map, double t,
                                   const std::vector<double>& radii,
                                   const SpectrumOptions& opts = {},
                                   bool* precision_warning = nullptr);

SpectrumEstimate estimate_beta(const ConformalMap& map, double t,
                               const SpectrumOptions& opts = {});

struct UniversalBoundCheck {
    double margin = 0.0;  // 4 t^2 - beta_hat
    bool pass = false;    // margin > -tolerance
    double tolerance = 0.1;
};

/// Checks beta_hat against the universal bound 4 t^2. A genuine violation
/// beyond regression bias indicates an estimator bug, not a counterexample.
UniversalBoundCheck check_universal_bound(const SpectrumEstimate& estimate,
                                          double tolerance = 0.1);

struct JohnDimensionResult {
    double kappa = 0.0;
    double d = 0.0;
    bool at_lower_bound = false;  // spectrum too flat; d collapsed to 2 - 8/kappa
    bool monotone_ok = true;      // F was monotone on the probe grid
    double r_squared_min = 1.0;
    std::string note;
};

/// Bisection solve of beta_f(d) = d - (2 - 8/kappa) on (2 - 8/kappa + 0.01, 2),
/// tolerance 1e-3 in d. kappa in (4, 8]. When F < 0 on the whole bracket the
/// solution collapses to the lower endpoint 2 - 8/kappa and is flagged.
JohnDimensionResult solve_john_dimension(const ConformalMap& map, double kappa,
                                         const SpectrumOptions& opts = {});

struct CoveringSum {
    double t = 0.0;
    double kappa = 0.0;
    std::vector<int> generations;
    std::vector<double> terms;  // 2^{-n(t-2+8/kappa)} * circle mean at 1-2^-n
    std::vector<double> cumulative;
    double decay_ratio = 1.0;  // fitted per-generation factor
    bool convergent = false;   // geometric decay observed (ratio < 0.98)
};

/// Per-generation covering terms for the expected boundary content of the
/// mapped trace; decays geometrically exactly when beta_f(t) < t - (2-8/kappa).
CoveringSum covering_sum(const ConformalMap& map, double t, double kappa, int N, int n_max,
                         const SpectrumOptions& opts = {});

struct DimensionBound {
    double kappa = 0.0;
    double p = 0.0;  // 8/kappa - 1
    double a = 0.0;  // lower-bound exponent, equals p
    bool refined_applicable = false;
    double branch_refined = 0.0;  // 1 / (1 - 6 sqrt(1-p)) when applicable
    double c = 0.01;              // free constants, echoed from config
    double alpha = 0.1;
    double branch_symbolic = 0.0;  // 2 - c*alpha*p/2
    bool has_john_branch = false;
    double branch_john = 0.0;

    std::string to_json() const;
};

/// Bound branches for the boundary-intersection dimension d(kappa),
/// kappa in (4, 8). The refined branch exists iff 6 sqrt(1-p) < 1
/// (p > 35/36). Free constants (c, alpha) are inputs and echoed.
DimensionBound dkappa_bounds(double kappa, double c = 0.01, double alpha = 0.1);

} // namespace slelab

#endif
