#ifndef SLELAB_BOUNDARY_STATS_HPP
#define SLELAB_BOUNDARY_STATS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "slelab/conformal.hpp"
#include "slelab/types.hpp"

namespace slelab {

/// Discretization for the Monte Carlo flow experiments. Traces are run to
/// capacity `horizon` with n_steps uniform steps; distinct traces use
/// derived seeds and may run fully in parallel.
struct FlowOptions {
    double horizon = 2.0;
    std::size_t n_steps = 30000;
    std::size_t threads = 0;
};

struct HittingEstimate {
    double radius = 0.0;
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t hits = 0;
};

/// Hitting statistics for one boundary disc family, all radii evaluated on
/// the same trace set (common random numbers, so estimates are monotone in
/// the radius by construction).
struct HittingCurve {
    double kappa = 0.0;
    double center_angle = 0.0;
    double delta = 0.5;
    std::size_t n_traces = 0;
    std::uint64_t seed = 0;
    std::vector<HittingEstimate> per_radius;
};

/// Fraction of radial SLE traces entering B(e^{i center_angle}, radius),
/// with binomial standard errors. Requires delta < |center_angle| < pi-delta
/// and radius < delta/2; radius >= 2 covers the whole disk and is allowed
/// as the trivial case. kappa in (0, 8): values <= 4 are legitimate
/// control runs (the trace avoids the boundary).
HittingCurve hitting_curve(double kappa, double center_angle, std::vector<double> radii,
                           std::size_t n_traces, std::uint64_t seed, double delta = 0.5,
                           const FlowOptions& flow = {});

HittingEstimate hitting_probability(double kappa, double center_angle, double radius,
                                    std::size_t n_traces, std::uint64_t seed, double delta = 0.5,
                                    const FlowOptions& flow = {});

struct LineDimensionResult {
    double kappa = 0.0;
    std::size_t n_traces = 0;
    std::vector<double> scales;      // box sides eta
    std::vector<double> mean_boxes;  // boxes touched per trace, averaged
    double slope = 0.0;              // vs log 1/eta
    double r_squared = 0.0;
    bool degenerate = false;  // no meaningful boundary visits (kappa <= 4)
};

/// Box-counting estimate of dim(trace intersect R) for chordal SLE: boxes of
/// side eta along [-2, 2] are counted when the trace approaches their center
/// within eta, per trace, then averaged (so the count scales like
/// eta^-1 * P(hit) and the slope estimates the intersection dimension).
LineDimensionResult boundary_line_dimension(double kappa, std::size_t n_traces,
                                            std::vector<double> scales, std::uint64_t seed,
                                            const FlowOptions& flow = {});

/// Discrete measure on [1, 2] with a declared support dimension.
struct FrostmanMeasure {
    std::vector<double> atoms;
    std::vector<double> weights;
    double support_dimension = 0.0;
    std::string name;

    static FrostmanMeasure cantor_middle_thirds(int stage);
    static FrostmanMeasure uniform_grid(std::size_t n_atoms);
    static FrostmanMeasure point_mass(double x);

    double total_mass() const;
    /// Discrete a-energy: sum over i != j of w_i w_j |x_i - x_j|^-a.
    double energy(double a) const;
};

struct FrostmanResult {
    double kappa = 0.0;
    double a = 0.0;        // 8/kappa - 1
    bool feasible = false; // support_dimension > a
    double energy = 0.0;
    std::vector<double> eps;
    std::vector<double> first_moment;   // E[mu(C_eps)]
    std::vector<double> second_moment;  // E[mu(C_eps)^2]
    std::vector<double> moment_ratio;   // second / first^2
    std::vector<std::size_t> positive_traces;
    std::size_t n_traces = 0;
    bool insufficient = false;  // some eps had zero first moment
};

/// Second-moment table for mu(C_eps), C_eps = points of [1,2] approached
/// within eps by the chordal trace. Boundedness of the ratio across eps is
/// the check; E[mu]^2 <= E[mu^2] holds exactly for the empirical averages.
FrostmanResult frostman_second_moment(const FrostmanMeasure& measure, double kappa,
                                      std::vector<double> eps_list, std::size_t n_traces,
                                      std::uint64_t seed, const FlowOptions& flow = {});

struct TraceBoundaryResult {
    double kappa = 0.0;
    std::size_t n_traces = 0;
    std::size_t n_targets = 0;
    std::vector<double> scales;  // relative to the target-domain diameter
    std::vector<double> mean_boxes;
    double slope = 0.0;
    double r_squared = 0.0;
    bool degenerate = false;
};

/// Box-counting slope of f(trace) near the image boundary for a disk-source
/// map f. Boundary targets are flowed in the disk; each closest approach d
/// is converted to an image-side scale d * |f'| at the matching Whitney
/// point, which is distance-comparable by Koebe distortion.
TraceBoundaryResult trace_boundary_dimension(const ConformalMap& map, double kappa,
                                             std::size_t n_traces,
                                             std::vector<double> rel_scales,
                                             std::size_t n_targets, std::uint64_t seed,
                                             const FlowOptions& flow = {});

} // namespace slelab

#endif
