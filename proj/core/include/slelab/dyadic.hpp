#ifndef SLELAB_DYADIC_HPP
#define SLELAB_DYADIC_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "slelab/conformal.hpp"
#include "slelab/types.hpp"

namespace slelab {

/// Dyadic "square" Q_{n,k} near the unit circle:
///   Q = { r e^{it} : 1 - 2^-n <= r < 1,  k/2^n <= t/(2 pi) <= (k+1)/2^n },
/// with side ell(Q) = 2^-n. T(Q) is the inner half (radial range
/// [1-2^-n, 1-2^-(n+1)]), L(Q) the inner circular segment at r = 1-2^-n.
struct DyadicSquare {
    int n = 1;
    std::int64_t k = 0;

    double side() const { return std::pow(2.0, -n); }
    double inner_radius() const { return 1.0 - std::pow(2.0, -n); }
    double mid_radius() const { return 1.0 - 1.5 * std::pow(2.0, -(n + 1)); }
    double theta_lo() const { return kTwoPi * static_cast<double>(k) / std::pow(2.0, n); }
    double theta_hi() const { return kTwoPi * static_cast<double>(k + 1) / std::pow(2.0, n); }
    /// Midpoint of the outer arc, on the unit circle.
    Complex boundary_center() const {
        return std::polar(1.0, kTwoPi * (static_cast<double>(k) + 0.5) / std::pow(2.0, n));
    }
};

enum class SieveMode { bounded, unbounded, refined };

std::string sieve_mode_name(SieveMode mode);
SieveMode sieve_mode_from_name(const std::string& name);

struct SieveOptions {
    int n_max = 14;
    int quadrature_order = 16;      // base tensor order per square
    int max_quadrature_order = 64;  // adaptive cap near singular behavior
    std::size_t max_total_squares = 1000000;
    std::size_t threads = 0;
};

/// Classified bad-square set for a (map, p, N, mode) triple, plus the
/// Hausdorff-content bound sum ell(Q)^p over the bad set.
struct SieveResult {
    SieveMode mode = SieveMode::bounded;
    double p = 0.0;
    int N = 1;
    int n_max = 1;
    double delta = 0.0;  // refined: 5 t^2, otherwise 0
    double t = 0.0;      // refined: sqrt(1 - p), otherwise 0
    int quadrature_order = 16;
    std::vector<DyadicSquare> bad_squares;
    double content_bound = 0.0;

    std::string to_json() const;
    static SieveResult from_json(const std::string& text);
};

/// Weight integral for one square.
///   bounded:   integral over T(Q) of |f'|^2 dA
///   unbounded: integral over T(Q) of |f' / max(|f| log|f|, 1)|^2 dA
///   refined:   line integral over L(Q) of |f'|^t_exp |dz|
/// Tensor-product midpoint quadrature, adaptively doubled (up to
/// max_quadrature_order) until two consecutive orders agree to 1e-3.
double integrate_weight(const ConformalMap& map, const DyadicSquare& square, SieveMode mode,
                        double t_exp, int quadrature_order, int max_quadrature_order = 64);

/// Scans generations N..n_max and collects the squares whose weight
/// integral exceeds the threshold: ell^p for bounded/unbounded, ell^(p-delta)
/// with delta = 5t^2, t = sqrt(1-p) for refined. Parallel across squares;
/// the bad list is ordered by (n, k) regardless of thread count.
SieveResult classify_squares(const ConformalMap& map, double p, int N, SieveMode mode,
                             const SieveOptions& opts = {});

/// Membership predicate for the good set D = disk minus the bad squares.
class GoodSet {
public:
    explicit GoodSet(const SieveResult& sieve);
    bool contains(Complex z) const;

private:
    std::unordered_set<std::uint64_t> bad_;
    int N_;
    int n_max_;
};

/// Upper bound sum r_i^p for a disc cover (never the infimum).
double hausdorff_content(const std::vector<std::pair<Complex, double>>& cover, double p);

inline constexpr double kDiscCoverFactor = kPi + 1.0;

/// Boundary-centered disc cover of the bad squares: Q_{n,k} is contained in
/// the disc of radius (pi+1) 2^-n about the midpoint of its outer arc.
std::vector<std::pair<Complex, double>> boundary_disc_cover(
    const std::vector<DyadicSquare>& squares);

/// max over sampled z in D of |f'(z)| (1-|z|)^(1 - p/2). The sample set
/// always contains the star center z = 0; callers check stability under
/// doubling `samples`.
double verify_derivative_bound(const ConformalMap& map, const SieveResult& sieve,
                               std::size_t samples, std::uint64_t seed);

struct HolderReport {
    double exponent = 0.0;
    double fitted_constant = 0.0;
    Complex worst_z;
    Complex worst_zp;
    std::size_t pairs = 0;
};

/// Empirical Holder constant sup |f(z)-f(z')| / |z-z'|^exponent over pairs
/// drawn from D. Any two points of D are joined inside D by a
/// radial-circular-radial path, which is what makes the sup finite; the
/// estimate itself is the direct quotient. Half of the pairs are
/// boundary-biased short offsets so that the sup is actually approached.
HolderReport verify_holder(const ConformalMap& map, const SieveResult& sieve, double exponent,
                           std::size_t pairs, std::uint64_t seed);

/// Exponent 1 - 6 sqrt(1-p) of the refined sieve; requires p > 35/36.
double refined_holder_exponent(double p);

struct JohnTriangle {
    double center_angle = 0.0;  // apex direction; disc center e^{i angle}
    double radius = 0.0;        // disc radius r; arc spans B(x, 2r) on the circle
};

struct JohnDomainReport {
    std::vector<JohnTriangle> triangles;
    double john_constant_estimate = 1.0;   // probe estimate, from below
    double holder_exponent_estimate = 1.0; // regression on the boundary map
    std::size_t probes = 0;
};

struct JohnProbeOptions {
    std::size_t probes = 400;
    std::size_t cloud_points = 4000;
    std::size_t boundary_vertices = 1024;
    std::uint64_t seed = 20240901;
};

/// D_eps = disk minus inward "teeth" T(x_i, r_i) (arc of B(x_i, 2 r_i) on
/// the circle plus two segments to (1-2 r_i) x_i). John constant probed
/// with random chords; Holder exponent regressed on a boundary-fitted map
/// of the polygonized domain.
JohnDomainReport probe_john_domain(const std::vector<JohnTriangle>& triangles,
                                   const JohnProbeOptions& opts = {});

/// Teeth derived from the sieve's boundary disc cover.
JohnDomainReport build_john_domain(const SieveResult& sieve, const JohnProbeOptions& opts = {});

} // namespace slelab

#endif
