#include "slelab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "slelab/geometry.hpp"
#include "slelab/io.hpp"
#include "slelab/parallel.hpp"

namespace slelab {

using nlohmann::json;

namespace {

std::size_t circle_points(double r, const SpectrumOptions& opts) {
    const double want = 16.0 / std::max(1e-9, 1.0 - r);
    std::size_t n = opts.min_circle_points;
    while (n < want && n < opts.max_circle_points) n *= 2;
    return n;
}

/// Caches log|f'| on the quadrature circles so that means for many
/// exponents t reuse one expensive sampling pass (bisection in
/// solve_john_dimension hammers this).
class CircleDerivCache {
public:
    CircleDerivCache(const ConformalMap& map, std::vector<double> radii,
                     const SpectrumOptions& opts)
        : radii_(std::move(radii)) {
        grids_.resize(radii_.size());
        parallel_for(radii_.size(), opts.threads, [&](std::size_t i) {
            const double r = radii_[i];
            const std::size_t n = circle_points(r, opts);
            auto& g = grids_[i];
            g.resize(n);
            for (std::size_t k = 0; k < n; ++k) {
                const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
                g[k] = std::log(std::abs(map.deriv(std::polar(r, th))));
            }
        });
    }

    /// Trapezoid mean at radius index i; also reports the half-resolution
    /// value (even-index subsample) for the convergence check.
    double mean(std::size_t i, double t, double* half = nullptr) const {
        const auto& g = grids_[i];
        const std::size_t n = g.size();
        double sum = 0.0, sum_even = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = std::exp(t * g[k]);
            sum += v;
            if ((k & 1) == 0) sum_even += v;
        }
        const double r = radii_[i];
        if (half) *half = sum_even * r * kTwoPi / static_cast<double>(n / 2);
        return sum * r * kTwoPi / static_cast<double>(n);
    }

    const std::vector<double>& radii() const { return radii_; }

private:
    std::vector<double> radii_;
    std::vector<std::vector<double>> grids_;
};

std::vector<double> dyadic_radii(int j_min, int j_max) {
    std::vector<double> r;
    for (int j = j_min; j <= j_max; ++j) r.push_back(1.0 - std::pow(2.0, -j));
    return r;
}

SpectrumEstimate estimate_from_cache(const CircleDerivCache& cache, double t, bool bounded) {
    SpectrumEstimate est;
    est.t = t;
    est.map_bounded = bounded;
    est.radii = cache.radii();
    est.means.resize(est.radii.size());
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < est.radii.size(); ++i) {
        double half = 0.0;
        est.means[i] = cache.mean(i, t, &half);
        if (std::abs(est.means[i] - half) > 0.01 * std::abs(est.means[i]))
            est.precision_warning = true;
        xs.push_back(std::log(1.0 / (1.0 - est.radii[i])));
        ys.push_back(std::log(est.means[i]));
    }
    const LineFit fit = fit_line(xs, ys);
    est.beta_hat = fit.slope;
    est.r_squared = fit.r_squared;
    est.low_confidence = est.r_squared < 0.9;
    return est;
}

} // namespace

std::vector<double> integral_means(const ConformalMap& map, double t,
                                   const std::vector<double>& radii,
                                   const SpectrumOptions& opts, bool* precision_warning) {
    for (double r : radii)
        if (!(r > 0.0 && r < 1.0))
            throw ParameterError("integral_means: radii must lie in (0, 1)");
    if (opts.min_circle_points < 4096)
        throw ParameterError("integral_means: need at least 2^12 circle points");
    const CircleDerivCache cache(map, radii, opts);
    std::vector<double> means(radii.size());
    bool warn = false;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double half = 0.0;
        means[i] = cache.mean(i, t, &half);
        if (std::abs(means[i] - half) > 0.01 * std::abs(means[i])) warn = true;
    }
    if (precision_warning) *precision_warning = warn;
    return means;
}

SpectrumEstimate estimate_beta(const ConformalMap& map, double t, const SpectrumOptions& opts) {
    const CircleDerivCache cache(map, dyadic_radii(opts.j_min, opts.j_max), opts);
    return estimate_from_cache(cache, t, map.bounded_target());
}

UniversalBoundCheck check_universal_bound(const SpectrumEstimate& estimate, double tolerance) {
    if (estimate.low_confidence)
        throw ParameterError("check_universal_bound: estimate has r_squared < 0.9");
    UniversalBoundCheck chk;
    chk.tolerance = tolerance;
    chk.margin = 4.0 * estimate.t * estimate.t - estimate.beta_hat;
    chk.pass = chk.margin > -tolerance;
    return chk;
}

JohnDimensionResult solve_john_dimension(const ConformalMap& map, double kappa,
                                         const SpectrumOptions& opts) {
    if (!(kappa > 4.0 && kappa <= 8.0))
        throw ParameterError("solve_john_dimension: kappa must be in (4, 8]");
    if (!map.bounded_target())
        throw ParameterError("solve_john_dimension: map must target a bounded (John) domain");

    const double offset = 2.0 - 8.0 / kappa;
    const double lo = offset + 0.01;
    const double hi = 2.0;

    const CircleDerivCache cache(map, dyadic_radii(opts.j_min, opts.j_max), opts);

    JohnDimensionResult res;
    res.kappa = kappa;
    auto F = [&](double d) {
        const SpectrumEstimate est = estimate_from_cache(cache, d, true);
        res.r_squared_min = std::min(res.r_squared_min, est.r_squared);
        return est.beta_hat - d + offset;
    };

    // Monotonicity probe of F on the bracket.
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i <= 4; ++i) {
        const double d = lo + (hi - lo) * i / 4.0;
        const double v = F(d);
        if (i > 0 && v > prev + 1e-9) res.monotone_ok = false;
        prev = v;
    }

    double f_lo = F(lo), f_hi = F(hi);
    if (f_lo <= 0.0) {
        res.d = offset;
        res.at_lower_bound = true;
        res.note = "spectrum too flat on the bracket; dimension collapses to 2 - 8/kappa";
        return res;
    }
    if (f_hi >= 0.0) {
        res.d = hi;
        res.note = "no sign change below 2; spectrum exceeds the covering line everywhere";
        return res;
    }
    double a = lo, b = hi;
    while (b - a > 1e-3) {
        const double mid = 0.5 * (a + b);
        (F(mid) > 0.0 ? a : b) = mid;
    }
    res.d = 0.5 * (a + b);
    if (res.d <= offset + 0.02) {
        // An interval-boundary root: the bound collapses to the flat-domain
        // value 2 - 8/kappa within regression resolution.
        res.at_lower_bound = true;
        res.note = "root within resolution of the lower endpoint 2 - 8/kappa";
    }
    return res;
}

CoveringSum covering_sum(const ConformalMap& map, double t, double kappa, int N, int n_max,
                         const SpectrumOptions& opts) {
    if (!(kappa > 4.0 && kappa <= 8.0))
        throw ParameterError("covering_sum: kappa must be in (4, 8]");
    if (!(t > 2.0 - 8.0 / kappa))
        throw ParameterError("covering_sum: t must exceed 2 - 8/kappa");
    if (N < 1 || n_max < N) throw ParameterError("covering_sum: bad generation range");

    std::vector<double> radii;
    for (int n = N; n <= n_max; ++n) radii.push_back(1.0 - std::pow(2.0, -n));
    const CircleDerivCache cache(map, radii, opts);

    CoveringSum cs;
    cs.t = t;
    cs.kappa = kappa;
    const double expo = t - 2.0 + 8.0 / kappa;
    double running = 0.0;
    for (int n = N; n <= n_max; ++n) {
        const double term = std::pow(2.0, -static_cast<double>(n) * expo) *
                            cache.mean(static_cast<std::size_t>(n - N), t);
        cs.generations.push_back(n);
        cs.terms.push_back(term);
        running += term;
        cs.cumulative.push_back(running);
    }
    if (cs.terms.size() >= 2) {
        const double first = cs.terms.front(), last = cs.terms.back();
        cs.decay_ratio = std::pow(last / first,
                                  1.0 / static_cast<double>(cs.terms.size() - 1));
    }
    cs.convergent = cs.decay_ratio < 0.98;
    return cs;
}

DimensionBound dkappa_bounds(double kappa, double c, double alpha) {
    if (!(kappa > 4.0 && kappa < 8.0))
        throw ParameterError("dkappa_bounds: kappa must be in (4, 8)");
    DimensionBound b;
    b.kappa = kappa;
    b.p = 8.0 / kappa - 1.0;
    b.a = b.p;
    const double root6 = 6.0 * std::sqrt(1.0 - b.p);
    b.refined_applicable = root6 < 1.0;
    b.branch_refined = b.refined_applicable ? 1.0 / (1.0 - root6)
                                            : std::numeric_limits<double>::quiet_NaN();
    b.c = c;
    b.alpha = alpha;
    b.branch_symbolic = 2.0 - c * alpha * b.p / 2.0;
    return b;
}

std::string SpectrumEstimate::to_csv() const {
    std::ostringstream out;
    out << "radius,mean\n";
    for (std::size_t i = 0; i < radii.size(); ++i)
        out << format_g17(radii[i]) << ',' << format_g17(means[i]) << '\n';
    return out.str();
}

std::string SpectrumEstimate::to_json() const {
    json j = {{"t", t},
              {"beta_hat", beta_hat},
              {"r_squared", r_squared},
              {"precision_warning", precision_warning},
              {"low_confidence", low_confidence},
              {"map_bounded", map_bounded}};
    return j.dump(2);
}

std::string DimensionBound::to_json() const {
    json j = {{"kappa", kappa},
              {"p", p},
              {"a", a},
              {"refined_applicable", refined_applicable},
              {"c", c},
              {"alpha", alpha},
              {"branch_symbolic", branch_symbolic}};
    j["branch_refined"] = refined_applicable ? json(branch_refined) : json();
    if (has_john_branch) j["branch_john"] = branch_john;
    return j.dump(2);
}

} // namespace slelab
