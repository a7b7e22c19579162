#include "slelab/boundary_flow.hpp"

#include <cmath>

#include "slelab/rng.hpp"
#include "slelab/types.hpp"

namespace slelab {

// In the time change s = integral dt / gap^2, the log of the distance proxy
// gap/g' is exactly a Brownian motion with drift 4 - kappa/2 and variance
// kappa per unit s. A uniform capacity grid resolves that clock only while
// the per-step driving jump sqrt(kappa dt) is small against the gap. When a
// step stops resolving (gap < 6 sqrt(kappa dt)), the minimum of the
// target's remaining life is sampled from the exact law of the minimum of
// that drifted Brownian motion,
//     P[ future min < m e^{-a} ] = exp(-(8-kappa)/kappa * a),
// instead of stepping through the crash. This keeps the boundary-exponent
// tail of the closest approach exact; what is given up is the trace
// geometry after the hand-off (the run is past its last resolved scale) and
// the cap at the time horizon, both negligible for the ratio statistics
// consumed downstream. For kappa >= 8 the drift is nonpositive and the
// future minimum is 0 (space filling).
namespace {

constexpr double kTriggerFactor = 36.0; // hand off when gap^2 < factor * kappa * dt

double endgame_min(double m_now, double kappa, double u) {
    if (kappa >= 8.0) return 0.0;
    if (kappa <= 0.0) return m_now;
    // V = m_min / m_now has P[V < v] = v^{(8-kappa)/kappa}.
    return m_now * std::pow(u, kappa / (8.0 - kappa));
}

// Endgame uniforms are shared across targets per (trace, step): targets
// whose flows are still glued together when they hand off receive the same
// relative dip, which preserves the co-hit clusters of the true distance
// field. Marginals are unaffected.
double endgame_uniform(std::uint64_t trace_seed, std::size_t step) {
    std::uint64_t s = (trace_seed ^ 0xE63D5C0AFA57ULL) + 0x9E3779B97F4A7C15ULL * step;
    return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

} // namespace

void chordal_flow_min_distance(const DrivingFunction& w, const std::vector<double>& targets,
                               std::vector<double>& min_dist,
                               std::vector<std::uint8_t>* swallowed) {
    if (w.kind != TraceKind::chordal)
        throw ParameterError("chordal flow: driving function is not chordal");
    const std::size_t m = targets.size();
    min_dist.assign(m, 0.0);
    if (swallowed) swallowed->assign(m, 0);
    const std::size_t steps = w.steps();

    for (std::size_t i = 0; i < m; ++i) {
        double x = targets[i] - w.values[0];
        const double sign = x > 0 ? 1.0 : -1.0;
        double ginv = 1.0;
        double best = std::abs(x);
        bool alive = x != 0.0;

        for (std::size_t j = 1; j <= steps && alive; ++j) {
            const double dt = w.times[j] - w.times[j - 1];
            if (x * x < kTriggerFactor * w.kappa * dt) {
                const double fin = endgame_min(std::abs(x) * ginv, w.kappa,
                                               endgame_uniform(w.seed, j));
                if (fin < best) best = fin;
                alive = false;
                break;
            }
            x -= w.values[j] - w.values[j - 1];
            const double d = std::abs(x) * ginv;
            if (d < best) best = d;
            if (x * sign <= 0.0) {
                alive = false;
                break;
            }
            const double ax0 = std::abs(x);
            const double ax1 = std::sqrt(x * x + 4.0 * dt);
            ginv *= ax1 / ax0;
            x = sign * ax1;
            if (ginv > 1e250) alive = false;
        }
        min_dist[i] = best;
        if (swallowed && !alive && w.kappa > 4.0) (*swallowed)[i] = 1;
    }
}

void radial_flow_min_distance(const DrivingFunction& w, const std::vector<double>& target_angles,
                              std::vector<double>& min_dist,
                              std::vector<std::uint8_t>* swallowed) {
    if (w.kind != TraceKind::radial)
        throw ParameterError("radial flow: driving function is not radial");
    const std::size_t m = target_angles.size();
    min_dist.assign(m, 0.0);
    if (swallowed) swallowed->assign(m, 0);
    const std::size_t steps = w.steps();

    for (std::size_t i = 0; i < m; ++i) {
        double gap = std::fmod(target_angles[i] - w.values[0], kTwoPi);
        if (gap < 0) gap += kTwoPi;
        double c = std::cos(0.5 * gap);
        double s = std::sin(0.5 * gap);
        double ginv = 1.0;
        double best = 2.0 * s; // chord distance to the seed point
        bool alive = s > 0.0;

        for (std::size_t j = 1; j <= steps && alive; ++j) {
            const double dt = w.times[j] - w.times[j - 1];
            // Chord gap 2s plays the role of the chordal gap; the radial
            // drift matches the chordal one to O(gap^2) at this scale.
            if (4.0 * s * s < kTriggerFactor * w.kappa * dt) {
                const double fin = endgame_min(2.0 * s * ginv, w.kappa,
                                               endgame_uniform(w.seed, j));
                if (fin < best) best = fin;
                alive = false;
                break;
            }
            double dw = w.values[j] - w.values[j - 1];
            if (dw > kPi) dw -= kTwoPi;
            if (dw < -kPi) dw += kTwoPi;
            const double cd = std::cos(0.5 * dw);
            const double sd = std::sin(0.5 * dw);
            const double c1 = c * cd + s * sd;
            const double s1 = s * cd - c * sd;
            const double d = 2.0 * std::abs(s1) * ginv;
            if (d < best) best = d;
            if (s1 <= 0.0) {
                alive = false;
                break;
            }
            // Exact constant-driving drift: cos(gap/2) decays by e^{-dt/2};
            // |g'| picks up the factor s1 / sqrt(e^dt - c1^2).
            const double drift = std::exp(-0.5 * dt);
            const double c2 = drift * c1;
            ginv *= std::sqrt(std::exp(dt) - c1 * c1) / s1;
            c = c2;
            s = std::sqrt(1.0 - c2 * c2);
            if (ginv > 1e250) alive = false;
        }
        min_dist[i] = best;
        if (swallowed && !alive && w.kappa > 4.0) (*swallowed)[i] = 1;
    }
}

} // namespace slelab
