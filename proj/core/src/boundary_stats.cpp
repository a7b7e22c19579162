#include "slelab/boundary_stats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "slelab/boundary_flow.hpp"
#include "slelab/geometry.hpp"
#include "slelab/parallel.hpp"
#include "slelab/rng.hpp"

namespace slelab {

namespace {

constexpr std::size_t kChunks = 256;

void check_kappa_open(double kappa, const char* what, double hi_open) {
    if (!(kappa > 0.0) || !(kappa < hi_open) || !std::isfinite(kappa))
        throw ParameterError(std::string(what) + ": kappa out of range");
}

double wrap_pi(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w > kPi) w -= kTwoPi;
    if (w < -kPi) w += kTwoPi;
    return w;
}

} // namespace

HittingCurve hitting_curve(double kappa, double center_angle, std::vector<double> radii,
                           std::size_t n_traces, std::uint64_t seed, double delta,
                           const FlowOptions& flow) {
    check_kappa_open(kappa, "hitting", 8.0);
    if (!(delta > 0.0 && delta < kPi / 2.0))
        throw ParameterError("hitting: delta must be in (0, pi/2)");
    const double t_abs = std::abs(wrap_pi(center_angle));
    if (!(t_abs > delta && t_abs < kPi - delta))
        throw ParameterError("hitting: need delta < |center angle| < pi - delta");
    if (n_traces == 0) throw ParameterError("hitting: n_traces must be > 0");
    for (double r : radii) {
        if (!(r > 0.0)) throw ParameterError("hitting: radius must be > 0");
        if (r < 2.0 && !(r < delta / 2.0))
            throw ParameterError("hitting: radius must be < delta/2 (or >= 2 for the whole disk)");
    }

    std::vector<std::size_t> hits(radii.size(), 0);
    std::vector<std::vector<std::size_t>> chunk_hits(kChunks,
                                                     std::vector<std::size_t>(radii.size(), 0));

    parallel_chunks(n_traces, kChunks, flow.threads,
                    [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
                        std::vector<double> target{center_angle};
                        std::vector<double> dist;
                        for (std::size_t i = lo; i < hi; ++i) {
                            const DrivingFunction w =
                                sample_driving(kappa, flow.horizon, flow.n_steps,
                                               derive_stream_seed(seed, i))
                                    .as_radial(0.0);
                            radial_flow_min_distance(w, target, dist);
                            for (std::size_t r = 0; r < radii.size(); ++r)
                                if (dist[0] <= radii[r]) ++chunk_hits[chunk][r];
                        }
                    });
    for (const auto& ch : chunk_hits)
        for (std::size_t r = 0; r < radii.size(); ++r) hits[r] += ch[r];

    HittingCurve curve;
    curve.kappa = kappa;
    curve.center_angle = center_angle;
    curve.delta = delta;
    curve.n_traces = n_traces;
    curve.seed = seed;
    const double n = static_cast<double>(n_traces);
    for (std::size_t r = 0; r < radii.size(); ++r) {
        HittingEstimate e;
        e.radius = radii[r];
        e.hits = hits[r];
        e.estimate = static_cast<double>(hits[r]) / n;
        e.standard_error = std::sqrt(std::max(e.estimate * (1.0 - e.estimate), 0.0) / n);
        curve.per_radius.push_back(e);
    }
    return curve;
}

HittingEstimate hitting_probability(double kappa, double center_angle, double radius,
                                    std::size_t n_traces, std::uint64_t seed, double delta,
                                    const FlowOptions& flow) {
    return hitting_curve(kappa, center_angle, {radius}, n_traces, seed, delta, flow)
        .per_radius.front();
}

LineDimensionResult boundary_line_dimension(double kappa, std::size_t n_traces,
                                            std::vector<double> scales, std::uint64_t seed,
                                            const FlowOptions& flow) {
    check_kappa_open(kappa, "line dimension", 8.0 + 1e-12);
    if (scales.empty() || n_traces == 0)
        throw ParameterError("line dimension: need scales and traces");
    std::sort(scales.begin(), scales.end(), std::greater<>());
    for (double s : scales)
        if (!(s > 0.0 && s < 1.0))
            throw ParameterError("line dimension: scales must be in (0, 1)");

    // Each scale counts its own box centers: "trace enters the box" becomes
    // "closest approach to the center is below eta", a pure per-target
    // marginal (covering-equivalent up to constant factors).
    std::vector<double> targets;
    std::vector<std::pair<std::size_t, std::size_t>> scale_range; // [begin, end)
    for (double eta : scales) {
        const auto n_boxes = static_cast<std::size_t>(std::llround(4.0 / eta));
        const std::size_t begin = targets.size();
        for (std::size_t b = 0; b < n_boxes; ++b)
            targets.push_back(-2.0 + (static_cast<double>(b) + 0.5) * eta);
        scale_range.emplace_back(begin, targets.size());
    }

    std::vector<std::vector<double>> chunk_sums(kChunks,
                                                std::vector<double>(scales.size(), 0.0));

    parallel_chunks(n_traces, kChunks, flow.threads,
                    [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
                        std::vector<double> dist;
                        for (std::size_t i = lo; i < hi; ++i) {
                            const DrivingFunction w = sample_driving(
                                kappa, flow.horizon, flow.n_steps, derive_stream_seed(seed, i));
                            chordal_flow_min_distance(w, targets, dist);
                            for (std::size_t s = 0; s < scales.size(); ++s) {
                                std::size_t count = 0;
                                for (std::size_t k = scale_range[s].first;
                                     k < scale_range[s].second; ++k)
                                    if (dist[k] <= scales[s]) ++count;
                                chunk_sums[chunk][s] += static_cast<double>(count);
                            }
                        }
                    });

    LineDimensionResult res;
    res.kappa = kappa;
    res.n_traces = n_traces;
    res.scales = scales;
    res.mean_boxes.assign(scales.size(), 0.0);
    for (std::size_t c = 0; c < kChunks; ++c)
        for (std::size_t s = 0; s < scales.size(); ++s)
            res.mean_boxes[s] += chunk_sums[c][s];
    for (double& v : res.mean_boxes) v /= static_cast<double>(n_traces);

    std::vector<double> xs, ys;
    for (std::size_t s = 0; s < scales.size(); ++s) {
        if (res.mean_boxes[s] <= 0.0) continue;
        xs.push_back(std::log(1.0 / scales[s]));
        ys.push_back(std::log(res.mean_boxes[s]));
    }
    res.degenerate = kappa <= 4.0 || xs.size() < 2 || res.mean_boxes.back() < 0.5;
    if (xs.size() >= 2) {
        const LineFit fit = fit_line(xs, ys);
        res.slope = fit.slope;
        res.r_squared = fit.r_squared;
    }
    return res;
}

FrostmanMeasure FrostmanMeasure::cantor_middle_thirds(int stage) {
    if (stage < 0 || stage > 16) throw ParameterError("cantor measure: stage must be in [0, 16]");
    std::vector<std::pair<double, double>> intervals{{1.0, 1.0}}; // (left, length)
    for (int s = 0; s < stage; ++s) {
        std::vector<std::pair<double, double>> next;
        next.reserve(intervals.size() * 2);
        for (const auto& [a, len] : intervals) {
            next.emplace_back(a, len / 3.0);
            next.emplace_back(a + 2.0 * len / 3.0, len / 3.0);
        }
        intervals = std::move(next);
    }
    FrostmanMeasure m;
    m.name = "cantor";
    m.support_dimension = std::log(2.0) / std::log(3.0);
    const double w = 1.0 / static_cast<double>(intervals.size());
    for (const auto& [a, len] : intervals) {
        m.atoms.push_back(a + len / 2.0);
        m.weights.push_back(w);
    }
    return m;
}

FrostmanMeasure FrostmanMeasure::uniform_grid(std::size_t n_atoms) {
    if (n_atoms == 0) throw ParameterError("uniform measure: need atoms");
    FrostmanMeasure m;
    m.name = "uniform";
    m.support_dimension = 1.0;
    for (std::size_t i = 0; i < n_atoms; ++i) {
        m.atoms.push_back(1.0 + (static_cast<double>(i) + 0.5) / static_cast<double>(n_atoms));
        m.weights.push_back(1.0 / static_cast<double>(n_atoms));
    }
    return m;
}

FrostmanMeasure FrostmanMeasure::point_mass(double x) {
    if (!(x >= 1.0 && x <= 2.0)) throw ParameterError("point mass: x must be in [1, 2]");
    FrostmanMeasure m;
    m.name = "point";
    m.support_dimension = 0.0;
    m.atoms.push_back(x);
    m.weights.push_back(1.0);
    return m;
}

double FrostmanMeasure::total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double FrostmanMeasure::energy(double a) const {
    double e = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = i + 1; j < atoms.size(); ++j)
            e += 2.0 * weights[i] * weights[j] * std::pow(std::abs(atoms[i] - atoms[j]), -a);
    return e;
}

FrostmanResult frostman_second_moment(const FrostmanMeasure& measure, double kappa,
                                      std::vector<double> eps_list, std::size_t n_traces,
                                      std::uint64_t seed, const FlowOptions& flow) {
    check_kappa_open(kappa, "frostman", 8.0);
    if (measure.atoms.empty() || measure.atoms.size() != measure.weights.size())
        throw ParameterError("frostman: malformed measure");
    if (!(measure.total_mass() > 0.0)) throw ParameterError("frostman: total mass must be > 0");
    for (double x : measure.atoms)
        if (!(x >= 1.0 && x <= 2.0)) throw ParameterError("frostman: atoms must lie in [1, 2]");
    if (eps_list.empty() || n_traces == 0)
        throw ParameterError("frostman: need eps values and traces");
    std::sort(eps_list.begin(), eps_list.end(), std::greater<>());

    FrostmanResult res;
    res.kappa = kappa;
    res.a = 8.0 / kappa - 1.0;
    res.feasible = measure.support_dimension > res.a;
    res.energy = measure.energy(res.a);
    res.eps = eps_list;
    res.n_traces = n_traces;

    const std::size_t ne = eps_list.size();
    std::vector<std::vector<double>> chunk_m1(kChunks, std::vector<double>(ne, 0.0));
    std::vector<std::vector<double>> chunk_m2(kChunks, std::vector<double>(ne, 0.0));
    std::vector<std::vector<std::size_t>> chunk_pos(kChunks, std::vector<std::size_t>(ne, 0));

    parallel_chunks(n_traces, kChunks, flow.threads,
                    [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
                        std::vector<double> dist;
                        for (std::size_t i = lo; i < hi; ++i) {
                            const DrivingFunction w = sample_driving(
                                kappa, flow.horizon, flow.n_steps, derive_stream_seed(seed, i));
                            chordal_flow_min_distance(w, measure.atoms, dist);
                            for (std::size_t e = 0; e < ne; ++e) {
                                double mu = 0.0;
                                for (std::size_t k = 0; k < dist.size(); ++k)
                                    if (dist[k] <= eps_list[e]) mu += measure.weights[k];
                                chunk_m1[chunk][e] += mu;
                                chunk_m2[chunk][e] += mu * mu;
                                if (mu > 0.0) ++chunk_pos[chunk][e];
                            }
                        }
                    });

    res.first_moment.assign(ne, 0.0);
    res.second_moment.assign(ne, 0.0);
    res.positive_traces.assign(ne, 0);
    for (std::size_t c = 0; c < kChunks; ++c) {
        for (std::size_t e = 0; e < ne; ++e) {
            res.first_moment[e] += chunk_m1[c][e];
            res.second_moment[e] += chunk_m2[c][e];
            res.positive_traces[e] += chunk_pos[c][e];
        }
    }
    const double n = static_cast<double>(n_traces);
    res.moment_ratio.assign(ne, 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
        res.first_moment[e] /= n;
        res.second_moment[e] /= n;
        if (res.first_moment[e] > 0.0)
            res.moment_ratio[e] = res.second_moment[e] /
                                  (res.first_moment[e] * res.first_moment[e]);
        else
            res.insufficient = true;
    }
    return res;
}

TraceBoundaryResult trace_boundary_dimension(const ConformalMap& map, double kappa,
                                             std::size_t n_traces,
                                             std::vector<double> rel_scales,
                                             std::size_t n_targets, std::uint64_t seed,
                                             const FlowOptions& flow) {
    check_kappa_open(kappa, "trace boundary", 8.0 + 1e-12);
    if (map.source() != SourceDomain::disk)
        throw ParameterError("trace boundary: map must have disk source");
    if (!map.bounded_target())
        throw ParameterError("trace boundary: map must target a bounded domain");
    if (rel_scales.empty() || n_traces == 0 || n_targets < 16)
        throw ParameterError("trace boundary: need scales, traces and targets");
    std::sort(rel_scales.begin(), rel_scales.end(), std::greater<>());

    const double diam = map.target_diameter();

    // Whitney ladder per target: image point and image-side scale at dyadic
    // distances from the boundary. Koebe distortion makes snapping the
    // closest approach to the ladder distance-comparable.
    const int levels = 18;
    std::vector<double> target_angles(n_targets);
    std::vector<Complex> ladder_pt(n_targets * levels);
    std::vector<double> ladder_scale(n_targets * levels);
    for (std::size_t i = 0; i < n_targets; ++i)
        target_angles[i] = kTwoPi * (static_cast<double>(i) + 0.5) /
                           static_cast<double>(n_targets);
    parallel_for(n_targets, flow.threads, [&](std::size_t i) {
        for (int m = 1; m <= levels; ++m) {
            const double d = std::pow(2.0, -m);
            const Complex z = std::polar(1.0 - d, target_angles[i]);
            ladder_pt[i * levels + (m - 1)] = map.eval(z);
            ladder_scale[i * levels + (m - 1)] = d * std::abs(map.deriv(z));
        }
    });

    const std::size_t ns = rel_scales.size();

    // Per-scale target subsets, thinned so kept targets are ~eta apart in
    // the image; this keeps the per-scale count a sum of near-marginal
    // indicators instead of a joint statistic over clustered targets.
    std::vector<std::vector<std::uint32_t>> scale_targets(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        const double eta = rel_scales[s] * diam;
        int m = static_cast<int>(std::lround(-std::log2(std::clamp(rel_scales[s], 1e-5, 0.5))));
        m = std::clamp(m, 1, levels);
        Complex last{1e300, 1e300};
        for (std::size_t k = 0; k < n_targets; ++k) {
            const Complex wpt = ladder_pt[k * levels + (m - 1)];
            if (std::abs(wpt - last) >= 0.9 * eta) {
                scale_targets[s].push_back(static_cast<std::uint32_t>(k));
                last = wpt;
            }
        }
    }

    std::vector<std::vector<double>> chunk_sums(kChunks, std::vector<double>(ns, 0.0));

    parallel_chunks(
        n_traces, kChunks, flow.threads, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
            std::vector<double> dist;
            std::unordered_set<std::uint64_t> boxes;
            for (std::size_t i = lo; i < hi; ++i) {
                const DrivingFunction w = sample_driving(kappa, flow.horizon, flow.n_steps,
                                                         derive_stream_seed(seed, i))
                                              .as_radial(0.0);
                radial_flow_min_distance(w, target_angles, dist);
                for (std::size_t s = 0; s < ns; ++s) {
                    const double eta = rel_scales[s] * diam;
                    boxes.clear();
                    for (const std::uint32_t k : scale_targets[s]) {
                        int m = static_cast<int>(std::floor(-std::log2(
                            std::clamp(dist[k], std::pow(2.0, -levels), 0.5))));
                        m = std::clamp(m, 1, levels);
                        const Complex wpt = ladder_pt[k * levels + (m - 1)];
                        const double scale = std::max(ladder_scale[k * levels + (m - 1)],
                                                      dist[k] * 1e-12);
                        if (scale > eta) continue;
                        const auto bx = static_cast<std::int64_t>(
                            std::floor(wpt.real() / eta));
                        const auto by = static_cast<std::int64_t>(
                            std::floor(wpt.imag() / eta));
                        boxes.insert((static_cast<std::uint64_t>(bx) << 32) ^
                                     (static_cast<std::uint64_t>(by) & 0xFFFFFFFFULL));
                    }
                    chunk_sums[chunk][s] += static_cast<double>(boxes.size());
                }
            }
        });

    TraceBoundaryResult res;
    res.kappa = kappa;
    res.n_traces = n_traces;
    res.n_targets = n_targets;
    res.scales = rel_scales;
    res.mean_boxes.assign(ns, 0.0);
    for (std::size_t c = 0; c < kChunks; ++c)
        for (std::size_t s = 0; s < ns; ++s) res.mean_boxes[s] += chunk_sums[c][s];
    for (double& v : res.mean_boxes) v /= static_cast<double>(n_traces);

    std::vector<double> xs, ys;
    for (std::size_t s = 0; s < ns; ++s) {
        if (res.mean_boxes[s] <= 0.0) continue;
        xs.push_back(std::log(1.0 / rel_scales[s]));
        ys.push_back(std::log(res.mean_boxes[s]));
    }
    if (xs.size() < 2 || res.mean_boxes.back() < 0.5) {
        res.degenerate = true;
        return res;
    }
    const LineFit fit = fit_line(xs, ys);
    res.slope = fit.slope;
    res.r_squared = fit.r_squared;
    return res;
}

} // namespace slelab
