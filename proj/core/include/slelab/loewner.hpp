#ifndef SLELAB_LOEWNER_HPP
#define SLELAB_LOEWNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "slelab/conformal.hpp"
#include "slelab/driving.hpp"
#include "slelab/types.hpp"

namespace slelab {

/// Time-stamped polyline approximation of an SLE curve.
/// Chordal points live in the closed upper half plane, radial points in
/// the closed unit disk. flags[i] != 0 marks a point whose value is a
/// boundary-limit approximation (see map_trace).
struct Trace {
    std::vector<double> times;
    std::vector<Complex> points;
    std::vector<std::uint8_t> flags;
    TraceKind kind = TraceKind::chordal;
};

/// Default evaluation grid: `count` times geometrically spaced over
/// (horizon * 2^-16, horizon], finest near 0.
std::vector<double> default_eval_times(double horizon, std::size_t count);

/// Trace via backward composition of per-step vertical slit maps with
/// piecewise-constant driving. The tip at each requested time is the exact
/// slit tip of the final (possibly partial) step pulled back through the
/// earlier maps, i.e. the exact boundary limit of the discrete composition.
Trace chordal_trace(const DrivingFunction& driving, const std::vector<double>& eval_times);

/// Disk analog of chordal_trace, driving point exp(i W_t), curve targets 0.
Trace radial_trace(const DrivingFunction& driving, const std::vector<double>& eval_times);

/// Pointwise image f(gamma). Points within `margin` of the source boundary
/// are pulled back radially (disk) or lifted (half plane) to the margin and
/// flagged approximate. Points outside the source domain raise DomainError.
Trace map_trace(const Trace& trace, const ConformalMap& map, double margin = 1e-9);

/// Half-plane capacity of the discrete hull at the driving's horizon,
/// extracted from the expansion g(z) = z + 2t/z + O(z^-2) at z = iR.
double chordal_capacity_estimate(const DrivingFunction& driving, double probe_radius = 256.0);

/// CSV with header "time,re,im,flag".
std::string trace_to_csv(const Trace& trace);

} // namespace slelab

#endif
