#ifndef SLELAB_BOUNDARY_FLOW_HPP
#define SLELAB_BOUNDARY_FLOW_HPP

#include <cstdint>
#include <vector>

#include "slelab/driving.hpp"

namespace slelab {

/// Forward Loewner flow of boundary targets with piecewise-constant driving.
/// Each step is solved in closed form (no ODE error): the driving jump moves
/// the target's uniformized coordinate, the constant-driving drift has an
/// exact solution, and the boundary derivative g' updates by an exact
/// telescoping factor.
///
/// The recorded statistic per target is the closest-approach proxy
///   min over step starts of   (uniformized gap) / g'(target),
/// which is comparable to the true distance from the target to the trace
/// within Koebe distortion constants. Within a constant-driving step the
/// proxy is increasing, so step starts realize the minimum exactly for the
/// discrete process. A swallowed target records its overshoot distance at
/// the swallowing jump and then stays fixed.

/// Chordal flow in the upper half plane, seed at W_0, targets on R.
/// min_dist must have targets.size() entries; it is overwritten.
void chordal_flow_min_distance(const DrivingFunction& driving,
                               const std::vector<double>& targets,
                               std::vector<double>& min_dist,
                               std::vector<std::uint8_t>* swallowed = nullptr);

/// Radial flow in the disk, seed at angle W_0, targets at boundary angles.
void radial_flow_min_distance(const DrivingFunction& driving,
                              const std::vector<double>& target_angles,
                              std::vector<double>& min_dist,
                              std::vector<std::uint8_t>* swallowed = nullptr);

} // namespace slelab

#endif
