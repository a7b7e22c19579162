#ifndef SLELAB_DRIVING_HPP
#define SLELAB_DRIVING_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace slelab {

enum class TraceKind { chordal, radial };

/// Sampled Loewner driving process on a uniform capacity-time grid.
///
/// Chordal: values are W_t in R with W_0 = 0.
/// Radial: values are driving angles in [0, 2*pi); the driving point is
/// exp(i*W_t).
struct DrivingFunction {
    std::vector<double> times;   // strictly increasing, times[0] = 0
    std::vector<double> values;
    double kappa = 0.0;
    std::uint64_t seed = 0;
    TraceKind kind = TraceKind::chordal;

    double horizon() const { return times.empty() ? 0.0 : times.back(); }
    std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }

    /// Linear interpolation of the driving value at time t in [0, horizon].
    /// For radial driving the interpolation is done on the unwrapped path.
    double value_at(double t) const;

    /// Same Brownian path re-read as a radial (angular) driving function
    /// started from `initial_angle`; values are wrapped to [0, 2*pi).
    DrivingFunction as_radial(double initial_angle) const;
};

/// Brownian driving sample: W_t = sqrt(kappa) * B_t, piecewise linear on a
/// uniform grid of n_steps steps over [0, horizon]. Deterministic in seed.
DrivingFunction sample_driving(double kappa, double horizon, std::size_t n_steps,
                               std::uint64_t seed);

/// CSV with header "time,value", floats at 17 significant digits.
std::string driving_to_csv(const DrivingFunction& w);

} // namespace slelab

#endif
