#include "slelab/driving.hpp"

#include <cmath>
#include <sstream>

#include "slelab/io.hpp"
#include "slelab/rng.hpp"
#include "slelab/types.hpp"

namespace slelab {

namespace {

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0) w += kTwoPi;
    return w;
}

} // namespace

double DrivingFunction::value_at(double t) const {
    if (times.empty()) throw ParameterError("value_at: empty driving function");
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    // Uniform grid: O(1) bracketing, then clamp for safety.
    const double dt = times[1] - times[0];
    std::size_t i = static_cast<std::size_t>(t / dt);
    if (i + 1 >= times.size()) i = times.size() - 2;
    while (i > 0 && times[i] > t) --i;
    while (i + 2 < times.size() && times[i + 1] < t) ++i;
    const double s = (t - times[i]) / (times[i + 1] - times[i]);

    double v0 = values[i], v1 = values[i + 1];
    if (kind == TraceKind::radial) {
        // Interpolate along the short way around the circle.
        double d = v1 - v0;
        if (d > kPi) d -= kTwoPi;
        if (d < -kPi) d += kTwoPi;
        return wrap_angle(v0 + s * d);
    }
    return v0 + s * (v1 - v0);
}

DrivingFunction DrivingFunction::as_radial(double initial_angle) const {
    DrivingFunction r = *this;
    r.kind = TraceKind::radial;
    for (auto& v : r.values) v = wrap_angle(v + initial_angle);
    return r;
}

DrivingFunction sample_driving(double kappa, double horizon, std::size_t n_steps,
                               std::uint64_t seed) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw ParameterError("sample_driving: kappa must be finite and >= 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ParameterError("sample_driving: horizon must be finite and > 0");
    if (n_steps < 1) throw ParameterError("sample_driving: n_steps must be >= 1");

    DrivingFunction w;
    w.kappa = kappa;
    w.seed = seed;
    w.kind = TraceKind::chordal;
    w.times.resize(n_steps + 1);
    w.values.resize(n_steps + 1);

    const double dt = horizon / static_cast<double>(n_steps);
    const double step_sd = std::sqrt(kappa * dt);
    GaussianSampler gauss(seed);

    w.times[0] = 0.0;
    w.values[0] = 0.0;
    double v = 0.0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        w.times[i] = dt * static_cast<double>(i);
        v += step_sd * gauss.next();
        w.values[i] = v;
    }
    w.times[n_steps] = horizon;
    return w;
}

std::string driving_to_csv(const DrivingFunction& w) {
    std::ostringstream out;
    out << "time,value\n";
    for (std::size_t i = 0; i < w.times.size(); ++i)
        out << format_g17(w.times[i]) << ',' << format_g17(w.values[i]) << '\n';
    return out.str();
}

} // namespace slelab
