#include "slelab/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slelab/io.hpp"
#include "slelab/slitmaps.hpp"

namespace slelab {

namespace {

// Steps covering (0, t]: full steps 1..j, then a partial step of duration
// t - times[j] with driving value interpolated at t. Piecewise-constant
// driving takes the value at the right end of each step.
struct StepPlan {
    std::size_t full_steps;
    double partial_dt;
    double partial_u;
};

StepPlan plan_steps(const DrivingFunction& w, double t) {
    StepPlan plan{0, 0.0, 0.0};
    const auto& times = w.times;
    std::size_t j = 0;
    while (j + 1 < times.size() && times[j + 1] <= t + 1e-15 * std::max(1.0, t)) ++j;
    plan.full_steps = j;
    const double rem = t - times[j];
    if (rem > 1e-15 * std::max(1.0, t)) {
        plan.partial_dt = rem;
        plan.partial_u = w.value_at(t);
    }
    return plan;
}

void check_eval_times(const DrivingFunction& w, const std::vector<double>& eval_times) {
    for (double t : eval_times) {
        if (!(t >= 0.0) || !std::isfinite(t))
            throw ParameterError("trace: eval time must be finite and >= 0");
        if (t > w.horizon() * (1.0 + 1e-12))
            throw ParameterError("trace: eval time exceeds driving horizon");
    }
}

void check_finite(Complex z, double t) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream msg;
        msg << "trace: slit-map composition blew up evaluating time " << t;
        throw NumericError(msg.str());
    }
}

} // namespace

std::vector<double> default_eval_times(double horizon, std::size_t count) {
    if (!(horizon > 0.0)) throw ParameterError("default_eval_times: horizon must be > 0");
    if (count < 2) throw ParameterError("default_eval_times: count must be >= 2");
    std::vector<double> ts(count);
    const double lo = horizon * std::pow(2.0, -16.0);
    const double ratio = std::pow(horizon / lo, 1.0 / static_cast<double>(count - 1));
    double t = lo;
    for (std::size_t i = 0; i < count; ++i) {
        ts[i] = std::min(t, horizon);
        t *= ratio;
    }
    ts.back() = horizon;
    return ts;
}

Trace chordal_trace(const DrivingFunction& w, const std::vector<double>& eval_times) {
    if (w.kind != TraceKind::chordal)
        throw ParameterError("chordal_trace: driving function is not chordal");
    if (w.times.size() < 2) throw ParameterError("chordal_trace: empty driving function");
    check_eval_times(w, eval_times);

    Trace tr;
    tr.kind = TraceKind::chordal;
    tr.times = eval_times;
    tr.points.resize(eval_times.size());
    tr.flags.assign(eval_times.size(), 0);

    for (std::size_t e = 0; e < eval_times.size(); ++e) {
        const double t = eval_times[e];
        if (t <= 0.0) {
            tr.points[e] = Complex(w.values[0], 0.0);
            continue;
        }
        const StepPlan plan = plan_steps(w, t);

        Complex z;
        std::size_t j = plan.full_steps;
        if (plan.partial_dt > 0.0) {
            z = Complex(plan.partial_u, 2.0 * std::sqrt(plan.partial_dt));
        } else {
            // Exact tip of step j: u_j + 2i sqrt(dt_j).
            const double dt = w.times[j] - w.times[j - 1];
            z = Complex(w.values[j], 2.0 * std::sqrt(dt));
            --j;
        }
        for (; j >= 1; --j) {
            const double dt = w.times[j] - w.times[j - 1];
            z = chordal_step_backward(z, w.values[j], dt);
        }
        check_finite(z, t);
        if (z.imag() < 0.0) z = Complex(z.real(), 0.0);
        tr.points[e] = z;
    }
    return tr;
}

Trace radial_trace(const DrivingFunction& w, const std::vector<double>& eval_times) {
    if (w.kind != TraceKind::radial)
        throw ParameterError("radial_trace: driving function is not radial");
    if (w.times.size() < 2) throw ParameterError("radial_trace: empty driving function");
    check_eval_times(w, eval_times);

    Trace tr;
    tr.kind = TraceKind::radial;
    tr.times = eval_times;
    tr.points.resize(eval_times.size());
    tr.flags.assign(eval_times.size(), 0);

    for (std::size_t e = 0; e < eval_times.size(); ++e) {
        const double t = eval_times[e];
        if (t <= 0.0) {
            tr.points[e] = std::polar(1.0, w.values[0]);
            continue;
        }
        const StepPlan plan = plan_steps(w, t);

        Complex z;
        std::size_t j = plan.full_steps;
        if (plan.partial_dt > 0.0) {
            z = radial_step_tip(plan.partial_u, plan.partial_dt);
        } else {
            const double dt = w.times[j] - w.times[j - 1];
            z = radial_step_tip(w.values[j], dt);
            --j;
        }
        for (; j >= 1; --j) {
            const double dt = w.times[j] - w.times[j - 1];
            z = radial_step_backward(z, w.values[j], dt);
        }
        check_finite(z, t);
        if (std::abs(z) > 1.0) z /= std::abs(z);
        tr.points[e] = z;
    }
    return tr;
}

Trace map_trace(const Trace& trace, const ConformalMap& map, double margin) {
    Trace out;
    out.kind = trace.kind;
    out.times = trace.times;
    out.points.resize(trace.points.size());
    out.flags = trace.flags;

    const bool disk_source = map.source() == SourceDomain::disk;
    if (disk_source && trace.kind != TraceKind::radial)
        throw ParameterError("map_trace: disk-source map expects a radial trace");
    if (!disk_source && trace.kind != TraceKind::chordal)
        throw ParameterError("map_trace: half-plane-source map expects a chordal trace");

    for (std::size_t i = 0; i < trace.points.size(); ++i) {
        Complex z = trace.points[i];
        bool approx = false;
        if (disk_source) {
            const double r = std::abs(z);
            if (r > 1.0 + 1e-9) throw DomainError("map_trace: point outside the unit disk");
            if (r > 1.0 - margin) {
                z = (r == 0.0) ? Complex(1.0 - margin, 0.0) : z * ((1.0 - margin) / r);
                approx = true;
            }
        } else {
            if (z.imag() < -1e-9) throw DomainError("map_trace: point below the real line");
            if (z.imag() < margin) {
                z = Complex(z.real(), margin);
                approx = true;
            }
        }
        out.points[i] = map.eval(z);
        if (approx) out.flags[i] = 1;
    }
    return out;
}

double chordal_capacity_estimate(const DrivingFunction& w, double probe_radius) {
    if (w.times.size() < 2) throw ParameterError("capacity: empty driving function");
    Complex z(0.0, probe_radius);
    for (std::size_t j = 1; j < w.times.size(); ++j) {
        const double dt = w.times[j] - w.times[j - 1];
        z = chordal_step_forward(z, w.values[j], dt);
    }
    // g(z) = z + hcap/z + O(z^-2); the discrete composition has hcap = 2t
    // exactly (capacities add under composition), so this measures only
    // extraction error.
    const Complex c1 = (z - Complex(0.0, probe_radius)) * Complex(0.0, probe_radius);
    return c1.real();
}

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream out;
    out << "time,re,im,flag\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << format_g17(trace.times[i]) << ',' << format_g17(trace.points[i].real()) << ','
            << format_g17(trace.points[i].imag()) << ',' << static_cast<int>(trace.flags[i])
            << '\n';
    }
    return out.str();
}

} // namespace slelab
