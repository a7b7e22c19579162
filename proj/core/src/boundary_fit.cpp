#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "slelab/conformal.hpp"
#include "slelab/geometry.hpp"
#include "slelab/map_impl.hpp"
#include "slelab/slitmaps.hpp"

namespace slelab {

using nlohmann::json;

namespace detail {

namespace {

// One geodesic zipper step. Forward map H \ C -> H is (sigma o mu)/scale:
//   mu(z) = z / (1 - z * inv_x0),   sigma(y) = sqrt_upper(y^2 + s^2),
// where C is the hyperbolic geodesic from 0 to the data point omega,
// inv_x0 = Re(omega)/|omega|^2 and s = |omega|^2/Im(omega). The data point
// goes to 0, so the next step can again slit from 0. The trailing dilation
// by scale = max(1, s) keeps the composed images O(1); it is a half-plane
// automorphism absorbed by the final normalization.
struct ZipStep {
    double inv_x0 = 0.0;
    double s = 0.0;
    double scale = 1.0;
};

Complex step_forward(const ZipStep& st, Complex z) {
    const Complex y = z / (1.0 - z * st.inv_x0);
    return sqrt_upper(y * y + st.s * st.s) / st.scale;
}

Complex step_backward(const ZipStep& st, Complex w) {
    const Complex ws = w * st.scale;
    const Complex y = sqrt_upper(ws * ws - st.s * st.s);
    return y / (1.0 + y * st.inv_x0);
}

Complex step_backward_deriv(const ZipStep& st, Complex w) {
    const Complex ws = w * st.scale;
    const Complex y = sqrt_upper(ws * ws - st.s * st.s);
    const Complex q = 1.0 + y * st.inv_x0;
    return st.scale * (ws / y) / (q * q);
}

constexpr std::size_t kMaxFitVertices = 20000;

} // namespace

/// Riemann map of the disk onto a polygonal Jordan interior, represented
/// as a composition of closed-form elementary maps (geodesic algorithm).
/// All evaluation is exact composition; derivatives use the chain rule.
class BoundaryFittedImpl final : public MapImpl {
public:
    BoundaryFittedImpl(Complex z0, Complex z1, std::vector<ZipStep> steps,
                       double closing_inv_x0, bool left_side, Complex zeta, Complex rot,
                       Complex f0, double diameter)
        : z0_(z0), z1_(z1), steps_(std::move(steps)), closing_inv_x0_(closing_inv_x0),
          left_side_(left_side), zeta_(zeta), rot_(rot), f0_(f0), diameter_(diameter) {}

    Complex eval(Complex u) const override {
        if (std::abs(u) >= 1.0) throw DomainError("map: point outside the unit disk");
        Complex z = u;
        backward_chain(z, nullptr);
        return z;
    }

    Complex deriv(Complex u) const override {
        if (std::abs(u) >= 1.0) throw DomainError("map: point outside the unit disk");
        Complex z = u;
        Complex d(1.0, 0.0);
        backward_chain(z, &d);
        return d;
    }

    SourceDomain source() const override { return SourceDomain::disk; }
    MapKind kind() const override { return MapKind::boundary_fitted; }
    bool bounded() const override { return true; }
    double diameter() const override { return diameter_; }

    json descriptor() const override {
        json steps = json::array();
        for (const ZipStep& st : steps_)
            steps.push_back(json::array({st.inv_x0, st.s, st.scale}));
        return {{"kind", "boundary_fitted"},
                {"z0", json_from_complex(z0_)},
                {"z1", json_from_complex(z1_)},
                {"steps", steps},
                {"closing_inv_x0", closing_inv_x0_},
                {"left_side", left_side_},
                {"zeta", json_from_complex(zeta_)},
                {"rot", json_from_complex(rot_)},
                {"f0", json_from_complex(f0_)},
                {"diameter", diameter_}};
    }

    Complex normalization_point() const { return f0_; }

private:
    // f = psi1 o steps^-1 (reversed) o nu^-1 o sq^-1 o T^-1, updating the
    // chain-rule derivative alongside when requested.
    void backward_chain(Complex& z, Complex* d) const {
        // T^-1: v = u / rot, z = (v*conj(zeta) - zeta)/(v - 1).
        const Complex v = z / rot_;
        const Complex vm1 = v - 1.0;
        z = (v * std::conj(zeta_) - zeta_) / vm1;
        if (d) *d *= (zeta_ - std::conj(zeta_)) / (vm1 * vm1) / rot_;

        // sq^-1: right quadrant w -> sqrt(w); left quadrant w -> i*sqrt(w).
        const Complex r = std::sqrt(z);
        if (d) *d *= (left_side_ ? Complex(0, 1) : Complex(1, 0)) / (2.0 * r);
        z = left_side_ ? Complex(0, 1) * r : r;

        // nu^-1: z -> z / (1 + z*closing_inv_x0).
        {
            const Complex q = 1.0 + z * closing_inv_x0_;
            if (d) *d *= 1.0 / (q * q);
            z = z / q;
        }

        for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
            if (d) *d *= step_backward_deriv(*it, z);
            z = step_backward(*it, z);
        }

        // psi1: w -> (z1 + w^2 z0) / (1 + w^2).
        const Complex w2 = z * z;
        const Complex den = 1.0 + w2;
        if (d) *d *= 2.0 * z * (z0_ - z1_) / (den * den);
        z = (z1_ + w2 * z0_) / den;
    }

    Complex z0_, z1_;
    std::vector<ZipStep> steps_;
    double closing_inv_x0_;
    bool left_side_;
    Complex zeta_;
    Complex rot_;
    Complex f0_;
    double diameter_;
};

ConformalMap boundary_fitted_from_json(const json& j) {
    std::vector<ZipStep> steps;
    for (const auto& st : j.at("steps"))
        steps.push_back({st.at(0).get<double>(), st.at(1).get<double>(), st.at(2).get<double>()});
    return ConformalMap(std::make_shared<BoundaryFittedImpl>(
        json_to_complex(j.at("z0")), json_to_complex(j.at("z1")), std::move(steps),
        j.at("closing_inv_x0").get<double>(), j.at("left_side").get<bool>(),
        json_to_complex(j.at("zeta")), json_to_complex(j.at("rot")),
        json_to_complex(j.at("f0")), j.at("diameter").get<double>()));
}

} // namespace detail

namespace {

using detail::ZipStep;

Complex forward_chain(Complex z0, Complex z1, const std::vector<ZipStep>& steps, Complex z) {
    // phi1(z) = i sqrt((z - z1)/(z - z0)), principal branch.
    Complex w = Complex(0, 1) * std::sqrt((z - z1) / (z - z0));
    for (const ZipStep& st : steps) w = detail::step_forward(st, w);
    return w;
}

/// Interior normalization point: the centroid when it is comfortably
/// inside, otherwise the deepest point of a coarse grid scan.
Complex pick_interior_point(const std::vector<Complex>& poly) {
    const Complex centroid = polygon_centroid(poly);
    const double d0 = distance_to_polyline(poly, centroid, true);
    double best_clear = point_in_polygon(poly, centroid) ? d0 : -1.0;
    Complex best = centroid;

    double xmin = poly[0].real(), xmax = xmin, ymin = poly[0].imag(), ymax = ymin;
    for (const Complex& v : poly) {
        xmin = std::min(xmin, v.real());
        xmax = std::max(xmax, v.real());
        ymin = std::min(ymin, v.imag());
        ymax = std::max(ymax, v.imag());
    }
    const double diam = std::max(xmax - xmin, ymax - ymin);
    if (best_clear > 0.05 * diam) return best;

    for (int i = 1; i < 48; ++i) {
        for (int j = 1; j < 48; ++j) {
            const Complex p(xmin + (xmax - xmin) * i / 48.0, ymin + (ymax - ymin) * j / 48.0);
            if (!point_in_polygon(poly, p)) continue;
            const double clear = distance_to_polyline(poly, p, true);
            if (clear > best_clear) {
                best_clear = clear;
                best = p;
            }
        }
    }
    if (best_clear <= 0.0) throw GeometryError("boundary map: no interior point found");
    return best;
}

} // namespace

ConformalMap build_boundary_map(const JordanCurve& curve) {
    // Deduplicate and drop the closing vertex.
    std::vector<Complex> v;
    v.reserve(curve.vertices.size());
    for (const Complex& p : curve.vertices) {
        if (v.empty() || std::abs(p - v.back()) > 1e-14) v.push_back(p);
    }
    if (v.size() >= 2 && std::abs(v.front() - v.back()) <= 1e-14) v.pop_back();
    if (v.size() < 3) throw GeometryError("boundary map: need at least 3 distinct vertices");
    if (v.size() > detail::kMaxFitVertices)
        throw ResourceError("boundary map: vertex count exceeds fitting budget");

    if (v.size() <= 16384 && !polygon_is_simple(v))
        throw GeometryError("boundary map: curve is not simple at vertex resolution");

    // Normalize to counterclockwise orientation.
    double area2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex a = v[i], b = v[(i + 1) % v.size()];
        area2 += a.real() * b.imag() - a.imag() * b.real();
    }
    if (area2 < 0.0) std::reverse(v.begin(), v.end());

    const Complex z0 = v[0];
    const Complex z1 = v[1];
    std::vector<ZipStep> steps;
    steps.reserve(v.size());

    for (std::size_t k = 2; k < v.size(); ++k) {
        const Complex omega = forward_chain(z0, z1, steps, v[k]);
        if (!(omega.imag() > 0.0) || !std::isfinite(omega.real()) ||
            !std::isfinite(omega.imag())) {
            std::ostringstream msg;
            msg << "boundary map: fit failed at vertex " << k << " of " << v.size()
                << " (image " << omega.real() << "+" << omega.imag() << "i left the half plane)";
            throw NumericError(msg.str());
        }
        const double n2 = std::norm(omega);
        const double s = n2 / omega.imag();
        steps.push_back({omega.real() / n2, s, std::max(1.0, s)});
    }

    // Closing: the image of z0 is a real boundary point xi; nu(z)=z/(1-z/xi)
    // sends the geodesic from 0 to xi to the positive imaginary ray, after
    // which the interior occupies one quadrant and z -> +/- z^2 closes it.
    const Complex z_c = pick_interior_point(v);
    const Complex v_c = forward_chain(z0, z1, steps, z_c);
    if (!(v_c.imag() > 0.0))
        throw NumericError("boundary map: interior probe left the half plane");

    double xi;
    {
        // Track the boundary image of z0 through the chain with the
        // real-axis branch sign(y)*sqrt(y^2+s^2); it starts at infinity.
        bool at_infinity = true;
        double x = 0.0;
        for (const ZipStep& st : steps) {
            double y;
            if (at_infinity) {
                if (st.inv_x0 == 0.0) continue; // stays at infinity
                y = -1.0 / st.inv_x0;
                at_infinity = false;
            } else {
                const double den = 1.0 - x * st.inv_x0;
                if (den == 0.0) {
                    at_infinity = true;
                    continue;
                }
                y = x / den;
            }
            x = (y >= 0.0 ? 1.0 : -1.0) * std::sqrt(y * y + st.s * st.s) / st.scale;
        }
        xi = at_infinity ? 0.0 : 1.0 / x; // stored as closing_inv_x0
    }

    const Complex nu_c = v_c / (1.0 - v_c * xi);
    const bool left_side = nu_c.real() < 0.0;
    const Complex zeta = left_side ? -nu_c * nu_c : nu_c * nu_c;
    if (!(zeta.imag() > 0.0))
        throw NumericError("boundary map: closing map did not reach the half plane");

    const double diameter = polyline_diameter(v);

    // First pass with rot = 1 to measure arg f'(0), then rotate so f'(0) > 0.
    auto impl = std::make_shared<detail::BoundaryFittedImpl>(
        z0, z1, steps, xi, left_side, zeta, Complex(1.0, 0.0), z_c, diameter);
    const Complex d0 = impl->deriv(Complex(0.0, 0.0));
    if (!(std::abs(d0) > 0.0) || !std::isfinite(std::abs(d0)))
        throw NumericError("boundary map: degenerate derivative at the origin");
    const Complex rot = d0 / std::abs(d0);

    return ConformalMap(std::make_shared<detail::BoundaryFittedImpl>(
        z0, z1, std::move(steps), xi, left_side, zeta, rot, z_c, diameter));
}

} // namespace slelab
