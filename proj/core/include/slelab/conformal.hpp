#ifndef SLELAB_CONFORMAL_HPP
#define SLELAB_CONFORMAL_HPP

#include <memory>
#include <string>
#include <vector>

#include "slelab/types.hpp"

namespace slelab {

enum class SourceDomain { disk, half_plane };

enum class MapKind { identity, moebius, koebe, slit, composed, boundary_fitted };

/// Closed polyline boundary curve; vertices[0] == vertices.back().
struct JordanCurve {
    std::vector<Complex> vertices;
    int depth = 0;
    double flatness = 0.0;

    std::size_t segment_count() const {
        return vertices.size() < 2 ? 0 : vertices.size() - 1;
    }
    /// Vertices without the repeated closing point.
    std::vector<Complex> open_vertices() const {
        if (vertices.size() < 2) return vertices;
        return std::vector<Complex>(vertices.begin(), vertices.end() - 1);
    }
};

namespace detail {
class MapImpl;
}

/// Evaluable univalent map with derivative access. Immutable value type;
/// eval/deriv are pure and safe to call concurrently.
class ConformalMap {
public:
    ConformalMap() = default;

    Complex eval(Complex z) const;
    Complex deriv(Complex z) const;

    SourceDomain source() const;
    MapKind kind() const;
    bool bounded_target() const;
    /// Diameter of the target domain (infinity when unbounded).
    double target_diameter() const;

    /// True within 1e-12 of the source boundary; such points are evaluated
    /// but results should be treated as boundary limits.
    bool near_source_boundary(Complex z) const;
    /// Throws DomainError if z is outside the open source domain.
    void require_in_source(Complex z) const;

    /// JSON descriptor (kind + parameters); exact reload via from_json.
    std::string to_json() const;
    static ConformalMap from_json(const std::string& text);

    // --- analytic kinds -------------------------------------------------
    static ConformalMap identity(SourceDomain src);
    /// Disk automorphism  z -> e^{i rot} (z - a) / (1 - conj(a) z),  |a| < 1.
    static ConformalMap disk_automorphism(Complex a, double rotation);
    /// General Moebius (az + b)/(cz + d) restricted to `src`; the pole must
    /// lie outside the open source domain.
    static ConformalMap moebius(SourceDomain src, Complex a, Complex b, Complex c, Complex d);
    /// Cayley transform, half-plane -> disk.
    static ConformalMap cayley();
    /// Koebe map z / (1 - z)^2, disk -> plane minus a radial ray (unbounded).
    static ConformalMap koebe();
    /// Backward chordal Loewner step: half-plane -> half-plane minus the
    /// vertical slit of capacity 2*dt at position u.
    static ConformalMap vertical_slit(double u, double dt);
    /// Backward radial Loewner step: disk -> disk minus a radial slit at
    /// the given boundary angle, capacity increment dt.
    static ConformalMap radial_slit(double angle, double dt);
    /// outer(inner(z)); source is inner's source.
    static ConformalMap compose(const ConformalMap& outer, const ConformalMap& inner);

    // Used by build_boundary_map.
    explicit ConformalMap(std::shared_ptr<const detail::MapImpl> impl);
    const detail::MapImpl& impl() const { return *impl_; }

private:
    std::shared_ptr<const detail::MapImpl> impl_;
};

/// Koch-type closed curve over the unit equilateral triangle: every segment
/// is replaced by a 4-segment generator whose bump apex height is
/// flatness * |segment| / 2. flatness = sqrt(3)/3 reproduces the classical
/// equilateral-bump snowflake. Vertex count 3 * 4^depth.
JordanCurve koch_snowflake(int depth, double flatness);

inline constexpr double kClassicalKochFlatness = 0.57735026918962576451; // sqrt(3)/3

/// Numerical Riemann map of the disk onto the interior of `curve`, built by
/// composing elementary geodesic slit maps fitted to the boundary vertices.
/// Normalization: f(0) is an interior point near the centroid, f'(0) > 0.
ConformalMap build_boundary_map(const JordanCurve& curve);

/// CSV rows "re,im" per vertex; closing vertex implied, not written.
std::string curve_to_csv(const JordanCurve& curve);
JordanCurve curve_from_csv(const std::string& text);

} // namespace slelab

#endif
