#include "slelab/conformal.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "slelab/geometry.hpp"
#include "slelab/io.hpp"
#include "slelab/map_impl.hpp"
#include "slelab/slitmaps.hpp"

namespace slelab {

using nlohmann::json;

namespace detail {

namespace {

void require_disk(Complex z) {
    if (std::abs(z) >= 1.0) throw DomainError("map: point outside the unit disk");
}

void require_half_plane(Complex z) {
    if (!(z.imag() > 0.0)) throw DomainError("map: point outside the upper half plane");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

/// Circumcircle radius through three points (exact image radius for a
/// Moebius image of a circle).
double circumradius(Complex a, Complex b, Complex c) {
    const double la = std::abs(b - c), lb = std::abs(a - c), lc = std::abs(a - b);
    const double cr = std::abs((b - a).real() * (c - a).imag() - (b - a).imag() * (c - a).real());
    if (cr < 1e-300) return std::numeric_limits<double>::infinity();
    return la * lb * lc / (2.0 * cr);
}

} // namespace

class IdentityImpl final : public MapImpl {
public:
    explicit IdentityImpl(SourceDomain src) : src_(src) {}
    Complex eval(Complex z) const override {
        src_ == SourceDomain::disk ? require_disk(z) : require_half_plane(z);
        return z;
    }
    Complex deriv(Complex z) const override {
        src_ == SourceDomain::disk ? require_disk(z) : require_half_plane(z);
        return {1.0, 0.0};
    }
    SourceDomain source() const override { return src_; }
    MapKind kind() const override { return MapKind::identity; }
    bool bounded() const override { return src_ == SourceDomain::disk; }
    double diameter() const override {
        return bounded() ? 2.0 : std::numeric_limits<double>::infinity();
    }
    json descriptor() const override {
        return {{"kind", "identity"},
                {"source", src_ == SourceDomain::disk ? "disk" : "half_plane"}};
    }

private:
    SourceDomain src_;
};

class MoebiusImpl final : public MapImpl {
public:
    MoebiusImpl(SourceDomain src, Complex a, Complex b, Complex c, Complex d)
        : src_(src), a_(a), b_(b), c_(c), d_(d) {
        const Complex det = a_ * d_ - b_ * c_;
        if (std::abs(det) < 1e-14) throw ParameterError("moebius: degenerate coefficients");
        if (std::abs(c_) > 0.0) {
            const Complex pole = -d_ / c_;
            if (src_ == SourceDomain::disk) {
                if (std::abs(pole) < 1.0)
                    throw ParameterError("moebius: pole inside the source disk");
                bounded_ = std::abs(pole) > 1.0 + 1e-12;
            } else {
                if (pole.imag() > 0.0)
                    throw ParameterError("moebius: pole inside the source half plane");
                bounded_ = pole.imag() < -1e-12;
            }
        } else {
            bounded_ = (src_ == SourceDomain::disk);
        }
        diameter_ = compute_diameter();
    }

    Complex eval(Complex z) const override {
        src_ == SourceDomain::disk ? require_disk(z) : require_half_plane(z);
        return (a_ * z + b_) / (c_ * z + d_);
    }
    Complex deriv(Complex z) const override {
        src_ == SourceDomain::disk ? require_disk(z) : require_half_plane(z);
        const Complex den = c_ * z + d_;
        return (a_ * d_ - b_ * c_) / (den * den);
    }
    SourceDomain source() const override { return src_; }
    MapKind kind() const override { return MapKind::moebius; }
    bool bounded() const override { return bounded_; }
    double diameter() const override { return diameter_; }
    json descriptor() const override {
        return {{"kind", "moebius"},
                {"source", src_ == SourceDomain::disk ? "disk" : "half_plane"},
                {"a", complex_to_json(a_)},
                {"b", complex_to_json(b_)},
                {"c", complex_to_json(c_)},
                {"d", complex_to_json(d_)}};
    }

private:
    double compute_diameter() const {
        if (!bounded_) return std::numeric_limits<double>::infinity();
        auto at = [&](Complex z) { return (a_ * z + b_) / (c_ * z + d_); };
        if (src_ == SourceDomain::disk)
            return 2.0 * circumradius(at(Complex(1, 0)), at(Complex(-1, 0)), at(Complex(0, 1)));
        return 2.0 * circumradius(at(Complex(0, 0)), at(Complex(1, 0)), at(Complex(-1, 0)));
    }

    SourceDomain src_;
    Complex a_, b_, c_, d_;
    bool bounded_ = true;
    double diameter_ = 2.0;
};

class KoebeImpl final : public MapImpl {
public:
    Complex eval(Complex z) const override {
        require_disk(z);
        const Complex q = 1.0 - z;
        return z / (q * q);
    }
    Complex deriv(Complex z) const override {
        require_disk(z);
        const Complex q = 1.0 - z;
        return (1.0 + z) / (q * q * q);
    }
    SourceDomain source() const override { return SourceDomain::disk; }
    MapKind kind() const override { return MapKind::koebe; }
    bool bounded() const override { return false; }
    double diameter() const override { return std::numeric_limits<double>::infinity(); }
    json descriptor() const override { return {{"kind", "koebe"}, {"source", "disk"}}; }
};

class VerticalSlitImpl final : public MapImpl {
public:
    VerticalSlitImpl(double u, double dt) : u_(u), dt_(dt) {
        if (!(dt > 0.0)) throw ParameterError("slit: dt must be > 0");
    }
    Complex eval(Complex z) const override {
        require_half_plane(z);
        return chordal_step_backward(z, u_, dt_);
    }
    Complex deriv(Complex z) const override {
        require_half_plane(z);
        return chordal_step_backward_deriv(z, u_, dt_);
    }
    SourceDomain source() const override { return SourceDomain::half_plane; }
    MapKind kind() const override { return MapKind::slit; }
    bool bounded() const override { return false; }
    double diameter() const override { return std::numeric_limits<double>::infinity(); }
    json descriptor() const override {
        return {{"kind", "slit"}, {"geometry", "vertical"}, {"u", u_}, {"dt", dt_}};
    }

private:
    double u_, dt_;
};

class RadialSlitImpl final : public MapImpl {
public:
    RadialSlitImpl(double angle, double dt) : angle_(angle), dt_(dt) {
        if (!(dt > 0.0)) throw ParameterError("slit: dt must be > 0");
    }
    Complex eval(Complex z) const override {
        require_disk(z);
        return radial_step_backward(z, angle_, dt_);
    }
    Complex deriv(Complex z) const override {
        require_disk(z);
        return radial_step_backward_deriv(z, angle_, dt_);
    }
    SourceDomain source() const override { return SourceDomain::disk; }
    MapKind kind() const override { return MapKind::slit; }
    bool bounded() const override { return true; }
    double diameter() const override { return 2.0; }
    json descriptor() const override {
        return {{"kind", "slit"}, {"geometry", "radial"}, {"angle", angle_}, {"dt", dt_}};
    }

private:
    double angle_, dt_;
};

class ComposedImpl final : public MapImpl {
public:
    ComposedImpl(ConformalMap outer, ConformalMap inner)
        : outer_(std::move(outer)), inner_(std::move(inner)) {}
    Complex eval(Complex z) const override { return outer_.eval(inner_.eval(z)); }
    Complex deriv(Complex z) const override {
        return outer_.deriv(inner_.eval(z)) * inner_.deriv(z);
    }
    SourceDomain source() const override { return inner_.source(); }
    MapKind kind() const override { return MapKind::composed; }
    bool bounded() const override { return outer_.bounded_target(); }
    double diameter() const override { return outer_.target_diameter(); }
    json descriptor() const override {
        return {{"kind", "composed"},
                {"outer", json::parse(outer_.to_json())},
                {"inner", json::parse(inner_.to_json())}};
    }

private:
    ConformalMap outer_, inner_;
};

} // namespace detail

ConformalMap::ConformalMap(std::shared_ptr<const detail::MapImpl> impl) : impl_(std::move(impl)) {}

Complex ConformalMap::eval(Complex z) const {
    if (!impl_) throw ParameterError("map: empty ConformalMap");
    return impl_->eval(z);
}

Complex ConformalMap::deriv(Complex z) const {
    if (!impl_) throw ParameterError("map: empty ConformalMap");
    return impl_->deriv(z);
}

SourceDomain ConformalMap::source() const { return impl_->source(); }
MapKind ConformalMap::kind() const { return impl_->kind(); }
bool ConformalMap::bounded_target() const { return impl_->bounded(); }
double ConformalMap::target_diameter() const { return impl_->diameter(); }

bool ConformalMap::near_source_boundary(Complex z) const {
    if (source() == SourceDomain::disk) return std::abs(z) > 1.0 - 1e-12;
    return z.imag() < 1e-12;
}

void ConformalMap::require_in_source(Complex z) const {
    if (source() == SourceDomain::disk) {
        if (std::abs(z) >= 1.0) throw DomainError("map: point outside the unit disk");
    } else {
        if (!(z.imag() > 0.0)) throw DomainError("map: point outside the upper half plane");
    }
}

std::string ConformalMap::to_json() const { return impl_->descriptor().dump(); }

ConformalMap ConformalMap::identity(SourceDomain src) {
    return ConformalMap(std::make_shared<detail::IdentityImpl>(src));
}

ConformalMap ConformalMap::disk_automorphism(Complex a, double rotation) {
    if (std::abs(a) >= 1.0) throw ParameterError("disk_automorphism: |a| must be < 1");
    const Complex e = std::polar(1.0, rotation);
    return moebius(SourceDomain::disk, e, -e * a, -std::conj(a), Complex(1.0, 0.0));
}

ConformalMap ConformalMap::moebius(SourceDomain src, Complex a, Complex b, Complex c, Complex d) {
    return ConformalMap(std::make_shared<detail::MoebiusImpl>(src, a, b, c, d));
}

ConformalMap ConformalMap::cayley() {
    return moebius(SourceDomain::half_plane, Complex(1, 0), Complex(0, -1), Complex(1, 0),
                   Complex(0, 1));
}

ConformalMap ConformalMap::koebe() {
    return ConformalMap(std::make_shared<detail::KoebeImpl>());
}

ConformalMap ConformalMap::vertical_slit(double u, double dt) {
    return ConformalMap(std::make_shared<detail::VerticalSlitImpl>(u, dt));
}

ConformalMap ConformalMap::radial_slit(double angle, double dt) {
    return ConformalMap(std::make_shared<detail::RadialSlitImpl>(angle, dt));
}

ConformalMap ConformalMap::compose(const ConformalMap& outer, const ConformalMap& inner) {
    return ConformalMap(std::make_shared<detail::ComposedImpl>(outer, inner));
}

namespace {

SourceDomain source_from_json(const json& j) {
    const std::string s = j.value("source", "disk");
    if (s == "disk") return SourceDomain::disk;
    if (s == "half_plane") return SourceDomain::half_plane;
    throw ParameterError("map descriptor: unknown source '" + s + "'");
}

ConformalMap map_from_json_obj(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return ConformalMap::identity(source_from_json(j));
    if (kind == "moebius")
        return ConformalMap::moebius(source_from_json(j),
                                     detail::complex_from_json(j.at("a")),
                                     detail::complex_from_json(j.at("b")),
                                     detail::complex_from_json(j.at("c")),
                                     detail::complex_from_json(j.at("d")));
    if (kind == "koebe") return ConformalMap::koebe();
    if (kind == "slit") {
        const std::string geom = j.at("geometry").get<std::string>();
        if (geom == "vertical")
            return ConformalMap::vertical_slit(j.at("u").get<double>(), j.at("dt").get<double>());
        if (geom == "radial")
            return ConformalMap::radial_slit(j.at("angle").get<double>(),
                                             j.at("dt").get<double>());
        throw ParameterError("map descriptor: unknown slit geometry '" + geom + "'");
    }
    if (kind == "composed")
        return ConformalMap::compose(map_from_json_obj(j.at("outer")),
                                     map_from_json_obj(j.at("inner")));
    if (kind == "boundary_fitted") return detail::boundary_fitted_from_json(j);
    throw ParameterError("map descriptor: unknown kind '" + kind + "'");
}

} // namespace

ConformalMap ConformalMap::from_json(const std::string& text) {
    return map_from_json_obj(json::parse(text));
}

namespace detail {

Complex json_to_complex(const nlohmann::json& j) { return complex_from_json(j); }
nlohmann::json json_from_complex(Complex z) { return complex_to_json(z); }

} // namespace detail

JordanCurve koch_snowflake(int depth, double flatness) {
    if (depth < 0) throw ParameterError("koch_snowflake: depth must be >= 0");
    if (depth > 8) throw ResourceError("koch_snowflake: depth > 8 exceeds the vertex budget");
    if (!(flatness > 0.0 && flatness < 1.0))
        throw ParameterError("koch_snowflake: flatness must be in (0, 1)");

    std::vector<Complex> pts = {Complex(0.0, 0.0), Complex(1.0, 0.0),
                                Complex(0.5, std::sqrt(3.0) / 2.0)};
    for (int d = 0; d < depth; ++d) {
        std::vector<Complex> next;
        next.reserve(pts.size() * 4);
        const std::size_t n = pts.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Complex a = pts[i];
            const Complex b = pts[(i + 1) % n];
            const Complex e = b - a;
            // Outward normal for a counterclockwise polygon.
            const Complex outward = e * Complex(0.0, -1.0);
            const Complex apex = a + 0.5 * e + outward * (flatness / 2.0);
            next.push_back(a);
            next.push_back(a + e / 3.0);
            next.push_back(apex);
            next.push_back(a + 2.0 * e / 3.0);
        }
        pts = std::move(next);
    }

    JordanCurve curve;
    curve.depth = depth;
    curve.flatness = flatness;
    curve.vertices = std::move(pts);
    curve.vertices.push_back(curve.vertices.front());
    return curve;
}

std::string curve_to_csv(const JordanCurve& curve) {
    std::ostringstream out;
    out << "re,im\n";
    for (const Complex& v : curve.open_vertices())
        out << format_g17(v.real()) << ',' << format_g17(v.imag()) << '\n';
    return out.str();
}

JordanCurve curve_from_csv(const std::string& text) {
    JordanCurve curve;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("re", 0) == 0) continue; // header
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParameterError("curve csv: malformed row");
        curve.vertices.emplace_back(std::stod(line.substr(0, comma)),
                                    std::stod(line.substr(comma + 1)));
    }
    if (curve.vertices.size() < 3) throw GeometryError("curve csv: fewer than 3 vertices");
    curve.vertices.push_back(curve.vertices.front());
    return curve;
}

} // namespace slelab
