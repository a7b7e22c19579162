#include "slelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace slelab {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return false;
}

double point_segment_distance(Complex p, Complex a, Complex b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

} // namespace

int winding_number(const std::vector<Complex>& polygon, Complex z) {
    int wn = 0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = polygon[i];
        const Complex b = polygon[(i + 1) % n];
        if (a.imag() <= z.imag()) {
            if (b.imag() > z.imag() && cross(b - a, z - a) > 0) ++wn;
        } else {
            if (b.imag() <= z.imag() && cross(b - a, z - a) < 0) --wn;
        }
    }
    return wn;
}

bool point_in_polygon(const std::vector<Complex>& polygon, Complex z) {
    return winding_number(polygon, z) != 0;
}

Complex polygon_centroid(const std::vector<Complex>& polygon) {
    double area2 = 0.0;
    Complex c{0.0, 0.0};
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = polygon[i];
        const Complex b = polygon[(i + 1) % n];
        const double w = cross(a, b);
        area2 += w;
        c += w * (a + b);
    }
    if (std::abs(area2) < 1e-300) return polygon.empty() ? Complex{} : polygon[0];
    return c / (3.0 * area2);
}

double polyline_diameter(const std::vector<Complex>& pts) {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, std::abs(pts[i] - pts[j]));
    return d;
}

double distance_to_polyline(const std::vector<Complex>& polygon, Complex z, bool closed) {
    double d = std::numeric_limits<double>::infinity();
    const std::size_t n = polygon.size();
    if (n == 0) return d;
    const std::size_t segs = closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i)
        d = std::min(d, point_segment_distance(z, polygon[i], polygon[(i + 1) % n]));
    return d;
}

bool polygon_is_simple(const std::vector<Complex>& polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip adjacent segments (shared endpoint).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(polygon[i], polygon[(i + 1) % n],
                                   polygon[j], polygon[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

double polyline_hausdorff_distance(const std::vector<Complex>& a,
                                   const std::vector<Complex>& b,
                                   bool closed) {
    auto densify = [&](const std::vector<Complex>& p) {
        std::vector<Complex> out;
        const std::size_t n = p.size();
        const std::size_t segs = closed ? n : n - 1;
        for (std::size_t i = 0; i < segs; ++i) {
            const Complex u = p[i], v = p[(i + 1) % n];
            const int m = std::max(1, static_cast<int>(std::ceil(std::abs(v - u) / 1e-3)));
            for (int k = 0; k < m; ++k)
                out.push_back(u + (v - u) * (static_cast<double>(k) / m));
        }
        return out;
    };
    auto one_sided = [&](const std::vector<Complex>& from, const std::vector<Complex>& to) {
        double worst = 0.0;
        for (const Complex& p : densify(from))
            worst = std::max(worst, distance_to_polyline(to, p, closed));
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

namespace {

std::size_t count_boxes(const std::vector<Complex>& pts, double scale) {
    std::unordered_set<std::uint64_t> boxes;
    boxes.reserve(pts.size());
    for (const Complex& p : pts) {
        const auto ix = static_cast<std::int64_t>(std::floor(p.real() / scale));
        const auto iy = static_cast<std::int64_t>(std::floor(p.imag() / scale));
        boxes.insert((static_cast<std::uint64_t>(ix) << 32) ^
                     (static_cast<std::uint64_t>(iy) & 0xFFFFFFFFULL));
    }
    return boxes.size();
}

} // namespace

std::size_t count_boxes_points(const std::vector<Complex>& pts, double scale) {
    return count_boxes(pts, scale);
}

std::size_t count_boxes_polyline(const std::vector<Complex>& pts, double scale, bool closed) {
    std::vector<Complex> dense;
    const std::size_t n = pts.size();
    const std::size_t segs = closed ? n : (n > 0 ? n - 1 : 0);
    const double step = scale / 4.0;
    for (std::size_t i = 0; i < segs; ++i) {
        const Complex u = pts[i], v = pts[(i + 1) % n];
        const int m = std::max(1, static_cast<int>(std::ceil(std::abs(v - u) / step)));
        for (int k = 0; k <= m; ++k)
            dense.push_back(u + (v - u) * (static_cast<double>(k) / m));
    }
    return count_boxes(dense, scale);
}

double box_dimension_fit(const std::vector<double>& scales,
                         const std::vector<double>& counts) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (counts[i] <= 0) continue;
        x.push_back(std::log(1.0 / scales[i]));
        y.push_back(std::log(counts[i]));
    }
    return fit_line(x, y).slope;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit r;
    const std::size_t n = x.size();
    if (n < 2) return r;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double dn = static_cast<double>(n);
    const double vx = sxx - sx * sx / dn;
    const double vy = syy - sy * sy / dn;
    const double cxy = sxy - sx * sy / dn;
    if (vx <= 0) return r;
    r.slope = cxy / vx;
    r.intercept = (sy - r.slope * sx) / dn;
    r.r_squared = (vy <= 0) ? 1.0 : (cxy * cxy) / (vx * vy);
    return r;
}

} // namespace slelab
