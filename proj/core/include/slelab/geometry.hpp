#ifndef SLELAB_GEOMETRY_HPP
#define SLELAB_GEOMETRY_HPP

#include <vector>

#include "slelab/types.hpp"

namespace slelab {

/// Winding number of a closed polyline around z (vertices need not repeat
/// the first point; closure is implied).
int winding_number(const std::vector<Complex>& polygon, Complex z);

bool point_in_polygon(const std::vector<Complex>& polygon, Complex z);

Complex polygon_centroid(const std::vector<Complex>& polygon);

double polyline_diameter(const std::vector<Complex>& pts);

/// Distance from z to the closed polygonal boundary.
double distance_to_polyline(const std::vector<Complex>& polygon, Complex z, bool closed);

/// True if no two non-adjacent segments of the closed polyline intersect.
/// Brute force O(n^2); intended for construction-time validation.
bool polygon_is_simple(const std::vector<Complex>& polygon);

/// One-sided Hausdorff distance from pts of `a` (densified segments) to
/// polyline `b`, maximized symmetrically.
double polyline_hausdorff_distance(const std::vector<Complex>& a,
                                   const std::vector<Complex>& b,
                                   bool closed);

/// Box-counting over square boxes of side `scale`: number of distinct boxes
/// touched by the points.
std::size_t count_boxes_points(const std::vector<Complex>& pts, double scale);

/// Box count for a closed/open polyline: segments are densified at step
/// scale/4 before counting, so boxes crossed between vertices are included.
std::size_t count_boxes_polyline(const std::vector<Complex>& pts, double scale, bool closed);

/// Least-squares slope of log(counts) against log(1/scale).
double box_dimension_fit(const std::vector<double>& scales,
                         const std::vector<double>& counts);

/// Unweighted least-squares fit y = slope*x + intercept; r_squared optional.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace slelab

#endif
