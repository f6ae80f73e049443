#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ncsattack::reach {

using Point = Eigen::Vector2d;

/// {p : <normal, p> <= offset}
struct Halfplane {
  Point normal;
  double offset = 0.0;
};

inline constexpr double kGeometryTol = 1e-9;

/// Vertices of the intersection of the halfplanes, counter-clockwise. The
/// result may collapse to a single point or a segment.
///
/// Throws DegenerateGeometry when the normals do not positively span the
/// plane (unbounded intersection) or when the intersection is empty.
std::vector<Point> intersect_halfplanes(std::span<const Halfplane> halfplanes,
                                        double tol = kGeometryTol);

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> points);

double cross(const Point& a, const Point& b);
double point_segment_distance(const Point& p, const Point& a, const Point& b);
double segment_distance(const Point& a, const Point& b, const Point& c, const Point& d);

/// Point-in-convex-polygon for CCW vertex lists with at least three vertices.
bool convex_contains(std::span<const Point> poly, const Point& p, double tol = 0.0);

/// Euclidean distance between two convex polygons given as CCW vertex lists
/// (points and segments allowed). Zero iff they intersect. Throws
/// DegenerateGeometry when either polygon is empty.
double convex_polygon_distance(std::span<const Point> p, std::span<const Point> q);

}  // namespace ncsattack::reach
