#include "ncsattack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ncsattack/errors.hpp"

namespace ncsattack::reach {

namespace {

struct Line {
  Point normal;  // unit
  double offset;
  double angle;
};

bool line_intersection(const Line& a, const Line& b, Point& out) {
  const double det = a.normal.x() * b.normal.y() - a.normal.y() * b.normal.x();
  if (std::abs(det) < 1e-14) return false;
  out.x() = (a.offset * b.normal.y() - b.offset * a.normal.y()) / det;
  out.y() = (a.normal.x() * b.offset - b.normal.x() * a.offset) / det;
  return true;
}

bool feasible(const Point& p, const std::vector<Line>& lines, double tol) {
  return std::all_of(lines.begin(), lines.end(), [&](const Line& l) {
    return l.normal.dot(p) <= l.offset + tol;
  });
}

std::vector<Point> dedupe_cyclic(std::vector<Point> pts, double tol) {
  std::vector<Point> out;
  for (const auto& p : pts) {
    if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
  return out;
}

}  // namespace

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

std::vector<Point> intersect_halfplanes(std::span<const Halfplane> halfplanes, double tol) {
  std::vector<Line> lines;
  lines.reserve(halfplanes.size());
  for (const auto& h : halfplanes) {
    const double n = h.normal.norm();
    if (!(n > 0.0)) throw DegenerateGeometry("halfplane with zero normal");
    const Point u = h.normal / n;
    lines.push_back({u, h.offset / n, std::atan2(u.y(), u.x())});
  }
  if (lines.size() < 3) throw DegenerateGeometry("need at least three halfplanes for a bounded polygon");

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return a.angle != b.angle ? a.angle < b.angle : a.offset < b.offset;
  });
  // Parallel duplicates: the tightest offset wins (it sorts first).
  std::vector<Line> unique;
  for (const auto& l : lines) {
    if (!unique.empty() && std::abs(l.angle - unique.back().angle) < 1e-12) continue;
    unique.push_back(l);
  }
  lines = std::move(unique);
  if (lines.size() < 3) throw DegenerateGeometry("need at least three distinct directions");

  double max_gap = 0.0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double next = i + 1 < lines.size() ? lines[i + 1].angle
                                             : lines[0].angle + 2.0 * std::numbers::pi;
    max_gap = std::max(max_gap, next - lines[i].angle);
  }
  if (max_gap >= std::numbers::pi - 1e-12)
    throw DegenerateGeometry("directions do not positively span the plane; intersection is unbounded");

  // Adjacent supporting lines give every vertex unless some halfplane is
  // redundant; fall back to all pairs + hull in that case.
  std::vector<Point> verts;
  bool all_valid = true;
  for (std::size_t i = 0; i < lines.size() && all_valid; ++i) {
    Point p;
    if (!line_intersection(lines[i], lines[(i + 1) % lines.size()], p) || !feasible(p, lines, tol))
      all_valid = false;
    else
      verts.push_back(p);
  }
  if (all_valid) {
    auto out = dedupe_cyclic(std::move(verts), tol);
    return out;
  }

  std::vector<Point> candidates;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      Point p;
      if (line_intersection(lines[i], lines[j], p) && feasible(p, lines, tol)) candidates.push_back(p);
    }
  }
  if (candidates.empty()) throw DegenerateGeometry("halfplane intersection is empty");
  auto hull = convex_hull(std::move(candidates));
  return dedupe_cyclic(std::move(hull), tol);
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double segment_distance(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

bool convex_contains(std::span<const Point> poly, const Point& p, double tol) {
  if (poly.size() < 3) return false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    const Point e = b - a;
    if (cross(e, p - a) < -tol * e.norm()) return false;
  }
  return true;
}

double convex_polygon_distance(std::span<const Point> p, std::span<const Point> q) {
  if (p.empty() || q.empty()) throw DegenerateGeometry("polygon distance on an empty polygon");
  if (convex_contains(p, q.front()) || convex_contains(q, p.front())) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point& a = p[i];
    const Point& b = p[(i + 1) % p.size()];
    for (std::size_t j = 0; j < q.size(); ++j) {
      best = std::min(best, segment_distance(a, b, q[j], q[(j + 1) % q.size()]));
      if (best == 0.0) return 0.0;
    }
  }
  return best;
}

}  // namespace ncsattack::reach
