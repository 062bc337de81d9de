#include "swarmpatrol/polygon.hpp"

#include <algorithm>
#include <cmath>

namespace swarmpatrol {

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

double signed_area(const Polygon2& poly) {
  double twice = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

double polygon_area(const Polygon2& poly) { return std::abs(signed_area(poly)); }

Vec2 polygon_centroid(const Polygon2& poly) {
  // Area-weighted centroid; falls back to the vertex mean for degenerate area.
  const size_t n = poly.size();
  double twice = 0.0;
  Vec2 acc(0, 0);
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double w = p.x() * q.y() - q.x() * p.y();
    twice += w;
    acc += w * (p + q);
  }
  if (std::abs(twice) < 1e-12) {
    Vec2 mean(0, 0);
    for (const Vec2& p : poly) mean += p;
    return mean / static_cast<double>(n);
  }
  return acc / (3.0 * twice);
}

double polygon_perimeter(const Polygon2& poly) {
  double len = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) len += (poly[(i + 1) % n] - poly[i]).norm();
  return len;
}

void ensure_ccw(Polygon2& poly) {
  if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
}

std::optional<std::string> simplicity_defect(const Polygon2& poly) {
  const size_t n = poly.size();
  if (n < 3) return "polygon has fewer than 3 vertices";
  for (size_t i = 0; i < n; ++i) {
    if ((poly[(i + 1) % n] - poly[i]).norm() < kGeomTol) {
      return "zero-length edge " + std::to_string(i) + " (vertices " +
             std::to_string(i) + " and " + std::to_string((i + 1) % n) + ")";
    }
  }
  if (polygon_area(poly) < 1e-9) return "polygon area below 1e-9";
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      // Skip edges sharing a vertex; their crossing tests are vacuous.
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_intersect(poly[i], poly[(i + 1) % n], poly[j],
                                      poly[(j + 1) % n])) {
        return "edges " + std::to_string(i) + " and " + std::to_string(j) +
               " intersect";
      }
    }
  }
  return std::nullopt;
}

bool point_strictly_inside(const Polygon2& poly, const Vec2& p, double eps) {
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= eps) return false;
  }
  // Crossing number; boundary cases were excluded above.
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_polygon(const Polygon2& poly, const Vec2& p) {
  if (point_strictly_inside(poly, p, 1e-12)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
  }
  return best;
}

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                                 const Vec2& d) {
  const double d1 = cross2(c, d, a);
  const double d2 = cross2(c, d, b);
  const double d3 = cross2(a, b, c);
  const double d4 = cross2(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool segment_crosses_polygon(const Polygon2& poly, const Vec2& a, const Vec2& b) {
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    if (segments_properly_intersect(a, b, poly[i], poly[(i + 1) % n])) return true;
  }
  if (point_strictly_inside(poly, a)) return true;
  if (point_strictly_inside(poly, b)) return true;
  // Chord case: both endpoints on (or outside near) the boundary.
  return point_strictly_inside(poly, 0.5 * (a + b));
}

Polygon2 offset_polygon(const Polygon2& ccw_poly, double r) {
  const size_t n = ccw_poly.size();
  Polygon2 out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const Vec2& prev = ccw_poly[(i + n - 1) % n];
    const Vec2& cur = ccw_poly[i];
    const Vec2& next = ccw_poly[(i + 1) % n];
    Vec2 d1 = (cur - prev).normalized();
    Vec2 d2 = (next - cur).normalized();
    const Vec2 n1(d1.y(), -d1.x());  // outward normal for a CCW polygon
    const Vec2 n2(d2.y(), -d2.x());
    // Intersection of the two shifted edge lines (miter point).
    const Vec2 p1 = cur + r * n1;
    const Vec2 p2 = cur + r * n2;
    const double denom = d1.x() * d2.y() - d1.y() * d2.x();
    if (std::abs(denom) < 1e-12) {
      out.push_back(cur + r * n1);  // collinear edges
      continue;
    }
    // Solve p1 + t*d1 = p2 + s*d2.
    const Vec2 rhs = p2 - p1;
    const double t = (rhs.x() * d2.y() - rhs.y() * d2.x()) / denom;
    out.push_back(p1 + t * d1);
  }
  return out;
}

Polygon2 convex_hull(Polygon2 pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return (a - b).norm() < 1e-12;
                        }),
            pts.end());
  const size_t n = pts.size();
  if (n < 3) return pts;
  Polygon2 hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

OrientedBox min_area_obb(const Polygon2& poly) {
  const Polygon2 hull = convex_hull(poly);
  OrientedBox best;
  if (hull.size() < 3) {
    // Degenerate input; axis along the longest span.
    if (hull.size() == 2) {
      const Vec2 d = hull[1] - hull[0];
      best.center = 0.5 * (hull[0] + hull[1]);
      best.axis_u = d.normalized();
      best.axis_v = Vec2(-best.axis_u.y(), best.axis_u.x());
      best.half_u = 0.5 * d.norm();
      best.half_v = 0.0;
    } else if (hull.size() == 1) {
      best.center = hull[0];
    }
    return best;
  }
  double best_area = std::numeric_limits<double>::infinity();
  const size_t n = hull.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 e = (hull[(i + 1) % n] - hull[i]).normalized();
    const Vec2 f(-e.y(), e.x());
    double min_u = std::numeric_limits<double>::infinity(), max_u = -min_u;
    double min_v = min_u, max_v = -min_u;
    for (const Vec2& p : hull) {
      const double u = p.dot(e);
      const double v = p.dot(f);
      min_u = std::min(min_u, u);
      max_u = std::max(max_u, u);
      min_v = std::min(min_v, v);
      max_v = std::max(max_v, v);
    }
    const double area = (max_u - min_u) * (max_v - min_v);
    if (area < best_area - 1e-12) {
      best_area = area;
      Vec2 axis_u = e, axis_v = f;
      double hu = 0.5 * (max_u - min_u), hv = 0.5 * (max_v - min_v);
      if (hv > hu) {  // keep axis_u the longer side
        std::swap(axis_u, axis_v);
        std::swap(hu, hv);
      }
      best.axis_u = axis_u;
      best.axis_v = axis_v;
      best.half_u = hu;
      best.half_v = hv;
      best.center = 0.5 * (min_u + max_u) * e + 0.5 * (min_v + max_v) * f;
    }
  }
  return best;
}

double polygon_rect_intersection_area(const Polygon2& poly, const Vec2& center,
                                      const Vec2& axis_u, const Vec2& axis_v,
                                      double half_u, double half_v) {
  // Clip `poly` against the four half-planes of the rectangle.
  struct HalfPlane {
    Vec2 n;      // inward normal
    double off;  // n.dot(x) >= off inside
  };
  const HalfPlane planes[4] = {
      {axis_u, center.dot(axis_u) - half_u},
      {-axis_u, -(center.dot(axis_u) + half_u)},
      {axis_v, center.dot(axis_v) - half_v},
      {-axis_v, -(center.dot(axis_v) + half_v)},
  };
  Polygon2 cur = poly;
  for (const HalfPlane& hp : planes) {
    if (cur.empty()) break;
    Polygon2 next;
    const size_t n = cur.size();
    for (size_t i = 0; i < n; ++i) {
      const Vec2& a = cur[i];
      const Vec2& b = cur[(i + 1) % n];
      const double da = a.dot(hp.n) - hp.off;
      const double db = b.dot(hp.n) - hp.off;
      if (da >= 0) next.push_back(a);
      if ((da >= 0) != (db >= 0)) {
        const double t = da / (da - db);
        next.push_back(a + t * (b - a));
      }
    }
    cur = std::move(next);
  }
  if (cur.size() < 3) return 0.0;
  return polygon_area(cur);
}

double distance_point_to_prism(const Polygon2& footprint, double height,
                               const Vec3& p) {
  const double dz = std::max(0.0, p.z() - height);
  const double dxy = distance_to_polygon(footprint, Vec2(p.x(), p.y()));
  return std::hypot(dxy, dz);
}

bool segment_intersects_prism(const Polygon2& footprint, double height,
                              const Vec3& a, const Vec3& b, double eps) {
  // Parameter range where the segment sits below the roof plane.
  double t0 = 0.0, t1 = 1.0;
  const double za = a.z(), zb = b.z();
  const double zcap = height - eps;
  if (za >= zcap && zb >= zcap) return false;
  if (za > zcap || zb > zcap) {
    const double tc = (zcap - za) / (zb - za);
    if (za > zcap) t0 = std::max(t0, tc);
    else t1 = std::min(t1, tc);
  }
  if (t0 >= t1) return false;
  const Vec2 a2(a.x(), a.y());
  const Vec2 b2(b.x(), b.y());
  const Vec2 p = a2 + t0 * (b2 - a2);
  const Vec2 q = a2 + t1 * (b2 - a2);
  if ((q - p).norm() < 1e-12) return point_strictly_inside(footprint, p, eps);
  return segment_crosses_polygon(footprint, p, q);
}

}  // namespace swarmpatrol
