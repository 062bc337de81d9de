#ifndef SWARMPATROL_POLYGON_HPP_
#define SWARMPATROL_POLYGON_HPP_

#include <optional>
#include <string>
#include <vector>

#include "swarmpatrol/types.hpp"

namespace swarmpatrol {

using Polygon2 = std::vector<Vec2>;

// ---------------------------------------------------------------------------
// Basic polygon queries. Polygons are ordered vertex lists; closed implicitly.

double signed_area(const Polygon2& poly);
double polygon_area(const Polygon2& poly);  // absolute shoelace area
Vec2 polygon_centroid(const Polygon2& poly);
double polygon_perimeter(const Polygon2& poly);

/// Reorders in place so the polygon is counter-clockwise.
void ensure_ccw(Polygon2& poly);

/// Empty result means the polygon is simple; otherwise a diagnostic naming
/// the offending edge or vertex.
std::optional<std::string> simplicity_defect(const Polygon2& poly);

/// Strict interior test (boundary points count as outside).
bool point_strictly_inside(const Polygon2& poly, const Vec2& p, double eps = 1e-9);

/// 0 when p is inside or on the boundary.
double distance_to_polygon(const Polygon2& poly, const Vec2& p);

// ---------------------------------------------------------------------------
// Segments.

bool segments_properly_intersect(const Vec2& a, const Vec2& b,
                                 const Vec2& c, const Vec2& d);

/// True when segment a-b passes through the polygon interior: a proper edge
/// crossing, an endpoint strictly inside, or a chord whose midpoint is inside.
bool segment_crosses_polygon(const Polygon2& poly, const Vec2& a, const Vec2& b);

// ---------------------------------------------------------------------------
// Offsetting and bounding.

/// Outward offset with mitered corners. Conservative (a miter sticks out a
/// little farther than a true arc) which is the safe direction for clearance.
Polygon2 offset_polygon(const Polygon2& ccw_poly, double r);

Polygon2 convex_hull(Polygon2 points);

/// Minimum-area oriented bounding rectangle.
struct OrientedBox {
  Vec2 center{0, 0};
  Vec2 axis_u{1, 0};  // unit vector along the longer side
  Vec2 axis_v{0, 1};  // unit vector along the shorter side
  double half_u = 0;  // half extent along axis_u
  double half_v = 0;  // half extent along axis_v
};
OrientedBox min_area_obb(const Polygon2& poly);

/// Area of the intersection between `poly` and the oriented rectangle given
/// by center/axes/half extents (Sutherland-Hodgman clip).
double polygon_rect_intersection_area(const Polygon2& poly, const Vec2& center,
                                      const Vec2& axis_u, const Vec2& axis_v,
                                      double half_u, double half_v);

// ---------------------------------------------------------------------------
// Prisms: a footprint polygon extruded from z=0 to z=height.

/// Euclidean distance from a point to the solid prism; 0 when inside or on it.
double distance_point_to_prism(const Polygon2& footprint, double height,
                               const Vec3& p);

/// True when the open segment a-b passes through the prism interior. The test
/// clips the segment to z < height and then runs the 2D crossing test on the
/// clipped portion, so grazing the roof plane or the walls does not count.
bool segment_intersects_prism(const Polygon2& footprint, double height,
                              const Vec3& a, const Vec3& b, double eps = 1e-9);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_POLYGON_HPP_
