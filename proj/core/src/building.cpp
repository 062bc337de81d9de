#include "swarmpatrol/building.hpp"

#include <cmath>

#include "swarmpatrol/errors.hpp"

namespace swarmpatrol {

double CameraSpec::footprint_w() const {
  return 2.0 * standoff_m * std::tan(0.5 * fov_w_deg * M_PI / 180.0);
}

double CameraSpec::footprint_h() const {
  return 2.0 * standoff_m * std::tan(0.5 * fov_h_deg * M_PI / 180.0);
}

std::vector<Surface> build_surfaces(const Building& b) {
  if (b.height <= 0.0) {
    throw InvariantError("building " + std::to_string(b.id) +
                         ": height must be positive");
  }
  Polygon2 poly = b.footprint;
  if (auto defect = simplicity_defect(poly)) {
    throw NonSimplePolygonError("building " + std::to_string(b.id) + ": " +
                                *defect);
  }
  ensure_ccw(poly);

  std::vector<Surface> out;
  const size_t n = poly.size();
  out.reserve(n + 1);
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& c = poly[(i + 1) % n];
    Surface s;
    s.kind = Surface::Kind::Facade;
    s.building_id = b.id;
    s.edge_index = static_cast<int>(i);
    s.origin = a;
    s.u_dir = (c - a).normalized();
    s.out_normal = Vec2(s.u_dir.y(), -s.u_dir.x());  // right of travel on CCW
    s.width = (c - a).norm();
    s.height = b.height;
    s.area = s.width * s.height;
    out.push_back(std::move(s));
  }

  Surface roof;
  roof.kind = Surface::Kind::Roof;
  roof.building_id = b.id;
  roof.roof_poly = poly;
  roof.roof_box = min_area_obb(poly);
  roof.roof_z = b.height;
  roof.area = polygon_area(poly);
  out.push_back(std::move(roof));
  return out;
}

Vec2 building_centroid(const Building& b) { return polygon_centroid(b.footprint); }

}  // namespace swarmpatrol
