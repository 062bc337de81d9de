#include "swarmpatrol/viewpoint.hpp"

#include <cmath>

#include "swarmpatrol/util.hpp"

namespace swarmpatrol {

double bearing_of(const Vec2& dir) {
  double deg = std::atan2(dir.x(), dir.y()) * 180.0 / M_PI;
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

namespace {

std::string surface_label(const Surface& s) {
  if (s.kind == Surface::Kind::Roof)
    return "building " + std::to_string(s.building_id) + " roof";
  return "building " + std::to_string(s.building_id) + " facade " +
         std::to_string(s.edge_index);
}

void tile_facade(const Surface& s, const CameraSpec& cam, int first_id,
                 ViewpointGenResult& res) {
  const double fw = cam.footprint_w();
  const double fh = cam.footprint_h();
  const int cols = std::max(1, static_cast<int>(std::ceil(s.width / fw - 1e-9)));
  const int rows = std::max(1, static_cast<int>(std::ceil(s.height / fh - 1e-9)));
  const double cw = s.width / cols;
  const double ch = s.height / rows;
  const double area_count = std::ceil(s.area / cam.footprint_area() - 1e-9);
  if (cols * rows > static_cast<int>(area_count)) {
    res.warnings.push_back(surface_label(s) + ": grid needs " +
                           std::to_string(cols * rows) + " viewpoints, " +
                           std::to_string(static_cast<int>(area_count)) +
                           " by area");
  }
  int id = first_id;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double u = (c + 0.5) * cw;
      const double v = (r + 0.5) * ch;
      const Vec2 foot = s.origin + u * s.u_dir;
      Viewpoint vp;
      vp.id = id++;
      vp.building_id = s.building_id;
      vp.patch_center = Vec3(foot.x(), foot.y(), v);
      vp.patch_w = cw;
      vp.patch_h = ch;
      const Vec2 hover = foot + cam.standoff_m * s.out_normal;
      vp.pos = Vec3(hover.x(), hover.y(), v);
      vp.bearing_deg = bearing_of(-s.out_normal);
      vp.tilt_deg = 0.0;
      res.viewpoints.push_back(vp);
    }
  }
}

void tile_roof(const Surface& s, const CameraSpec& cam, int first_id,
               ViewpointGenResult& res) {
  const OrientedBox& box = s.roof_box;
  const double w = 2.0 * box.half_u;
  const double h = 2.0 * box.half_v;
  const double fw = cam.footprint_w();
  const double fh = cam.footprint_h();
  const int cols = std::max(1, static_cast<int>(std::ceil(w / fw - 1e-9)));
  const int rows = std::max(1, static_cast<int>(std::ceil(h / fh - 1e-9)));
  const double cw = w / cols;
  const double ch = h / rows;
  const double roof_bearing = bearing_of(box.axis_u);
  int id = first_id;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double u = -box.half_u + (c + 0.5) * cw;
      const double v = -box.half_v + (r + 0.5) * ch;
      const Vec2 center = box.center + u * box.axis_u + v * box.axis_v;
      const double overlap = polygon_rect_intersection_area(
          s.roof_poly, center, box.axis_u, box.axis_v, 0.5 * cw, 0.5 * ch);
      if (overlap <= 1e-9) continue;
      Viewpoint vp;
      vp.id = id++;
      vp.building_id = s.building_id;
      vp.roof = true;
      vp.patch_center = Vec3(center.x(), center.y(), s.roof_z);
      vp.patch_w = cw;
      vp.patch_h = ch;
      vp.pos = Vec3(center.x(), center.y(), s.roof_z + cam.standoff_m);
      vp.bearing_deg = roof_bearing;
      vp.tilt_deg = 90.0;
      res.viewpoints.push_back(vp);
    }
  }
}

}  // namespace

ViewpointGenResult generate_viewpoints(const Surface& s, const CameraSpec& cam,
                                       int first_id) {
  ViewpointGenResult res;
  if (s.area < 1e-9) {
    res.warnings.push_back(surface_label(s) + ": area below tolerance, skipped");
    return res;
  }
  if (s.kind == Surface::Kind::Facade) {
    tile_facade(s, cam, first_id, res);
  } else {
    tile_roof(s, cam, first_id, res);
  }
  return res;
}

ViewpointGenResult generate_all_viewpoints(const std::vector<Building>& buildings,
                                           const CameraSpec& cam) {
  ViewpointGenResult all;
  int next_id = 1;
  for (const Building& b : buildings) {
    for (const Surface& s : build_surfaces(b)) {
      ViewpointGenResult r = generate_viewpoints(s, cam, next_id);
      next_id += static_cast<int>(r.viewpoints.size());
      all.viewpoints.insert(all.viewpoints.end(), r.viewpoints.begin(),
                            r.viewpoints.end());
      all.warnings.insert(all.warnings.end(), r.warnings.begin(),
                          r.warnings.end());
    }
  }
  return all;
}

ViewpointGenResult filter_blocked_viewpoints(const std::vector<Viewpoint>& vps,
                                             const std::vector<Building>& buildings,
                                             double clearance) {
  ViewpointGenResult res;
  res.viewpoints.reserve(vps.size());
  for (const Viewpoint& vp : vps) {
    const Building* blocker = nullptr;
    for (const Building& b : buildings) {
      if (distance_point_to_prism(b.footprint, b.height, vp.pos) < clearance) {
        blocker = &b;
        break;
      }
    }
    if (blocker) {
      res.warnings.push_back("viewpoint " + std::to_string(vp.id) +
                             " dropped: too close to building " +
                             std::to_string(blocker->id));
    } else {
      res.viewpoints.push_back(vp);
    }
  }
  return res;
}

}  // namespace swarmpatrol
