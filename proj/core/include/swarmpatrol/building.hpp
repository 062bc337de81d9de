#ifndef SWARMPATROL_BUILDING_HPP_
#define SWARMPATROL_BUILDING_HPP_

#include <string>
#include <vector>

#include "swarmpatrol/polygon.hpp"
#include "swarmpatrol/types.hpp"

namespace swarmpatrol {

struct CameraSpec {
  double fov_w_deg = 84.0;
  double fov_h_deg = 50.0;
  double standoff_m = 10.0;

  // Image footprint on a surface at the standoff distance.
  double footprint_w() const;
  double footprint_h() const;
  double footprint_area() const { return footprint_w() * footprint_h(); }
};

struct Building {
  int id = 0;
  Polygon2 footprint;  // CCW after validation
  double height = 0.0;
  double priority = 0.0;
};

// One flat face to be imaged: either a vertical facade along a footprint
// edge or the (possibly non-rectangular) roof.
struct Surface {
  enum class Kind { Facade, Roof };
  Kind kind = Kind::Facade;
  int building_id = 0;
  int edge_index = -1;  // facades only

  // Facade frame: origin is the start of the edge (walking CCW), u runs
  // along the edge; the surface spans [0,width] x [0,height] with v = z.
  Vec2 origin;
  Vec2 u_dir;
  Vec2 out_normal;
  double width = 0.0;
  double height = 0.0;

  // Roof data (valid when kind == Roof).
  Polygon2 roof_poly;
  OrientedBox roof_box;  // min-area box, tiling frame
  double roof_z = 0.0;

  double area = 0.0;
};

// Validates and canonicalizes the footprint (throws NonSimplePolygonError on
// defects, InvariantError on non-positive height), then enumerates one facade
// per footprint edge plus the roof.
std::vector<Surface> build_surfaces(const Building& b);

Vec2 building_centroid(const Building& b);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_BUILDING_HPP_
