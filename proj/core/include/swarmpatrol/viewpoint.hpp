#ifndef SWARMPATROL_VIEWPOINT_HPP_
#define SWARMPATROL_VIEWPOINT_HPP_

#include <string>
#include <vector>

#include "swarmpatrol/building.hpp"
#include "swarmpatrol/types.hpp"

namespace swarmpatrol {

// A hover pose from which one camera frame is captured.
struct Viewpoint {
  int id = 0;
  int building_id = 0;
  Vec3 pos;
  double bearing_deg = 0.0;  // compass: clockwise from +Y
  double tilt_deg = 0.0;     // 0 = level forward, 90 = straight down
  bool roof = false;

  // The surface patch this viewpoint images.
  Vec3 patch_center;
  double patch_w = 0.0;
  double patch_h = 0.0;
};

struct ViewpointGenResult {
  std::vector<Viewpoint> viewpoints;
  std::vector<std::string> warnings;
};

// Tiles one surface with camera-sized patches and emits a viewpoint per
// patch. Ids run sequentially from first_id.
ViewpointGenResult generate_viewpoints(const Surface& s, const CameraSpec& cam,
                                       int first_id);

// All surfaces of all buildings; ids dense from 1 in building order.
ViewpointGenResult generate_all_viewpoints(const std::vector<Building>& buildings,
                                           const CameraSpec& cam);

// Drops viewpoints whose hover position is inside or within `clearance` of
// any building prism (its own included). Kept viewpoints retain ids and
// order; one warning per drop.
ViewpointGenResult filter_blocked_viewpoints(const std::vector<Viewpoint>& vps,
                                             const std::vector<Building>& buildings,
                                             double clearance);

double bearing_of(const Vec2& dir);  // degrees CW from +Y, in [0, 360)

}  // namespace swarmpatrol

#endif  // SWARMPATROL_VIEWPOINT_HPP_
