#ifndef SWARMPATROL_ROUTING_HPP_
#define SWARMPATROL_ROUTING_HPP_

#include <unordered_map>
#include <vector>

#include "swarmpatrol/building.hpp"
#include "swarmpatrol/viewpoint.hpp"

namespace swarmpatrol {

// Collision-free flight distances between viewpoints, with building prisms
// inflated by a clearance margin.
//
// One shared waypoint graph serves every query: nodes are the viewpoints
// plus inflated footprint corners repeated at a ladder of useful altitudes,
// edges are straight 3D segments that clear every inflated prism, weighted
// by Euclidean length. Distances are shortest paths in that fixed graph, so
// the table is symmetric, dominates straight-line distance, and satisfies
// the triangle inequality by construction. When the direct segment between
// two viewpoints is clear the graph contains it, and the distance is exactly
// Euclidean.
class DistanceOracle {
 public:
  DistanceOracle(std::vector<Building> buildings, std::vector<Viewpoint> vps,
                 double clearance);

  // Shortest flyable distance between two viewpoints (by id).
  double distance(int vp_a, int vp_b) const;

  // Waypoint polyline from a to b, including both endpoints.
  std::vector<Vec3> route(int vp_a, int vp_b) const;

  // Route from an arbitrary free-space point to a viewpoint. Pure; safe to
  // call concurrently. Throws RouteError when p is inside an inflated prism
  // or no route exists.
  std::vector<Vec3> route_from_point(const Vec3& p, int vp_id) const;

  // True when p keeps the clearance margin from every building prism.
  bool point_clear(const Vec3& p) const;

  double clearance() const { return clearance_; }
  const std::vector<Building>& buildings() const { return buildings_; }
  const std::vector<Viewpoint>& viewpoints() const { return vps_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }

 private:
  int vp_index(int vp_id) const;
  void dijkstra(int src, std::vector<double>& dist, std::vector<int>& parent) const;
  bool segment_clear(const Vec3& a, const Vec3& b) const;

  std::vector<Building> buildings_;
  std::vector<Polygon2> inflated_;       // one per building, CCW
  std::vector<double> inflated_height_;  // prism height + clearance
  std::vector<Viewpoint> vps_;
  std::unordered_map<int, int> id_to_index_;

  std::vector<Vec3> nodes_;  // first |vps_| entries are the viewpoints
  std::vector<std::vector<std::pair<int, double>>> adj_;

  // Per-viewpoint shortest path trees, filled at construction.
  std::vector<std::vector<double>> dist_rows_;
  std::vector<std::vector<int>> parent_rows_;

  double clearance_ = 1.0;
};

// One-off distance query without keeping an oracle around.
double obstacle_distance(const Viewpoint& a, const Viewpoint& b,
                         const std::vector<Building>& buildings,
                         double clearance);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_ROUTING_HPP_
