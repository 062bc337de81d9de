#ifndef SWARMPATROL_TESTS_SUPPORT_HPP_
#define SWARMPATROL_TESTS_SUPPORT_HPP_

// Shared fixtures and oracles for the test binaries. Everything here is
// deliberately independent of the library internals it checks: the grid
// planner, the shoelace area and the ring builder only use public types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "swarmpatrol/building.hpp"
#include "swarmpatrol/metrics.hpp"
#include "swarmpatrol/routing.hpp"
#include "swarmpatrol/simkernel.hpp"
#include "swarmpatrol/tasks.hpp"

namespace sptest {

using swarmpatrol::Building;
using swarmpatrol::ClosedPath;
using swarmpatrol::DistanceOracle;
using swarmpatrol::Polygon2;
using swarmpatrol::Task;
using swarmpatrol::TaskFacts;
using swarmpatrol::Vec2;
using swarmpatrol::Vec3;
using swarmpatrol::Viewpoint;

inline double shoelace(const Polygon2& poly) {
  double s = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return std::abs(s) / 2.0;
}

// Direction of the optical axis for a compass bearing (degrees clockwise
// from +Y) and tilt (0 = level, 90 = straight down).
inline Vec3 look_direction(double bearing_deg, double tilt_deg) {
  const double b = bearing_deg * M_PI / 180.0;
  const double t = tilt_deg * M_PI / 180.0;
  return Vec3(std::sin(b) * std::cos(t), std::cos(b) * std::cos(t),
              -std::sin(t));
}

// A closed ring of n viewpoints with the given chord spacing, packaged as a
// single two-seat task over obstacle-free space. The oracle sees no
// buildings, so every leg is a straight line and the path length is exactly
// n * spacing.
struct RingFixture {
  std::vector<Viewpoint> vps;
  std::vector<Task> tasks;
  std::vector<TaskFacts> facts;
  std::shared_ptr<const DistanceOracle> oracle;
  std::vector<int> vp_ids;
  double radius = 0.0;
  double length = 0.0;
};

inline RingFixture make_ring(int n, double spacing, int capacity) {
  RingFixture r;
  r.radius = spacing / (2.0 * std::sin(M_PI / n));
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * M_PI * i / n;
    Viewpoint v;
    v.id = i + 1;
    v.building_id = 1;
    v.pos = Vec3(r.radius * std::cos(th), r.radius * std::sin(th), 5.0);
    v.patch_center = Vec3(0.0, 0.0, 5.0);
    r.vps.push_back(v);
    r.vp_ids.push_back(v.id);
  }
  r.oracle =
      std::make_shared<DistanceOracle>(std::vector<Building>{}, r.vps, 1.0);
  ClosedPath path;
  for (int i = 0; i < n; ++i) {
    path.viewpoint_ids.push_back(i + 1);
    path.length += r.oracle->distance(i + 1, (i + 1) % n + 1);
  }
  r.length = path.length;
  Task t;
  t.id = 1;
  t.building_id = 1;
  t.path = path;
  t.capacity = capacity;
  r.tasks.push_back(t);
  TaskFacts f;
  f.id = 1;
  f.capacity = capacity;
  f.priority = 0.0;
  f.centroid = Vec3(0.0, 0.0, 5.0);
  r.facts.push_back(f);
  return r;
}

// Independent shortest-path oracle: A* over a 16-connected planar grid at a
// fixed altitude, treating every point within `clearance` of a footprint as
// blocked. The 16-neighborhood keeps the metric distortion below ~2.8%,
// well inside the 5% agreement band the routing checks use.
inline double grid_astar_distance(const Vec2& start, const Vec2& goal,
                                  const std::vector<Polygon2>& footprints,
                                  double clearance, double cell,
                                  const Vec2& lo, const Vec2& hi) {
  const int nx = static_cast<int>(std::ceil((hi.x() - lo.x()) / cell)) + 1;
  const int ny = static_cast<int>(std::ceil((hi.y() - lo.y()) / cell)) + 1;
  auto blocked = [&](int ix, int iy) {
    if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return true;
    const Vec2 p(lo.x() + ix * cell, lo.y() + iy * cell);
    for (const Polygon2& fp : footprints) {
      if (swarmpatrol::distance_to_polygon(fp, p) < clearance) return true;
    }
    return false;
  };
  auto snap = [&](const Vec2& p) {
    return std::pair<int, int>(
        static_cast<int>(std::lround((p.x() - lo.x()) / cell)),
        static_cast<int>(std::lround((p.y() - lo.y()) / cell)));
  };
  const auto [sx, sy] = snap(start);
  const auto [gx, gy] = snap(goal);

  static const int kMoves[16][2] = {
      {1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},   {1, -1}, {-1, 1}, {-1, -1},
      {1, 2},  {2, 1},  {-1, 2}, {-2, 1}, {1, -2},  {2, -1}, {-1, -2}, {-2, -1}};

  std::vector<double> dist(static_cast<size_t>(nx) * ny,
                           std::numeric_limits<double>::infinity());
  auto idx = [&](int x, int y) { return static_cast<size_t>(y) * nx + x; };
  using QItem = std::pair<double, std::pair<int, int>>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> open;
  auto h = [&](int x, int y) {
    return std::hypot((x - gx) * cell, (y - gy) * cell);
  };
  dist[idx(sx, sy)] = 0.0;
  open.push({h(sx, sy), {sx, sy}});
  while (!open.empty()) {
    const auto [f, xy] = open.top();
    open.pop();
    const auto [x, y] = xy;
    if (x == gx && y == gy) return dist[idx(x, y)];
    if (f > dist[idx(x, y)] + h(x, y) + 1e-9) continue;
    for (const auto& m : kMoves) {
      const int nx2 = x + m[0], ny2 = y + m[1];
      if (blocked(nx2, ny2)) continue;
      // Knight moves can clip a corner; require the midpoint clear too.
      if (std::abs(m[0]) + std::abs(m[1]) == 3 &&
          (blocked(x + m[0] / 2, y + (m[1] + (m[1] > 0 ? 1 : -1)) / 2) ||
           blocked(x + (m[0] + (m[0] > 0 ? 1 : -1)) / 2, y + m[1] / 2)))
        continue;
      const double nd =
          dist[idx(x, y)] + std::hypot(m[0] * cell, m[1] * cell);
      if (nd < dist[idx(nx2, ny2)]) {
        dist[idx(nx2, ny2)] = nd;
        open.push({nd + h(nx2, ny2), {nx2, ny2}});
      }
    }
  }
  return std::numeric_limits<double>::infinity();
}

// Exhaustive best tour over points indexed 0..n-1 (first index pinned).
inline double brute_force_tour(const std::vector<std::vector<double>>& d) {
  const int n = static_cast<int>(d.size());
  std::vector<int> perm;
  for (int i = 1; i < n; ++i) perm.push_back(i);
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = d[0][perm.front()] + d[perm.back()][0];
    for (size_t i = 0; i + 1 < perm.size(); ++i) len += d[perm[i]][perm[i + 1]];
    best = std::min(best, len);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Exhaustive min-weight perfect matching value (pairs up indices 0..n-1).
inline double brute_force_matching(const std::vector<std::vector<double>>& w) {
  const int n = static_cast<int>(w.size());
  std::vector<int> unpaired;
  for (int i = 0; i < n; ++i) unpaired.push_back(i);
  std::function<double(std::vector<int>&)> rec = [&](std::vector<int>& rest) {
    if (rest.empty()) return 0.0;
    const int a = rest.front();
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 1; k < rest.size(); ++k) {
      const int b = rest[k];
      std::vector<int> next;
      for (size_t j = 1; j < rest.size(); ++j)
        if (j != k) next.push_back(rest[j]);
      best = std::min(best, w[a][b] + rec(next));
    }
    return best;
  };
  return rec(unpaired);
}

inline double urand(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace sptest

#endif  // SWARMPATROL_TESTS_SUPPORT_HPP_
