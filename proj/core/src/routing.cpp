#include "swarmpatrol/routing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "swarmpatrol/errors.hpp"

namespace swarmpatrol {

namespace {

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Min-heap entry; ties broken on node index for determinism.
using QEntry = std::pair<double, int>;

}  // namespace

DistanceOracle::DistanceOracle(std::vector<Building> buildings,
                               std::vector<Viewpoint> vps, double clearance)
    : buildings_(std::move(buildings)), vps_(std::move(vps)), clearance_(clearance) {
  inflated_.reserve(buildings_.size());
  inflated_height_.reserve(buildings_.size());
  for (const Building& b : buildings_) {
    Polygon2 ccw = b.footprint;
    ensure_ccw(ccw);
    inflated_.push_back(offset_polygon(ccw, clearance_));
    inflated_height_.push_back(b.height + clearance_);
  }

  for (size_t i = 0; i < vps_.size(); ++i) {
    id_to_index_[vps_[i].id] = static_cast<int>(i);
    for (size_t k = 0; k < buildings_.size(); ++k) {
      if (distance_point_to_prism(buildings_[k].footprint, buildings_[k].height,
                                  vps_[i].pos) < clearance_ - 1e-9) {
        throw RouteError("viewpoint " + std::to_string(vps_[i].id) +
                         " is inside the clearance envelope of building " +
                         std::to_string(buildings_[k].id));
      }
    }
    nodes_.push_back(vps_[i].pos);
  }

  // Detour waypoints: each building's inflated corners, repeated at that
  // building's viewpoint altitudes plus its overfly level.
  for (size_t k = 0; k < buildings_.size(); ++k) {
    std::set<long> z_keys;
    std::vector<double> levels;
    auto add_level = [&](double z) {
      const long key = std::lround(z * 4.0);  // dedupe within 0.25 m
      if (z > 0.0 && z_keys.insert(key).second) levels.push_back(z);
    };
    for (const Viewpoint& vp : vps_) {
      if (vp.building_id == buildings_[k].id) add_level(vp.pos.z());
    }
    add_level(inflated_height_[k]);
    std::sort(levels.begin(), levels.end());
    for (const Vec2& c : inflated_[k]) {
      for (double z : levels) nodes_.emplace_back(c.x(), c.y(), z);
    }
  }

  const int n = static_cast<int>(nodes_.size());
  std::vector<std::tuple<int, int, double>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!segment_clear(nodes_[i], nodes_[j])) continue;
      edges.emplace_back(i, j, (nodes_[i] - nodes_[j]).norm());
    }
  }

  // The raw visibility graph is nearly complete, so every route query would
  // crawl through hundreds of thousands of edges. Any edge that some
  // two-hop detour matches or beats is dropped; that keeps every shortest
  // distance bit-exact while thinning the graph to near-linear density.
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kUnreachable));
  for (int i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& [i, j, w] : edges) d[i][j] = d[j][i] = w;
  for (int k = 0; k < n; ++k) {
    const double* dk = d[k].data();
    for (int i = 0; i < n; ++i) {
      const double dik = d[i][k];
      if (!std::isfinite(dik)) continue;
      double* di = d[i].data();
      for (int j = 0; j < n; ++j) {
        const double nd = dik + dk[j];
        if (nd < di[j]) di[j] = nd;
      }
    }
  }
  adj_.assign(n, {});
  for (const auto& [i, j, w] : edges) {
    bool redundant = false;
    const double* di = d[i].data();
    const double* dj = d[j].data();
    for (int v = 0; v < n; ++v) {
      if (v != i && v != j && di[v] + dj[v] <= w + 1e-9) {
        redundant = true;
        break;
      }
    }
    if (!redundant) {
      adj_[i].emplace_back(j, w);
      adj_[j].emplace_back(i, w);
    }
  }

  const int nv = static_cast<int>(vps_.size());
  dist_rows_.resize(nv);
  parent_rows_.resize(nv);
  for (int i = 0; i < nv; ++i) dijkstra(i, dist_rows_[i], parent_rows_[i]);
}

bool DistanceOracle::point_clear(const Vec3& p) const {
  for (const Building& b : buildings_) {
    if (distance_point_to_prism(b.footprint, b.height, p) < clearance_ - 1e-9)
      return false;
  }
  return true;
}

bool DistanceOracle::segment_clear(const Vec3& a, const Vec3& b) const {
  for (size_t k = 0; k < inflated_.size(); ++k) {
    if (segment_intersects_prism(inflated_[k], inflated_height_[k], a, b))
      return false;
  }
  return true;
}

void DistanceOracle::dijkstra(int src, std::vector<double>& dist,
                              std::vector<int>& parent) const {
  const int n = static_cast<int>(nodes_.size());
  dist.assign(n, kUnreachable);
  parent.assign(n, -1);
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : adj_[u]) {
      const double nd = d + w;
      if (nd < dist[v] || (nd == dist[v] && parent[v] >= 0 && u < parent[v])) {
        dist[v] = nd;
        parent[v] = u;
        pq.emplace(nd, v);
      }
    }
  }
}

int DistanceOracle::vp_index(int vp_id) const {
  const auto it = id_to_index_.find(vp_id);
  if (it == id_to_index_.end())
    throw RouteError("unknown viewpoint id " + std::to_string(vp_id));
  return it->second;
}

double DistanceOracle::distance(int vp_a, int vp_b) const {
  const int a = vp_index(vp_a);
  const int b = vp_index(vp_b);
  const double d = dist_rows_[a][b];
  if (!std::isfinite(d))
    throw RouteError("no route between viewpoints " + std::to_string(vp_a) +
                     " and " + std::to_string(vp_b));
  return d;
}

std::vector<Vec3> DistanceOracle::route(int vp_a, int vp_b) const {
  const int a = vp_index(vp_a);
  const int b = vp_index(vp_b);
  if (!std::isfinite(dist_rows_[a][b]))
    throw RouteError("no route between viewpoints " + std::to_string(vp_a) +
                     " and " + std::to_string(vp_b));
  std::vector<Vec3> out;
  for (int cur = b; cur != -1; cur = parent_rows_[a][cur]) {
    out.push_back(nodes_[cur]);
    if (cur == a) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Vec3> DistanceOracle::route_from_point(const Vec3& p, int vp_id) const {
  if (!point_clear(p))
    throw RouteError("start point is inside a building clearance envelope");
  const int target = vp_index(vp_id);
  const int n = static_cast<int>(nodes_.size());
  // Temporary source node n, linked to every visible graph node.
  std::vector<double> dist(n + 1, kUnreachable);
  std::vector<int> parent(n + 1, -1);
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> pq;
  dist[n] = 0.0;
  pq.emplace(0.0, n);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == target) break;
    if (u == n) {
      for (int v = 0; v < n; ++v) {
        if (!segment_clear(p, nodes_[v])) continue;
        const double nd = (nodes_[v] - p).norm();
        if (nd < dist[v]) {
          dist[v] = nd;
          parent[v] = n;
          pq.emplace(nd, v);
        }
      }
      continue;
    }
    for (const auto& [v, w] : adj_[u]) {
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        parent[v] = u;
        pq.emplace(nd, v);
      }
    }
  }
  if (!std::isfinite(dist[target]))
    throw RouteError("no route from point to viewpoint " + std::to_string(vp_id));
  std::vector<Vec3> out;
  for (int cur = target; cur != -1; cur = parent[cur]) {
    out.push_back(cur == n ? p : nodes_[cur]);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double obstacle_distance(const Viewpoint& a, const Viewpoint& b,
                         const std::vector<Building>& buildings,
                         double clearance) {
  Viewpoint a2 = a, b2 = b;
  a2.id = 1;
  b2.id = 2;
  DistanceOracle oracle(buildings, {a2, b2}, clearance);
  return oracle.distance(1, 2);
}

}  // namespace swarmpatrol
