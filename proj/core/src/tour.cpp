#include "swarmpatrol/tour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarmpatrol/errors.hpp"
#include "swarmpatrol/matching.hpp"

namespace swarmpatrol {

namespace {

double cycle_length(const std::vector<int>& ids, const DistFn& dist) {
  const size_t n = ids.size();
  if (n < 2) return 0.0;
  double len = 0.0;
  for (size_t i = 0; i < n; ++i) len += dist(ids[i], ids[(i + 1) % n]);
  return len;
}

}  // namespace

ClosedPath canonicalize_cycle(std::vector<int> ids, const DistFn& dist) {
  const size_t n = ids.size();
  if (n > 2) {
    const auto lowest = std::min_element(ids.begin(), ids.end());
    std::rotate(ids.begin(), lowest, ids.end());
    if (ids[n - 1] < ids[1]) {
      std::reverse(ids.begin() + 1, ids.end());
    }
  } else if (n == 2 && ids[0] > ids[1]) {
    std::swap(ids[0], ids[1]);
  }
  ClosedPath path;
  path.length = cycle_length(ids, dist);
  path.viewpoint_ids = std::move(ids);
  return path;
}

ClosedPath christofides_tour(const std::vector<int>& viewpoint_ids,
                             const DistFn& dist) {
  const int n = static_cast<int>(viewpoint_ids.size());
  if (n == 0) throw InvariantError("tour over an empty viewpoint set");
  if (n == 1) return ClosedPath{{viewpoint_ids[0]}, 0.0};

  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = dist(viewpoint_ids[i], viewpoint_ids[j]);
      if (!std::isfinite(w))
        throw InvariantError("non-finite distance between viewpoints " +
                             std::to_string(viewpoint_ids[i]) + " and " +
                             std::to_string(viewpoint_ids[j]));
      d[i][j] = d[j][i] = w;
    }
  }
  if (n == 2) return canonicalize_cycle(viewpoint_ids, dist);

  // Prim's MST over the dense matrix, lowest index on ties.
  std::vector<int> mst_parent(n, -1);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<bool> in_tree(n, false);
  best[0] = 0.0;
  for (int round = 0; round < n; ++round) {
    int u = -1;
    for (int i = 0; i < n; ++i) {
      if (!in_tree[i] && (u == -1 || best[i] < best[u])) u = i;
    }
    in_tree[u] = true;
    for (int v = 0; v < n; ++v) {
      if (!in_tree[v] && d[u][v] < best[v]) {
        best[v] = d[u][v];
        mst_parent[v] = u;
      }
    }
  }

  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(mst_parent[v], v);

  std::vector<int> degree(n, 0);
  for (const auto& [a, b] : edges) {
    ++degree[a];
    ++degree[b];
  }
  std::vector<int> odd;
  for (int i = 0; i < n; ++i)
    if (degree[i] % 2 == 1) odd.push_back(i);

  if (!odd.empty()) {
    const int m = static_cast<int>(odd.size());
    std::vector<std::vector<double>> sub(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) sub[i][j] = d[odd[i]][odd[j]];
    for (const auto& [i, j] : min_weight_perfect_matching(sub)) {
      edges.emplace_back(odd[i], odd[j]);
    }
  }

  // Hierholzer over the MST+matching multigraph; smallest neighbor first.
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge idx)
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    adj[edges[e].first].emplace_back(edges[e].second, e);
    adj[edges[e].second].emplace_back(edges[e].first, e);
  }
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());
  std::vector<bool> used(edges.size(), false);
  std::vector<size_t> next_edge(n, 0);
  std::vector<int> stack{0}, euler;
  while (!stack.empty()) {
    const int u = stack.back();
    bool advanced = false;
    while (next_edge[u] < adj[u].size()) {
      const auto [v, e] = adj[u][next_edge[u]];
      if (used[e]) {
        ++next_edge[u];
        continue;
      }
      used[e] = true;
      stack.push_back(v);
      advanced = true;
      break;
    }
    if (!advanced) {
      euler.push_back(u);
      stack.pop_back();
    }
  }

  std::vector<bool> seen(n, false);
  std::vector<int> tour;
  tour.reserve(n);
  for (const int v : euler) {
    if (!seen[v]) {
      seen[v] = true;
      tour.push_back(viewpoint_ids[v]);
    }
  }
  if (static_cast<int>(tour.size()) != n)
    throw InvariantError("tour construction dropped a viewpoint");
  return canonicalize_cycle(std::move(tour), dist);
}

}  // namespace swarmpatrol
