#include "swarmpatrol/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swarmpatrol/errors.hpp"

namespace swarmpatrol {

std::vector<int> largest_remainder_split(const std::vector<double>& weights,
                                         int total) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw InvariantError("cannot split agents over zero tasks");
  if (total < n)
    throw InvariantError("need at least one agent per task: " +
                         std::to_string(total) + " agents for " +
                         std::to_string(n) + " tasks");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw InvariantError("capacity weights must be positive");
    sum += w;
  }
  std::vector<int> share(n, 0);
  std::vector<std::pair<double, int>> rem;  // (-remainder, index) for sorting
  int assigned = 0;
  for (int i = 0; i < n; ++i) {
    const double quota = total * weights[i] / sum;
    share[i] = static_cast<int>(std::floor(quota));
    assigned += share[i];
    rem.emplace_back(-(quota - share[i]), i);
  }
  std::sort(rem.begin(), rem.end());
  for (int k = 0; k < total - assigned; ++k) ++share[rem[k].second];
  // Floor of one agent per task, taken from the largest shares.
  for (int i = 0; i < n; ++i) {
    while (share[i] == 0) {
      int donor = -1;
      for (int j = 0; j < n; ++j) {
        if (share[j] > 1 && (donor == -1 || share[j] > share[donor])) donor = j;
      }
      if (donor == -1) throw InvariantError("cannot satisfy one agent per task");
      --share[donor];
      ++share[i];
    }
  }
  return share;
}

std::vector<Task> generate_tasks(const std::vector<Building>& buildings,
                                 const std::vector<ClosedPath>& tours,
                                 int total_agents) {
  if (buildings.size() != tours.size())
    throw InvariantError("one tour per building required");
  std::vector<double> weights;
  weights.reserve(tours.size());
  for (const ClosedPath& tour : tours) {
    // Length-proportional split; a single-viewpoint tour has zero length but
    // still deserves its floor-of-one share.
    weights.push_back(std::max(tour.length, 1e-9));
  }
  const std::vector<int> caps = largest_remainder_split(weights, total_agents);
  std::vector<Task> tasks;
  tasks.reserve(buildings.size());
  for (size_t i = 0; i < buildings.size(); ++i) {
    Task t;
    t.id = static_cast<int>(i) + 1;
    t.building_id = buildings[i].id;
    t.path = tours[i];
    t.capacity = caps[i];
    t.priority = buildings[i].priority;
    tasks.push_back(std::move(t));
  }
  return tasks;
}

}  // namespace swarmpatrol
