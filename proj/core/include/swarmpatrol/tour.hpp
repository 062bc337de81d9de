#ifndef SWARMPATROL_TOUR_HPP_
#define SWARMPATROL_TOUR_HPP_

#include <functional>
#include <vector>

namespace swarmpatrol {

// A closed patrol loop over viewpoint ids, interpreted cyclically.
struct ClosedPath {
  std::vector<int> viewpoint_ids;
  double length = 0.0;
};

using DistFn = std::function<double(int, int)>;

// Christofides heuristic: MST, exact min-weight perfect matching on the
// odd-degree vertices, Eulerian circuit, shortcut. The matching being exact
// is what buys the 1.5x bound on metric inputs. The result is canonicalized:
// starts at the lowest id, direction chosen so the second entry is the
// smaller of the start's two neighbors.
ClosedPath christofides_tour(const std::vector<int>& viewpoint_ids,
                             const DistFn& dist);

// Rotates/reflects an arbitrary cycle into the canonical form above and
// recomputes its length.
ClosedPath canonicalize_cycle(std::vector<int> ids, const DistFn& dist);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_TOUR_HPP_
