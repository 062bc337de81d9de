#ifndef SWARMPATROL_TASKS_HPP_
#define SWARMPATROL_TASKS_HPP_

#include <vector>

#include "swarmpatrol/building.hpp"
#include "swarmpatrol/tour.hpp"

namespace swarmpatrol {

// One patrol job: a building's closed path plus how many agents it gets.
struct Task {
  int id = 0;
  int building_id = 0;
  ClosedPath path;
  int capacity = 1;
  double priority = 0.0;
};

// Splits `total` into one positive integer per weight, proportionally, by
// largest remainder. Weights must be positive and total >= weight count.
std::vector<int> largest_remainder_split(const std::vector<double>& weights,
                                         int total);

// One task per building; capacity shares agents in proportion to path
// length, so the meters-per-agent load is as even as integer counts allow.
// Tours must be aligned with buildings by index.
std::vector<Task> generate_tasks(const std::vector<Building>& buildings,
                                 const std::vector<ClosedPath>& tours,
                                 int total_agents);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_TASKS_HPP_
