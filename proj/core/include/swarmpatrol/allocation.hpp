#ifndef SWARMPATROL_ALLOCATION_HPP_
#define SWARMPATROL_ALLOCATION_HPP_

#include <utility>
#include <vector>

#include "swarmpatrol/types.hpp"

namespace swarmpatrol {

// Static task facts every agent knows up front.
struct TaskFacts {
  int id = 0;
  int capacity = 1;
  double priority = 0.0;
  Vec3 centroid;  // building centroid, used for scoring
};

struct WinnerEntry {
  int agent_id = 0;
  double bid = 0.0;
};

// One agent's broadcast allocation snapshot. info_time is sorted by agent
// id; flat storage keeps the per-tick snapshot and merge costs flat too.
struct AllocationMsg {
  int sender = 0;
  std::vector<std::vector<WinnerEntry>> winners;      // by task index
  std::vector<std::pair<int, double>> info_time;      // (agent id, last heard)
};

// Bid value an agent places on a task: priority plus inverse clamped squared
// distance to the building centroid. Always positive.
double allocation_score(const Vec3& agent_pos, const TaskFacts& task);

// Per-agent auction state: bundle size one, multiple winners per task.
// Conflict rules: higher bid wins a slot, equal bids go to the lower agent
// id; information about a third party is replaced only by strictly newer
// information; a sender is always authoritative about itself; the receiver
// is always authoritative about itself.
class AllocationState {
 public:
  AllocationState(int agent_id, std::vector<TaskFacts> tasks);

  // Places a bid on the best winnable task if this agent holds none.
  void bid_phase(const Vec3& pos, double now);

  // Merges one neighbor snapshot (consensus phase).
  void merge(const AllocationMsg& msg, double now);

  // Drops winners whose information has gone stale (lost agents).
  void evict_lost(double now, double timeout);

  AllocationMsg snapshot(double now) const;

  // Task index this agent currently holds, or -1.
  int my_task() const { return my_task_; }
  int agent_id() const { return agent_id_; }
  bool wants_to_bid(const Vec3& pos) const;
  const std::vector<std::vector<WinnerEntry>>& winners() const { return winners_; }
  const std::vector<TaskFacts>& tasks() const { return tasks_; }

 private:
  // Best winnable task index for a bid from `pos`, or -1.
  int best_open_task(const Vec3& pos, double* score_out) const;
  void sort_and_trim();
  void drop_agent_entries(int agent);
  double time_of(int agent) const;  // -1 when never heard of
  void set_time(int agent, double t);

  int agent_id_ = 0;
  std::vector<TaskFacts> tasks_;
  std::vector<std::vector<WinnerEntry>> winners_;
  std::vector<std::pair<int, double>> info_time_;  // sorted by agent id
  int my_task_ = -1;
};

// True when all winner lists agree and nobody has a bid left to place.
bool allocation_converged(const std::vector<const AllocationState*>& states,
                          const std::vector<Vec3>& positions);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_ALLOCATION_HPP_
