#ifndef SWARMPATROL_PATROL_HPP_
#define SWARMPATROL_PATROL_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "swarmpatrol/tour.hpp"
#include "swarmpatrol/types.hpp"
#include "swarmpatrol/viewpoint.hpp"

namespace swarmpatrol {

// The per-tick broadcast while patrolling: position, current target index,
// last serviced index, travel direction.
struct PatrolMessage {
  int sender = 0;
  int task_id = 0;
  Vec3 pos;
  int current_index = 1;  // 1-based position in the closed path
  int last_index = 1;
  int direction = 1;  // +1 or -1
};

struct PatrolState {
  int task_id = 0;
  int current_index = 1;
  int last_index = 1;
  int direction = 1;
  bool flip_after_service = false;
  double dwell_remaining = 0.0;
};

// 1-based circular step. Throws InvariantError on out-of-range inputs.
int next_index(int c, int d, int n);

// Outcome of one algorithm tick of the patrol logic.
struct PatrolStep {
  bool target_changed = false;        // pick a new transit route
  std::optional<int> serviced_index;  // 1-based path index whose dwell completed
};

// Applies the bounce rules for the first conflicting neighbor message, then
// stops scanning. Inbox must be pre-sorted by sender id. Messages for other
// tasks are skipped and counted in *foreign. Returns true when the travel
// target changed (immediate reversal); any partial dwell is then discarded.
bool process_messages(PatrolState& st, int my_id, const Vec3& my_pos,
                      const std::vector<PatrolMessage>& inbox,
                      const std::vector<Vec3>& path_points, double dwell_time,
                      int* foreign);

// Dwell countdown / index advance for one tick of length dt. `at_pose` is
// the kernel's judgement that the agent is on station at the current target.
PatrolStep service_step(PatrolState& st, bool at_pose, double dt,
                        double dwell_time, int path_len);

// Entry point onto a path: nearest viewpoint (ties to the lower index),
// random direction from the agent's own generator, last index set to the
// predecessor.
PatrolState join_path(const Vec3& agent_pos, const ClosedPath& path,
                      const std::vector<Vec3>& path_points, int task_id,
                      std::mt19937_64& rng);

PatrolMessage make_patrol_message(const PatrolState& st, int sender,
                                  const Vec3& pos);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_PATROL_HPP_
