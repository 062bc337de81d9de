#include "swarmpatrol/patrol.hpp"

#include <cmath>

#include "swarmpatrol/errors.hpp"
#include "swarmpatrol/util.hpp"

namespace swarmpatrol {

int next_index(int c, int d, int n) {
  if (n < 1) throw InvariantError("path length must be at least 1");
  if (c < 1 || c > n)
    throw InvariantError("path index " + std::to_string(c) + " outside 1.." +
                         std::to_string(n));
  if (d != 1 && d != -1)
    throw InvariantError("direction must be +1 or -1");
  return ((c - 1 + d + n) % n) + 1;
}

bool process_messages(PatrolState& st, int my_id, const Vec3& my_pos,
                      const std::vector<PatrolMessage>& inbox,
                      const std::vector<Vec3>& path_points, double dwell_time,
                      int* foreign) {
  const int n = static_cast<int>(path_points.size());
  for (const PatrolMessage& m : inbox) {
    if (m.task_id != st.task_id) {
      if (foreign) ++*foreign;
      continue;
    }
    if (m.current_index == st.current_index) {
      const Vec3& v = path_points[st.current_index - 1];
      const double mine = (my_pos - v).norm();
      const double theirs = (m.pos - v).norm();
      const bool i_am_nearer =
          mine < theirs || (mine == theirs && my_id < m.sender);
      if (!i_am_nearer) {
        // Farther agent backs off right away and heads the other way.
        st.direction = -st.direction;
        st.current_index = next_index(st.current_index, st.direction, n);
        st.flip_after_service = false;
        st.dwell_remaining = dwell_time;
        return true;
      }
      if (st.direction != m.direction) st.flip_after_service = true;
      return false;
    }
    if (st.current_index == m.last_index && m.current_index == st.last_index) {
      // Head-on along one arc: both agents turn around.
      st.direction = -st.direction;
      st.current_index = next_index(st.current_index, st.direction, n);
      st.flip_after_service = false;
      st.dwell_remaining = dwell_time;
      return true;
    }
  }
  return false;
}

PatrolStep service_step(PatrolState& st, bool at_pose, double dt,
                        double dwell_time, int path_len) {
  PatrolStep out;
  if (!at_pose) return out;
  st.dwell_remaining -= dt;
  if (st.dwell_remaining > 1e-9) return out;
  out.serviced_index = st.current_index;
  st.last_index = st.current_index;
  if (st.flip_after_service) {
    st.direction = -st.direction;
    st.flip_after_service = false;
  }
  st.current_index = next_index(st.current_index, st.direction, path_len);
  st.dwell_remaining = dwell_time;
  out.target_changed = true;
  return out;
}

PatrolState join_path(const Vec3& agent_pos, const ClosedPath& path,
                      const std::vector<Vec3>& path_points, int task_id,
                      std::mt19937_64& rng) {
  if (path.viewpoint_ids.empty())
    throw InvariantError("cannot join an empty path");
  const int n = static_cast<int>(path_points.size());
  int best = 1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double d = (agent_pos - path_points[i]).norm();
    if (d < best_d) {
      best_d = d;
      best = i + 1;
    }
  }
  PatrolState st;
  st.task_id = task_id;
  st.current_index = best;
  st.direction = uniform_sign(rng);
  st.last_index = next_index(best, -st.direction, n);
  st.flip_after_service = false;
  st.dwell_remaining = 0.0;  // set by the kernel from the scenario dwell
  return st;
}

PatrolMessage make_patrol_message(const PatrolState& st, int sender,
                                  const Vec3& pos) {
  PatrolMessage m;
  m.sender = sender;
  m.task_id = st.task_id;
  m.pos = pos;
  m.current_index = st.current_index;
  m.last_index = st.last_index;
  m.direction = st.direction;
  return m;
}

}  // namespace swarmpatrol
