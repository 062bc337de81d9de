#ifndef SWARMPATROL_SIMKERNEL_HPP_
#define SWARMPATROL_SIMKERNEL_HPP_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "swarmpatrol/allocation.hpp"
#include "swarmpatrol/metrics.hpp"
#include "swarmpatrol/patrol.hpp"
#include "swarmpatrol/routing.hpp"
#include "swarmpatrol/scenario.hpp"
#include "swarmpatrol/tasks.hpp"
#include "swarmpatrol/types.hpp"

namespace swarmpatrol {

struct AgentBody {
  int id = 0;
  Vec3 pos;
  double speed = 2.0;
  double bearing_deg = 0.0;
  double tilt_deg = 0.0;
  bool alive = true;
};

// Everything one world needs beyond the shared mission plan.
struct WorldConfig {
  double speed_mps = 2.0;
  double dwell_s = 3.0;
  CommsModel comms;
  double duration_s = 300.0;
  std::vector<SimEvent> events;
  SpawnBox spawn;
  int initial_agents = 0;
  uint64_t seed = 1;
  int alloc_round_cap = 0;  // 0 = pick a sane cap from the agent count
};

// Deterministic lock-step world: 10 Hz kinematics, every tenth step runs the
// 1 Hz algorithm tick (broadcast snapshot, delivery, consensus, patrol).
// Agents are processed in ascending id order everywhere; all randomness
// comes from per-agent generators derived from (seed, agent id).
class World {
 public:
  World(WorldConfig cfg, std::vector<Task> tasks,
        std::vector<TaskFacts> task_facts, std::vector<Viewpoint> viewpoints,
        std::shared_ptr<const DistanceOracle> oracle,
        std::map<std::pair<int, int>, std::vector<Vec3>> edge_routes,
        IdlenessLedger* ledger);

  void run();   // steps through the configured duration
  void step();  // one 0.1 s step

  double now() const { return tick_ * kPhysicsDt; }
  bool allocation_done() const { return mode_ == Mode::Mission; }
  std::optional<double> allocation_time() const { return alloc_done_time_; }

  const AgentBody* body(int id) const;
  const PatrolState* patrol(int id) const;
  int task_of(int id) const;  // task index, -1 when unassigned

  // Ordered (sender, receiver) pairs delivered at the last algorithm tick.
  const std::vector<std::pair<int, int>>& last_deliveries() const {
    return last_deliveries_;
  }
  // Invoked after every algorithm tick; handy for invariant probes.
  void set_tick_observer(std::function<void(const World&)> fn) {
    observer_ = std::move(fn);
  }

  const std::vector<std::string>& warnings() const { return warnings_; }
  // Per-agent patrol decision time (consensus merge, bounce rules, dwell
  // bookkeeping). Transit replanning is accounted separately below: it is
  // route planning, not patrol logic, and only runs on joins and reversals.
  double patrol_step_ms_max() const { return patrol_ms_max_; }
  double patrol_step_ms_mean() const {
    return patrol_ms_count_ ? patrol_ms_sum_ / patrol_ms_count_ : 0.0;
  }
  // Percentile over every per-agent step of the run. The max of millions of
  // sub-microsecond samples mostly measures the host scheduler (virtualized
  // clocks charge vCPU steal to the running thread), so the envelope check
  // uses a high percentile and reports the max alongside.
  double patrol_step_ms_quantile(double q) const;
  double replan_ms_max() const { return replan_ms_max_; }
  double replan_ms_mean() const {
    return replan_count_ ? replan_ms_sum_ / replan_count_ : 0.0;
  }
  int alloc_rounds() const { return alloc_rounds_; }

 private:
  enum class Mode { Alloc, Mission };

  struct FlightPlan {
    std::vector<Vec3> pts;
    size_t next = 0;
    int from_vp = -1;  // viewpoint id at pts.front(), -1 for free points
    int to_vp = -1;
    double final_bearing = 0.0;
    double final_tilt = 0.0;
    bool active = false;
  };

  struct Agent {
    AgentBody body;
    std::mt19937_64 rng;
    AllocationState alloc;
    PatrolState patrol;
    bool on_mission = false;  // has joined (or is flying to) a path
    int at_vp = -1;           // id of the viewpoint it is parked at
    FlightPlan plan;
    // Same-task neighbors heard last tick. Conflicts fire when a sender
    // enters range or after this agent finishes a service, not on every tick
    // a sender stays in range; otherwise co-located groups reverse each
    // other endlessly and never finish a dwell.
    std::vector<int> heard;
  };

  struct Broadcast {
    int sender = 0;
    Vec3 pos;
    AllocationMsg alloc;
    bool has_patrol = false;
    PatrolMessage patrol;
  };

  using Inboxes = std::map<int, std::vector<const Broadcast*>>;

  void spawn_initial_agents();
  Agent make_agent(int id, const Vec3& pos);
  Vec3 draw_spawn_position(std::mt19937_64& rng) const;
  void apply_due_events();
  void algo_tick();
  void alloc_tick_body(const Inboxes& inboxes);
  void mission_agent_tick(Agent& a, const std::vector<const Broadcast*>& inbox);
  void enter_task(Agent& a, int task_index);
  void set_route_to_current_target(Agent& a);
  void move_agents();
  bool at_pose(const Agent& a, const Viewpoint& vp) const;
  // Snapshots live in bcast_buf_ for the duration of one algorithm tick;
  // inboxes hold pointers into it, receivers sorted, senders ascending.
  Inboxes deliver();
  bool los_clear(const Vec3& a, const Vec3& b) const;
  const Viewpoint& vp_ref(int vp_id) const;
  const Viewpoint& target_vp(const Agent& a) const;
  void finish_alloc_phase();

  WorldConfig cfg_;
  std::vector<Task> tasks_;
  std::vector<TaskFacts> task_facts_;
  std::vector<Viewpoint> viewpoints_;
  std::map<int, int> vp_index_;  // id -> index in viewpoints_
  std::shared_ptr<const DistanceOracle> oracle_;
  std::map<std::pair<int, int>, std::vector<Vec3>> edge_routes_;
  std::vector<std::vector<Vec3>> task_points_;  // per task, path order
  IdlenessLedger* ledger_ = nullptr;

  std::map<int, Agent> agents_;
  long long tick_ = 0;
  size_t next_event_ = 0;
  Mode mode_ = Mode::Alloc;
  int alloc_rounds_ = 0;
  int alloc_cap_ = 0;
  std::optional<double> alloc_done_time_;

  std::vector<Broadcast> bcast_buf_;
  std::vector<std::pair<int, int>> last_deliveries_;
  std::function<void(const World&)> observer_;
  std::vector<std::string> warnings_;
  int malformed_msgs_ = 0;
  int foreign_msgs_ = 0;
  double patrol_ms_max_ = 0.0;
  double patrol_ms_sum_ = 0.0;
  long long patrol_ms_count_ = 0;
  std::vector<float> patrol_ms_samples_;
  double replan_ms_tick_ = 0.0;  // replanning charged within the current step
  double replan_ms_max_ = 0.0;
  double replan_ms_sum_ = 0.0;
  long long replan_count_ = 0;
};

}  // namespace swarmpatrol

#endif  // SWARMPATROL_SIMKERNEL_HPP_
