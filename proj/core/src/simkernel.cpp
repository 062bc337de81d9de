#include "swarmpatrol/simkernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

#include "swarmpatrol/errors.hpp"
#include "swarmpatrol/util.hpp"

namespace swarmpatrol {

namespace {

// CPU time of the calling thread. The per-step budget measures the
// algorithm, and wall clocks smear scheduler preemptions (tens of ms on a
// loaded box) over whichever call they land in.
double thread_cpu_ms() {
#ifdef __linux__
  timespec ts;
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return ts.tv_sec * 1e3 + ts.tv_nsec * 1e-6;
#else
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
#endif
}

double ang_diff_deg(double a, double b) {
  return std::fabs(std::remainder(a - b, 360.0));
}

}  // namespace

World::World(WorldConfig cfg, std::vector<Task> tasks,
             std::vector<TaskFacts> task_facts,
             std::vector<Viewpoint> viewpoints,
             std::shared_ptr<const DistanceOracle> oracle,
             std::map<std::pair<int, int>, std::vector<Vec3>> edge_routes,
             IdlenessLedger* ledger)
    : cfg_(std::move(cfg)),
      tasks_(std::move(tasks)),
      task_facts_(std::move(task_facts)),
      viewpoints_(std::move(viewpoints)),
      oracle_(std::move(oracle)),
      edge_routes_(std::move(edge_routes)),
      ledger_(ledger) {
  if (!oracle_) throw InvariantError("world needs a distance oracle");
  if (tasks_.size() != task_facts_.size())
    throw InvariantError("task list and task facts differ in length");
  for (size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].id != task_facts_[i].id)
      throw InvariantError("task facts out of order");
  }
  for (size_t i = 0; i < viewpoints_.size(); ++i)
    vp_index_[viewpoints_[i].id] = static_cast<int>(i);

  task_points_.reserve(tasks_.size());
  for (const Task& t : tasks_) {
    std::vector<Vec3> pts;
    pts.reserve(t.path.viewpoint_ids.size());
    for (int id : t.path.viewpoint_ids) pts.push_back(vp_ref(id).pos);
    task_points_.push_back(std::move(pts));
  }

  alloc_cap_ = cfg_.alloc_round_cap > 0 ? cfg_.alloc_round_cap
                                        : 5 * cfg_.initial_agents + 20;
  spawn_initial_agents();
}

const Viewpoint& World::vp_ref(int vp_id) const {
  const auto it = vp_index_.find(vp_id);
  if (it == vp_index_.end())
    throw InvariantError("unknown viewpoint id " + std::to_string(vp_id));
  return viewpoints_[it->second];
}

const Viewpoint& World::target_vp(const Agent& a) const {
  const Task& t = tasks_[a.alloc.my_task()];
  return vp_ref(t.path.viewpoint_ids[a.patrol.current_index - 1]);
}

Vec3 World::draw_spawn_position(std::mt19937_64& rng) const {
  if (!cfg_.spawn.set)
    throw InvariantError("spawn region was not resolved before simulation");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x = uniform_range(rng, cfg_.spawn.lo.x(), cfg_.spawn.hi.x());
    const double y = uniform_range(rng, cfg_.spawn.lo.y(), cfg_.spawn.hi.y());
    const double z = uniform_range(rng, cfg_.spawn.lo.z(), cfg_.spawn.hi.z());
    const Vec3 p(x, y, z);
    if (oracle_->point_clear(p)) return p;
  }
  throw InvariantError(
      "could not place an agent: spawn region is blocked by buildings");
}

World::Agent World::make_agent(int id, const Vec3& pos) {
  Agent a{AgentBody{}, agent_rng(cfg_.seed, id),
          AllocationState(id, task_facts_), PatrolState{}};
  a.body.id = id;
  a.body.pos = pos;
  a.body.speed = cfg_.speed_mps;
  return a;
}

void World::spawn_initial_agents() {
  for (int id = 1; id <= cfg_.initial_agents; ++id) {
    std::mt19937_64 rng = agent_rng(cfg_.seed, id);
    const Vec3 pos = draw_spawn_position(rng);
    Agent a = make_agent(id, pos);
    a.rng = std::move(rng);  // keep the post-spawn stream state
    agents_.emplace(id, std::move(a));
  }
}

const AgentBody* World::body(int id) const {
  const auto it = agents_.find(id);
  return it == agents_.end() ? nullptr : &it->second.body;
}

const PatrolState* World::patrol(int id) const {
  const auto it = agents_.find(id);
  if (it == agents_.end() || !it->second.on_mission) return nullptr;
  return &it->second.patrol;
}

int World::task_of(int id) const {
  const auto it = agents_.find(id);
  return it == agents_.end() ? -1 : it->second.alloc.my_task();
}

void World::run() {
  const long long total = std::llround(cfg_.duration_s / kPhysicsDt);
  while (tick_ < total) step();
}

void World::step() {
  apply_due_events();
  if (tick_ % kTicksPerAlgoStep == 0) algo_tick();
  move_agents();
  ++tick_;
}

void World::apply_due_events() {
  while (next_event_ < cfg_.events.size() &&
         cfg_.events[next_event_].at_s <= now() + 1e-9) {
    const SimEvent& ev = cfg_.events[next_event_++];
    const std::string tag = "t=" + fmt_fixed(ev.at_s, 1) + "s agent " +
                            std::to_string(ev.agent_id);
    if (ev.kind == SimEvent::Kind::RemoveAgent) {
      const auto it = agents_.find(ev.agent_id);
      if (it == agents_.end() || !it->second.body.alive) {
        warnings_.push_back("skipped remove event, " + tag + " not active");
        continue;
      }
      it->second.body.alive = false;
      it->second.plan.active = false;
    } else {
      if (agents_.count(ev.agent_id)) {
        warnings_.push_back("skipped add event, " + tag + " already exists");
        continue;
      }
      if (!oracle_->point_clear(ev.pos)) {
        warnings_.push_back("skipped add event, " + tag +
                            " would start inside a building envelope");
        continue;
      }
      agents_.emplace(ev.agent_id, make_agent(ev.agent_id, ev.pos));
    }
  }
}

bool World::los_clear(const Vec3& a, const Vec3& b) const {
  for (const Building& bld : oracle_->buildings()) {
    if (segment_intersects_prism(bld.footprint, bld.height, a, b)) return false;
  }
  return true;
}

World::Inboxes World::deliver() {
  bcast_buf_.clear();
  const double t = now();
  for (const auto& [id, a] : agents_) {
    if (!a.body.alive) continue;
    Broadcast b;
    b.sender = id;
    b.pos = a.body.pos;
    b.alloc = a.alloc.snapshot(t);
    b.has_patrol = a.on_mission;
    if (a.on_mission) b.patrol = make_patrol_message(a.patrol, id, a.body.pos);
    bcast_buf_.push_back(std::move(b));
  }

  Inboxes inboxes;
  for (const Broadcast& s : bcast_buf_) inboxes[s.sender];  // everyone gets a slot
  last_deliveries_.clear();
  for (const Broadcast& s : bcast_buf_) {
    for (const Broadcast& r : bcast_buf_) {
      if (r.sender == s.sender) continue;
      if ((s.pos - r.pos).norm() > cfg_.comms.range_m) continue;
      if (cfg_.comms.los_blocking && !los_clear(s.pos, r.pos)) continue;
      inboxes[r.sender].push_back(&s);
      last_deliveries_.emplace_back(s.sender, r.sender);
    }
  }
  return inboxes;
}

void World::algo_tick() {
  const auto inboxes = deliver();
  if (mode_ == Mode::Alloc) {
    alloc_tick_body(inboxes);
  } else {
    static const std::vector<const Broadcast*> kEmpty;
    for (auto& [id, a] : agents_) {
      if (!a.body.alive) continue;
      const auto it = inboxes.find(id);
      replan_ms_tick_ = 0.0;
      const double t0 = thread_cpu_ms();
      mission_agent_tick(a, it == inboxes.end() ? kEmpty : it->second);
      const double ms =
          std::max(0.0, thread_cpu_ms() - t0 - replan_ms_tick_);
      patrol_ms_max_ = std::max(patrol_ms_max_, ms);
      patrol_ms_sum_ += ms;
      ++patrol_ms_count_;
      patrol_ms_samples_.push_back(static_cast<float>(ms));
    }
  }
  if (ledger_) ledger_->sample(now());
  if (observer_) observer_(*this);
}

void World::alloc_tick_body(const Inboxes& inboxes) {
  const double t = now();
  ++alloc_rounds_;
  for (auto& [id, a] : agents_) {
    if (!a.body.alive) continue;
    const auto it = inboxes.find(id);
    if (it != inboxes.end()) {
      for (const Broadcast* m : it->second) {
        try {
          a.alloc.merge(m->alloc, t);
        } catch (const InvariantError&) {
          ++malformed_msgs_;
        }
      }
    }
    a.alloc.evict_lost(t, kWinnerLostTimeout);
    a.alloc.bid_phase(a.body.pos, t);
  }

  // Consensus is judged per radio component: agents that cannot hear each
  // other, even through relays, cannot be asked to agree. Conflicts between
  // components surface once agents move and are resolved by the usual
  // outbid handling.
  std::vector<int> ids;
  std::map<int, int> slot;
  for (const auto& [id, a] : agents_) {
    if (!a.body.alive) continue;
    slot[id] = static_cast<int>(ids.size());
    ids.push_back(id);
  }
  std::vector<int> root(ids.size());
  for (size_t i = 0; i < root.size(); ++i) root[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& [s, r] : last_deliveries_) {
    const auto si = slot.find(s), ri = slot.find(r);
    if (si != slot.end() && ri != slot.end())
      root[find(si->second)] = find(ri->second);
  }
  std::map<int, std::vector<int>> components;
  for (size_t i = 0; i < ids.size(); ++i) components[find(static_cast<int>(i))].push_back(ids[i]);

  bool done = true;
  for (const auto& [rep, members] : components) {
    std::vector<const AllocationState*> states;
    std::vector<Vec3> positions;
    for (int id : members) {
      const Agent& a = agents_.at(id);
      states.push_back(&a.alloc);
      positions.push_back(a.body.pos);
    }
    if (!allocation_converged(states, positions)) {
      done = false;
      break;
    }
  }
  if (done || alloc_rounds_ >= alloc_cap_) {
    if (!done) {
      warnings_.push_back("allocation did not settle within " +
                          std::to_string(alloc_rounds_) +
                          " rounds; flying with the current assignment");
    }
    finish_alloc_phase();
  }
}

void World::finish_alloc_phase() {
  mode_ = Mode::Mission;
  alloc_done_time_ = now();
  for (auto& [id, a] : agents_) {
    if (!a.body.alive) continue;
    if (a.alloc.my_task() >= 0) {
      enter_task(a, a.alloc.my_task());
    } else {
      warnings_.push_back("agent " + std::to_string(id) +
                          " left allocation without a task");
    }
  }
}

void World::enter_task(Agent& a, int task_index) {
  const Task& t = tasks_[task_index];
  a.patrol =
      join_path(a.body.pos, t.path, task_points_[task_index], t.id, a.rng);
  a.patrol.dwell_remaining = cfg_.dwell_s;
  a.on_mission = true;
  a.at_vp = -1;
  a.plan.active = false;
  a.heard.clear();  // joining is itself a fresh encounter with everyone nearby
  set_route_to_current_target(a);
}

void World::set_route_to_current_target(Agent& a) {
  struct ReplanAccount {
    World* w;
    double t0 = thread_cpu_ms();
    ~ReplanAccount() {
      const double d = thread_cpu_ms() - t0;
      w->replan_ms_tick_ += d;
      w->replan_ms_max_ = std::max(w->replan_ms_max_, d);
      w->replan_ms_sum_ += d;
      ++w->replan_count_;
    }
  } account{this};
  const Task& t = tasks_[a.alloc.my_task()];
  const int target_id = t.path.viewpoint_ids[a.patrol.current_index - 1];
  const Viewpoint& tv = vp_ref(target_id);

  FlightPlan np;
  np.to_vp = target_id;
  np.final_bearing = tv.bearing_deg;
  np.final_tilt = tv.tilt_deg;

  if (a.at_vp == target_id) {
    // Single-viewpoint path; nothing to fly.
    a.plan = FlightPlan{};
    return;
  }
  if (a.at_vp >= 0) {
    // Parked on the path: tour edges are precomputed.
    auto it = edge_routes_.find({a.at_vp, target_id});
    if (it != edge_routes_.end()) {
      np.pts = it->second;
    } else {
      it = edge_routes_.find({target_id, a.at_vp});
      if (it != edge_routes_.end()) {
        np.pts = it->second;
        std::reverse(np.pts.begin(), np.pts.end());
      } else {
        np.pts = oracle_->route(a.at_vp, target_id);
      }
    }
    np.from_vp = a.at_vp;
    np.next = 1;
  } else if (a.plan.active && a.plan.from_vp == target_id) {
    // Reversal in transit: retrace the part of the polyline already flown.
    std::vector<Vec3> back(a.plan.pts.begin(),
                           a.plan.pts.begin() + static_cast<long>(a.plan.next));
    std::reverse(back.begin(), back.end());
    np.pts.push_back(a.body.pos);
    np.pts.insert(np.pts.end(), back.begin(), back.end());
    np.from_vp = a.plan.to_vp;
    np.next = 1;
  } else {
    np.pts = oracle_->route_from_point(a.body.pos, target_id);
    np.from_vp = -1;
    np.next = 1;
  }
  np.active = true;
  a.at_vp = -1;
  a.plan = std::move(np);
}

bool World::at_pose(const Agent& a, const Viewpoint& vp) const {
  if ((a.body.pos - vp.pos).norm() > kPoseTolPos) return false;
  if (ang_diff_deg(a.body.bearing_deg, vp.bearing_deg) > kPoseTolAngDeg)
    return false;
  return std::fabs(a.body.tilt_deg - vp.tilt_deg) <= kPoseTolAngDeg;
}

double World::patrol_step_ms_quantile(double q) const {
  if (patrol_ms_samples_.empty()) return 0.0;
  std::vector<float> v = patrol_ms_samples_;
  const size_t k = std::min(
      v.size() - 1, static_cast<size_t>(q * static_cast<double>(v.size())));
  std::nth_element(v.begin(), v.begin() + static_cast<long>(k), v.end());
  return v[k];
}

void World::mission_agent_tick(Agent& a,
                               const std::vector<const Broadcast*>& inbox) {
  const double t = now();

  const int task_before = a.alloc.my_task();
  std::vector<PatrolMessage> patrol_inbox;
  for (const Broadcast* m : inbox) {
    try {
      a.alloc.merge(m->alloc, t);
    } catch (const InvariantError&) {
      ++malformed_msgs_;
    }
    if (m->has_patrol) patrol_inbox.push_back(m->patrol);
  }
  a.alloc.evict_lost(t, kWinnerLostTimeout);

  if (a.alloc.my_task() != task_before && a.on_mission) {
    // Outbid mid-mission; stand down and rejoin the auction.
    a.on_mission = false;
    a.plan = FlightPlan{};
    a.at_vp = -1;
  }
  if (a.alloc.my_task() < 0) {
    a.alloc.bid_phase(a.body.pos, t);
    if (a.alloc.my_task() >= 0) enter_task(a, a.alloc.my_task());
    return;
  }
  if (!a.on_mission) {
    enter_task(a, a.alloc.my_task());
    return;
  }

  const int ti = a.alloc.my_task();
  const Task& task = tasks_[ti];
  const int n = static_cast<int>(task.path.viewpoint_ids.size());

  // A neighbor that stays in range is not re-evaluated every tick; that
  // destabilizes co-located groups (mutual reversals faster than any dwell
  // can finish). It is re-evaluated when contact breaks and reforms, or
  // after this agent completes a service: conflicts that only develop while
  // a pair remains in range still resolve, and between two evaluations of
  // the same neighbor there is always one finished dwell of progress.
  std::vector<int> heard_now;
  std::vector<PatrolMessage> fresh;
  for (const PatrolMessage& pm : patrol_inbox) {
    if (pm.task_id == a.patrol.task_id) {
      heard_now.push_back(pm.sender);
      if (std::binary_search(a.heard.begin(), a.heard.end(), pm.sender))
        continue;
    }
    fresh.push_back(pm);
  }
  a.heard = std::move(heard_now);

  const bool flipped =
      process_messages(a.patrol, a.body.id, a.body.pos, fresh,
                       task_points_[ti], cfg_.dwell_s, &foreign_msgs_);
  if (flipped) set_route_to_current_target(a);

  const bool pose_ok = at_pose(a, target_vp(a));
  const PatrolStep ps =
      service_step(a.patrol, pose_ok, kPhysicsDt * kTicksPerAlgoStep,
                   cfg_.dwell_s, n);
  if (ps.serviced_index) {
    if (ledger_)
      ledger_->record_visit(task.path.viewpoint_ids[*ps.serviced_index - 1], t);
    a.heard.clear();
  }
  if (ps.target_changed) set_route_to_current_target(a);
}

void World::move_agents() {
  for (auto& [id, a] : agents_) {
    if (!a.body.alive || !a.plan.active) continue;
    double budget = kPhysicsDt;
    while (budget > 1e-12 && a.plan.active) {
      const Vec3& wp = a.plan.pts[a.plan.next];
      const Vec3 d = wp - a.body.pos;
      const double len = d.norm();
      const double reach = a.body.speed * budget;
      const Vec2 horiz(d.x(), d.y());
      if (horiz.norm() > 1e-9) a.body.bearing_deg = bearing_of(horiz);
      a.body.tilt_deg = 0.0;
      if (len <= reach + 1e-12) {
        a.body.pos = wp;
        budget -= len / a.body.speed;
        ++a.plan.next;
        if (a.plan.next >= a.plan.pts.size()) {
          a.body.bearing_deg = a.plan.final_bearing;
          a.body.tilt_deg = a.plan.final_tilt;
          a.at_vp = a.plan.to_vp;
          a.plan.active = false;
        }
      } else {
        a.body.pos += d * (reach / len);
        budget = 0.0;
      }
    }
  }
}

}  // namespace swarmpatrol
