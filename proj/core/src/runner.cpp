#include "swarmpatrol/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "swarmpatrol/errors.hpp"
#include "swarmpatrol/metrics.hpp"
#include "swarmpatrol/tour.hpp"
#include "swarmpatrol/util.hpp"

namespace swarmpatrol {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

MissionPlan build_mission_plan(const Scenario& s) {
  validate_scenario(s);
  MissionPlan plan;
  plan.scenario = s;

  ViewpointGenResult gen = generate_all_viewpoints(s.buildings, s.camera);
  ViewpointGenResult kept =
      filter_blocked_viewpoints(gen.viewpoints, s.buildings, kClearanceMargin);
  plan.warnings = std::move(gen.warnings);
  plan.warnings.insert(plan.warnings.end(), kept.warnings.begin(),
                       kept.warnings.end());
  plan.viewpoints = std::move(kept.viewpoints);

  const auto t0 = std::chrono::steady_clock::now();
  plan.oracle = std::make_shared<DistanceOracle>(s.buildings, plan.viewpoints,
                                                 kClearanceMargin);
  plan.oracle_build_ms = ms_since(t0);
  const DistanceOracle& oracle = *plan.oracle;
  const DistFn dist = [&oracle](int a, int b) { return oracle.distance(a, b); };

  std::vector<Building> kept_buildings;
  std::vector<ClosedPath> tours;
  std::vector<double> tour_ms;
  for (const Building& b : s.buildings) {
    std::vector<int> ids;
    for (const Viewpoint& vp : plan.viewpoints) {
      if (vp.building_id == b.id) ids.push_back(vp.id);
    }
    if (ids.empty()) {
      plan.warnings.push_back("building " + std::to_string(b.id) +
                              " has no reachable viewpoints and gets no task");
      continue;
    }
    const auto c0 = std::chrono::steady_clock::now();
    ClosedPath tour = christofides_tour(ids, dist);
    tour_ms.push_back(ms_since(c0));
    kept_buildings.push_back(b);
    tours.push_back(std::move(tour));
  }
  if (kept_buildings.empty())
    throw InvariantError("no building produced a patrol task");

  plan.tasks = generate_tasks(kept_buildings, tours, s.agent_count);

  for (size_t i = 0; i < plan.tasks.size(); ++i) {
    const Task& t = plan.tasks[i];
    const Building& b = kept_buildings[i];
    const Vec2 c = building_centroid(b);
    plan.task_facts.push_back(
        TaskFacts{t.id, t.capacity, t.priority, Vec3(c.x(), c.y(), b.height / 2.0)});
    plan.per_building.push_back(BuildingPlanInfo{
        b.id, static_cast<int>(t.path.viewpoint_ids.size()), t.path.length,
        t.capacity, tour_ms[i]});

    const std::vector<int>& ids = t.path.viewpoint_ids;
    const int n = static_cast<int>(ids.size());
    for (int k = 0; n >= 2 && k < n; ++k) {
      const int a = ids[k];
      const int b2 = ids[(k + 1) % n];
      if (!plan.edge_routes.count({a, b2}) && !plan.edge_routes.count({b2, a}))
        plan.edge_routes[{a, b2}] = oracle.route(a, b2);
    }
  }
  return plan;
}

RunResult run_single(const MissionPlan& plan, std::uint64_t seed,
                     const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<int> ids;
  ids.reserve(plan.viewpoints.size());
  for (const Viewpoint& vp : plan.viewpoints) ids.push_back(vp.id);
  IdlenessLedger ledger(ids);

  WorldConfig cfg;
  cfg.speed_mps = plan.scenario.agent_speed_mps;
  cfg.dwell_s = plan.scenario.dwell_s;
  cfg.comms = plan.scenario.comms;
  cfg.duration_s = plan.scenario.duration_s;
  cfg.events = plan.scenario.events;
  cfg.spawn = effective_spawn(plan.scenario);
  cfg.initial_agents = plan.scenario.agent_count;
  cfg.seed = seed;

  World world(cfg, plan.tasks, plan.task_facts, plan.viewpoints, plan.oracle,
              plan.edge_routes, &ledger);
  world.run();

  RunResult r;
  r.seed = seed;
  r.run_id = "run_" + std::to_string(seed);
  r.coverage_complete_time_s = ledger.coverage_complete_time();
  if (r.coverage_complete_time_s)
    r.max_idleness_after_coverage_s = ledger.peak_after(*r.coverage_complete_time_s);
  r.allocation_time_s = world.allocation_time();
  r.alloc_rounds = world.alloc_rounds();
  r.patrol_step_ms_max = world.patrol_step_ms_max();
  r.patrol_step_ms_mean = world.patrol_step_ms_mean();
  r.patrol_step_ms_p999 = world.patrol_step_ms_quantile(0.999);
  r.replan_ms_max = world.replan_ms_max();
  r.replan_ms_mean = world.replan_ms_mean();
  r.warnings = world.warnings();

  if (!out_dir.empty()) {
    const fs::path dir = fs::path(out_dir) / r.run_id;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("could not create " + dir.string() + ": " + ec.message());
    write_timeseries_csv((dir / "timeseries.csv").string(), r.run_id, ledger);
    write_per_viewpoint_csv((dir / "per_viewpoint.csv").string(), ledger);
    write_idleness_svg((dir / "idleness.svg").string(), ledger);
  }
  r.wall_ms = ms_since(t0);
  return r;
}

namespace {

void write_summary_csv(const std::string& path,
                       const std::vector<RunResult>& runs,
                       const MissionPlan& plan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("could not open " + path);
  out << "run_id,seed,coverage_complete_time_s,max_idleness_after_coverage_s,"
         "viewpoint_count,agent_count\n";
  for (const RunResult& r : runs) {
    out << r.run_id << ',' << r.seed << ',';
    if (r.coverage_complete_time_s) out << fmt_fixed(*r.coverage_complete_time_s, 1);
    out << ',';
    if (r.max_idleness_after_coverage_s)
      out << fmt_fixed(*r.max_idleness_after_coverage_s, 3);
    out << ',' << plan.viewpoints.size() << ',' << plan.scenario.agent_count
        << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

void write_manifest(const std::string& path, const MissionPlan& plan,
                    const std::vector<RunResult>& runs) {
  json m;
  m["scenario"]["name"] = plan.scenario.name;
  m["scenario"]["config_hash"] = to_hex(config_hash(plan.scenario));
  m["scenario"]["agents"] = plan.scenario.agent_count;
  m["scenario"]["duration_s"] = plan.scenario.duration_s;
  m["scenario"]["seeds"] = plan.scenario.seeds;

  m["plan"]["viewpoint_total"] = plan.viewpoints.size();
  m["plan"]["graph_nodes"] = plan.oracle ? plan.oracle->node_count() : 0;
  m["plan"]["oracle_build_ms"] = plan.oracle_build_ms;
  m["plan"]["warnings"] = plan.warnings;
  json blds = json::array();
  for (const BuildingPlanInfo& b : plan.per_building) {
    blds.push_back({{"building_id", b.building_id},
                    {"viewpoint_count", b.viewpoint_count},
                    {"tour_length_m", b.tour_length_m},
                    {"capacity", b.capacity},
                    {"christofides_ms", b.christofides_ms}});
  }
  m["plan"]["buildings"] = std::move(blds);

  json jruns = json::array();
  for (const RunResult& r : runs) {
    json jr;
    jr["seed"] = r.seed;
    jr["run_id"] = r.run_id;
    jr["coverage_complete_time_s"] =
        r.coverage_complete_time_s ? json(*r.coverage_complete_time_s) : json();
    jr["max_idleness_after_coverage_s"] =
        r.max_idleness_after_coverage_s ? json(*r.max_idleness_after_coverage_s)
                                        : json();
    jr["allocation_time_s"] =
        r.allocation_time_s ? json(*r.allocation_time_s) : json();
    jr["alloc_rounds"] = r.alloc_rounds;
    jr["patrol_step_ms_max"] = r.patrol_step_ms_max;
    jr["patrol_step_ms_mean"] = r.patrol_step_ms_mean;
    jr["patrol_step_ms_p999"] = r.patrol_step_ms_p999;
    jr["replan_ms_max"] = r.replan_ms_max;
    jr["replan_ms_mean"] = r.replan_ms_mean;
    jr["wall_ms"] = r.wall_ms;
    jr["warnings"] = r.warnings;
    jruns.push_back(std::move(jr));
  }
  m["runs"] = std::move(jruns);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("could not open " + path);
  out << m.dump(2) << '\n';
  if (!out) throw IoError("failed while writing " + path);
}

}  // namespace

std::vector<RunResult> run_batch(const MissionPlan& plan,
                                 const std::string& out_dir, int parallel) {
  const std::vector<std::uint64_t>& seeds = plan.scenario.seeds;
  std::vector<RunResult> results(seeds.size());

  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("could not create " + out_dir + ": " + ec.message());
  }

  const int workers =
      std::max(1, std::min<int>(parallel, static_cast<int>(seeds.size())));
  if (workers == 1) {
    for (size_t i = 0; i < seeds.size(); ++i)
      results[i] = run_single(plan, seeds[i], out_dir);
  } else {
    std::atomic<size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto work = [&] {
      for (size_t i = cursor.fetch_add(1); i < seeds.size();
           i = cursor.fetch_add(1)) {
        try {
          results[i] = run_single(plan, seeds[i], out_dir);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  if (!out_dir.empty()) {
    write_summary_csv((fs::path(out_dir) / "summary.csv").string(), results, plan);
    write_manifest((fs::path(out_dir) / "manifest.json").string(), plan, results);
  }
  return results;
}

}  // namespace swarmpatrol
