#ifndef SWARMPATROL_RUNNER_HPP_
#define SWARMPATROL_RUNNER_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swarmpatrol/routing.hpp"
#include "swarmpatrol/scenario.hpp"
#include "swarmpatrol/simkernel.hpp"
#include "swarmpatrol/tasks.hpp"

namespace swarmpatrol {

// Per-building planning facts, carried into the run manifest.
struct BuildingPlanInfo {
  int building_id = 0;
  int viewpoint_count = 0;
  double tour_length_m = 0.0;
  int capacity = 0;
  double christofides_ms = 0.0;
};

// Everything derived once per scenario and shared by every seed: viewpoints,
// the distance oracle, per-building tours, tasks, and precomputed tour-edge
// polylines.
struct MissionPlan {
  Scenario scenario;
  std::vector<Viewpoint> viewpoints;
  std::vector<Task> tasks;
  std::vector<TaskFacts> task_facts;
  std::shared_ptr<const DistanceOracle> oracle;
  std::map<std::pair<int, int>, std::vector<Vec3>> edge_routes;
  std::vector<BuildingPlanInfo> per_building;
  std::vector<std::string> warnings;
  double oracle_build_ms = 0.0;
};

MissionPlan build_mission_plan(const Scenario& s);

struct RunResult {
  std::uint64_t seed = 0;
  std::string run_id;
  std::optional<double> coverage_complete_time_s;
  std::optional<double> max_idleness_after_coverage_s;
  std::optional<double> allocation_time_s;
  int alloc_rounds = 0;
  double patrol_step_ms_max = 0.0;
  double patrol_step_ms_mean = 0.0;
  // 99.9th percentile of per-agent patrol decision time; the max of millions
  // of samples mostly captures host scheduling noise on shared machines.
  double patrol_step_ms_p999 = 0.0;
  double replan_ms_max = 0.0;
  double replan_ms_mean = 0.0;
  double wall_ms = 0.0;
  std::vector<std::string> warnings;
};

// One simulation. With a non-empty out_dir this writes
// out_dir/run_<seed>/{timeseries.csv,per_viewpoint.csv,idleness.svg}.
RunResult run_single(const MissionPlan& plan, std::uint64_t seed,
                     const std::string& out_dir);

// Every scenario seed, optionally spread over `parallel` threads. Results
// come back in seed order regardless of scheduling. With a non-empty
// out_dir this also writes summary.csv and manifest.json. Timing fields go
// to the manifest only, so the CSV and SVG outputs of equal (scenario,
// seed) pairs are byte-identical.
std::vector<RunResult> run_batch(const MissionPlan& plan,
                                 const std::string& out_dir, int parallel);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_RUNNER_HPP_
