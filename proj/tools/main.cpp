// Command-line front end: validate scenarios, export plans, preview the
// task auction, and run full simulations.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarmpatrol/errors.hpp"
#include "swarmpatrol/runner.hpp"
#include "swarmpatrol/util.hpp"

namespace fs = std::filesystem;
using namespace swarmpatrol;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitBadPolygon = 4;
constexpr int kExitIo = 5;
constexpr int kExitRoute = 6;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_validate(const std::string& path) {
  const Scenario sc = load_scenario(path);
  std::cout << "scenario '" << sc.name << "' is valid\n"
            << "  buildings:   " << sc.buildings.size() << "\n"
            << "  agents:      " << sc.agent_count << "\n"
            << "  duration:    " << fmt_fixed(sc.duration_s, 1) << " s\n"
            << "  seeds:       " << sc.seeds.size() << "\n"
            << "  config hash: " << to_hex(config_hash(sc)) << "\n";
  return 0;
}

int cmd_plan(const std::string& path, const std::string& out_dir) {
  const Scenario sc = load_scenario(path);
  const MissionPlan plan = build_mission_plan(sc);
  print_warnings(plan.warnings);

  std::cout << "building  viewpoints  tour_m     agents\n";
  for (const BuildingPlanInfo& b : plan.per_building) {
    std::printf("%-9d %-11d %-10s %d\n", b.building_id, b.viewpoint_count,
                fmt_fixed(b.tour_length_m, 1).c_str(), b.capacity);
  }
  std::cout << "total viewpoints: " << plan.viewpoints.size() << "\n";

  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("could not create " + out_dir + ": " + ec.message());

    const std::string vp_path = (fs::path(out_dir) / "viewpoints.csv").string();
    std::ofstream vp_out(vp_path, std::ios::binary);
    if (!vp_out) throw IoError("could not open " + vp_path);
    vp_out << "viewpoint_id,building_id,x_m,y_m,z_m,bearing_deg,tilt_deg,roof\n";
    for (const Viewpoint& vp : plan.viewpoints) {
      vp_out << vp.id << ',' << vp.building_id << ',' << fmt_fixed(vp.pos.x())
             << ',' << fmt_fixed(vp.pos.y()) << ',' << fmt_fixed(vp.pos.z())
             << ',' << fmt_fixed(vp.bearing_deg) << ',' << fmt_fixed(vp.tilt_deg)
             << ',' << (vp.roof ? 1 : 0) << '\n';
    }

    const std::string tour_path = (fs::path(out_dir) / "tours.csv").string();
    std::ofstream tour_out(tour_path, std::ios::binary);
    if (!tour_out) throw IoError("could not open " + tour_path);
    tour_out << "building_id,seq,viewpoint_id\n";
    for (const Task& t : plan.tasks) {
      for (size_t i = 0; i < t.path.viewpoint_ids.size(); ++i) {
        tour_out << t.building_id << ',' << i + 1 << ','
                 << t.path.viewpoint_ids[i] << '\n';
      }
    }
    std::cout << "wrote " << vp_path << " and " << tour_path << "\n";
  }
  return 0;
}

// Synchronous auction preview with full connectivity; the simulator runs the
// same consensus over the radio model instead.
int cmd_allocate(const std::string& path, std::optional<std::uint64_t> seed_opt,
                 const std::string& out_dir) {
  const Scenario sc = load_scenario(path);
  const std::uint64_t seed = seed_opt.value_or(sc.seeds.front());
  const MissionPlan plan = build_mission_plan(sc);
  print_warnings(plan.warnings);

  const SpawnBox box = effective_spawn(sc);
  std::vector<Vec3> positions;
  std::vector<AllocationState> states;
  for (int id = 1; id <= sc.agent_count; ++id) {
    std::mt19937_64 rng = agent_rng(seed, id);
    Vec3 p;
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      p = Vec3(uniform_range(rng, box.lo.x(), box.hi.x()),
               uniform_range(rng, box.lo.y(), box.hi.y()),
               uniform_range(rng, box.lo.z(), box.hi.z()));
      placed = plan.oracle->point_clear(p);
    }
    if (!placed) throw InvariantError("spawn region is blocked by buildings");
    positions.push_back(p);
    states.emplace_back(id, plan.task_facts);
  }

  const int cap = 5 * sc.agent_count + 20;
  int rounds = 0;
  bool settled = false;
  while (rounds < cap && !settled) {
    const double t = rounds;
    ++rounds;
    std::vector<AllocationMsg> snaps;
    snaps.reserve(states.size());
    for (const AllocationState& s : states) snaps.push_back(s.snapshot(t));
    for (size_t i = 0; i < states.size(); ++i) {
      for (const AllocationMsg& m : snaps) {
        if (m.sender != states[i].agent_id()) states[i].merge(m, t);
      }
      states[i].bid_phase(positions[i], t);
    }
    std::vector<const AllocationState*> ptrs;
    for (const AllocationState& s : states) ptrs.push_back(&s);
    settled = allocation_converged(ptrs, positions);
  }
  if (!settled)
    std::cerr << "warning: auction still open after " << rounds << " rounds\n";

  std::vector<int> held(plan.tasks.size(), 0);
  for (const AllocationState& s : states) {
    if (s.my_task() >= 0) ++held[s.my_task()];
  }
  std::cout << "auction settled in " << rounds << " rounds\n"
            << "task  building  capacity  assigned\n";
  for (size_t i = 0; i < plan.tasks.size(); ++i) {
    std::printf("%-5d %-9d %-9d %d\n", plan.tasks[i].id,
                plan.tasks[i].building_id, plan.tasks[i].capacity, held[i]);
  }

  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("could not create " + out_dir + ": " + ec.message());
    const std::string a_path = (fs::path(out_dir) / "assignment.csv").string();
    std::ofstream out(a_path, std::ios::binary);
    if (!out) throw IoError("could not open " + a_path);
    out << "agent_id,task_id,building_id\n";
    for (const AllocationState& s : states) {
      out << s.agent_id() << ',';
      if (s.my_task() >= 0) {
        out << plan.tasks[s.my_task()].id << ','
            << plan.tasks[s.my_task()].building_id;
      } else {
        out << ',';
      }
      out << '\n';
    }
    std::cout << "wrote " << a_path << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& path, const std::string& out_dir,
                 const std::vector<std::uint64_t>& seed_override,
                 double duration_override, bool force_los, int parallel) {
  Scenario sc = load_scenario(path);
  if (!seed_override.empty()) sc.seeds = seed_override;
  if (duration_override > 0) sc.duration_s = duration_override;
  if (force_los) sc.comms.los_blocking = true;

  const MissionPlan plan = build_mission_plan(sc);
  print_warnings(plan.warnings);

  const std::vector<RunResult> runs = run_batch(plan, out_dir, parallel);
  std::cout << "run      coverage_s  peak_after_s\n";
  for (const RunResult& r : runs) {
    print_warnings(r.warnings);
    std::printf("%-8s %-11s %s\n", r.run_id.c_str(),
                r.coverage_complete_time_s
                    ? fmt_fixed(*r.coverage_complete_time_s, 1).c_str()
                    : "-",
                r.max_idleness_after_coverage_s
                    ? fmt_fixed(*r.max_idleness_after_coverage_s, 1).c_str()
                    : "-");
  }
  if (!out_dir.empty())
    std::cout << "wrote " << (fs::path(out_dir) / "summary.csv").string()
              << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmpatrol: multi-agent building patrol planner and simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;
  double duration = 0.0;
  bool force_los = false;
  int parallel = 1;
  std::uint64_t alloc_seed = 1;

  CLI::App* v = app.add_subcommand("validate", "Parse and check a scenario");
  v->add_option("--scenario", scenario_path, "Scenario file")->required();

  CLI::App* p = app.add_subcommand("plan", "Viewpoints, tours and capacities");
  p->add_option("--scenario", scenario_path, "Scenario file")->required();
  p->add_option("--out", out_dir, "Directory for viewpoints.csv and tours.csv");

  CLI::App* a = app.add_subcommand("allocate", "Preview the task auction");
  a->add_option("--scenario", scenario_path, "Scenario file")->required();
  a->add_option("--seed", alloc_seed, "Seed for spawn positions");
  a->add_option("--out", out_dir, "Directory for assignment.csv");

  CLI::App* s = app.add_subcommand("simulate", "Run the full simulation");
  s->add_option("--scenario", scenario_path, "Scenario file")->required();
  s->add_option("--out", out_dir, "Output directory (default: out)");
  s->add_option("--seeds", seeds, "Override the scenario seed list")
      ->delimiter(',');
  s->add_option("--duration", duration, "Override the duration in seconds");
  s->add_flag("--los", force_los, "Force line-of-sight comms blocking on");
  s->add_option("--parallel", parallel, "Worker threads for the seed batch")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (v->parsed()) return cmd_validate(scenario_path);
    if (p->parsed()) return cmd_plan(scenario_path, out_dir);
    if (a->parsed()) {
      std::optional<std::uint64_t> seed;
      if (a->count("--seed")) seed = alloc_seed;
      return cmd_allocate(scenario_path, seed, out_dir);
    }
    if (s->parsed())
      return cmd_simulate(scenario_path, out_dir.empty() ? "out" : out_dir,
                          seeds, duration, force_los, parallel);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const NonSimplePolygonError& e) {
    std::cerr << "bad polygon: " << e.what() << "\n";
    return kExitBadPolygon;
  } catch (const InvariantError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const RouteError& e) {
    std::cerr << "routing error: " << e.what() << "\n";
    return kExitRoute;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRoute;
  }
  return kExitUsage;
}
