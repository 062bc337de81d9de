#ifndef SWARMPATROL_SCENARIO_HPP_
#define SWARMPATROL_SCENARIO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swarmpatrol/building.hpp"
#include "swarmpatrol/types.hpp"

namespace swarmpatrol {

struct CommsModel {
  double range_m = 50.0;
  bool los_blocking = false;
};

struct SimEvent {
  enum class Kind { RemoveAgent, AddAgent };
  double at_s = 0.0;
  Kind kind = Kind::RemoveAgent;
  int agent_id = 0;
  Vec3 pos;  // AddAgent only
};

struct SpawnBox {
  Vec3 lo;
  Vec3 hi;
  bool set = false;
};

struct Scenario {
  std::string name = "unnamed";
  std::vector<Building> buildings;
  CameraSpec camera;
  int agent_count = 0;
  double agent_speed_mps = 2.0;
  double dwell_s = 3.0;
  CommsModel comms;
  std::vector<SimEvent> events;
  double duration_s = 300.0;
  std::vector<uint64_t> seeds{1};
  SpawnBox spawn;
};

// Parses and validates. Throws ParseError with file:line context on syntax
// trouble, NonSimplePolygonError / InvariantError on semantic violations.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(std::istream& in, const std::string& filename);
void validate_scenario(const Scenario& s);

// The spawn region actually used: the declared box, or a margin around the
// buildings with z in [2, 10] when none was declared.
SpawnBox effective_spawn(const Scenario& s);

// Full-parameter canonical rendering (defaults included), used for the run
// manifest and for hashing.
std::string canonical_echo(const Scenario& s);
uint64_t config_hash(const Scenario& s);

}  // namespace swarmpatrol

#endif  // SWARMPATROL_SCENARIO_HPP_
