#include "swarmpatrol/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "swarmpatrol/errors.hpp"
#include "swarmpatrol/util.hpp"

namespace swarmpatrol {

namespace {

struct LineCtx {
  const std::string& file;
  int line;
};

[[noreturn]] void fail(const LineCtx& ctx, const std::string& msg) {
  throw ParseError(ctx.file, ctx.line, msg);
}

double parse_num(const LineCtx& ctx, const std::string& s) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(ctx, "bad number '" + s + "'");
    if (!std::isfinite(v)) fail(ctx, "non-finite number '" + s + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    fail(ctx, "bad number '" + s + "'");
  }
}

int parse_int(const LineCtx& ctx, const std::string& s) {
  const double v = parse_num(ctx, s);
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9) fail(ctx, "expected an integer, got '" + s + "'");
  return static_cast<int>(r);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<double> parse_csv_nums(const LineCtx& ctx, const std::string& s,
                                   size_t expect) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(parse_num(ctx, item));
  if (expect != 0 && out.size() != expect)
    fail(ctx, "expected " + std::to_string(expect) + " comma-separated values");
  return out;
}

// key=value token; returns false when no '=' present.
bool split_kv(const std::string& tok, std::string& key, std::string& val) {
  const size_t eq = tok.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  key = tok.substr(0, eq);
  val = tok.substr(eq + 1);
  return true;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& filename) {
  Scenario sc;
  std::set<std::string> seen_once;
  std::set<int> building_ids;
  bool any_agents = false;

  auto once = [&](const LineCtx& ctx, const std::string& directive) {
    if (!seen_once.insert(directive).second)
      fail(ctx, "duplicate '" + directive + "' directive");
  };

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const LineCtx ctx{filename, lineno};
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::vector<std::string> toks = split_ws(raw);
    if (toks.empty()) continue;
    const std::string& head = toks[0];

    if (head == "name") {
      once(ctx, head);
      if (toks.size() < 2) fail(ctx, "name needs a value");
      std::string joined = toks[1];
      for (size_t i = 2; i < toks.size(); ++i) joined += "_" + toks[i];
      sc.name = joined;
    } else if (head == "camera") {
      once(ctx, head);
      std::string k, v;
      for (size_t i = 1; i < toks.size(); ++i) {
        if (!split_kv(toks[i], k, v)) fail(ctx, "expected key=value, got '" + toks[i] + "'");
        if (k == "fov_w_deg") sc.camera.fov_w_deg = parse_num(ctx, v);
        else if (k == "fov_h_deg") sc.camera.fov_h_deg = parse_num(ctx, v);
        else if (k == "standoff_m") sc.camera.standoff_m = parse_num(ctx, v);
        else fail(ctx, "unknown camera key '" + k + "'");
      }
    } else if (head == "agents") {
      once(ctx, head);
      std::string k, v;
      for (size_t i = 1; i < toks.size(); ++i) {
        if (!split_kv(toks[i], k, v)) fail(ctx, "expected key=value, got '" + toks[i] + "'");
        if (k == "count") {
          sc.agent_count = parse_int(ctx, v);
          any_agents = true;
        } else if (k == "speed_mps") sc.agent_speed_mps = parse_num(ctx, v);
        else if (k == "dwell_s") sc.dwell_s = parse_num(ctx, v);
        else fail(ctx, "unknown agents key '" + k + "'");
      }
    } else if (head == "comms") {
      once(ctx, head);
      std::string k, v;
      for (size_t i = 1; i < toks.size(); ++i) {
        if (!split_kv(toks[i], k, v)) fail(ctx, "expected key=value, got '" + toks[i] + "'");
        if (k == "range_m") sc.comms.range_m = parse_num(ctx, v);
        else if (k == "los") {
          if (v == "on") sc.comms.los_blocking = true;
          else if (v == "off") sc.comms.los_blocking = false;
          else fail(ctx, "los must be on or off");
        } else fail(ctx, "unknown comms key '" + k + "'");
      }
    } else if (head == "spawn") {
      once(ctx, head);
      std::string k, v;
      if (toks.size() != 2 || !split_kv(toks[1], k, v) || k != "box_m")
        fail(ctx, "spawn expects box_m=x0,y0,z0,x1,y1,z1");
      const auto nums = parse_csv_nums(ctx, v, 6);
      sc.spawn.lo = Vec3(nums[0], nums[1], nums[2]);
      sc.spawn.hi = Vec3(nums[3], nums[4], nums[5]);
      sc.spawn.set = true;
    } else if (head == "duration_s") {
      once(ctx, head);
      if (toks.size() != 2) fail(ctx, "duration_s expects one value");
      sc.duration_s = parse_num(ctx, toks[1]);
    } else if (head == "seeds") {
      once(ctx, head);
      if (toks.size() != 2) fail(ctx, "seeds expects a comma-separated list");
      sc.seeds.clear();
      for (double v : parse_csv_nums(ctx, toks[1], 0)) {
        if (v < 0 || std::abs(v - std::round(v)) > 1e-9)
          fail(ctx, "seeds must be non-negative integers");
        sc.seeds.push_back(static_cast<uint64_t>(std::llround(v)));
      }
      if (sc.seeds.empty()) fail(ctx, "seeds list is empty");
    } else if (head == "building") {
      Building b;
      bool have_id = false, have_h = false, have_fp = false;
      std::string k, v;
      for (size_t i = 1; i < toks.size(); ++i) {
        if (!split_kv(toks[i], k, v)) fail(ctx, "expected key=value, got '" + toks[i] + "'");
        if (k == "id") {
          b.id = parse_int(ctx, v);
          have_id = true;
        } else if (k == "height_m") {
          b.height = parse_num(ctx, v);
          have_h = true;
        } else if (k == "priority") {
          b.priority = parse_num(ctx, v);
        } else if (k == "footprint_m") {
          // The value plus every following token is an x,y vertex.
          std::vector<std::string> pairs{v};
          for (size_t j = i + 1; j < toks.size(); ++j) pairs.push_back(toks[j]);
          i = toks.size();
          for (const std::string& p : pairs) {
            const auto xy = parse_csv_nums(ctx, p, 2);
            b.footprint.emplace_back(xy[0], xy[1]);
          }
          have_fp = true;
        } else {
          fail(ctx, "unknown building key '" + k + "'");
        }
      }
      if (!have_id || !have_h || !have_fp)
        fail(ctx, "building needs id=, height_m= and footprint_m=");
      if (!building_ids.insert(b.id).second)
        fail(ctx, "duplicate building id " + std::to_string(b.id));
      sc.buildings.push_back(std::move(b));
    } else if (head == "event") {
      SimEvent ev;
      bool have_kind = false, have_pos = false;
      std::string k, v;
      for (size_t i = 1; i < toks.size(); ++i) {
        if (!split_kv(toks[i], k, v)) fail(ctx, "expected key=value, got '" + toks[i] + "'");
        if (k == "at_s") ev.at_s = parse_num(ctx, v);
        else if (k == "remove_agent") {
          ev.kind = SimEvent::Kind::RemoveAgent;
          ev.agent_id = parse_int(ctx, v);
          have_kind = true;
        } else if (k == "add_agent") {
          ev.kind = SimEvent::Kind::AddAgent;
          ev.agent_id = parse_int(ctx, v);
          have_kind = true;
        } else if (k == "pos_m") {
          const auto xyz = parse_csv_nums(ctx, v, 3);
          ev.pos = Vec3(xyz[0], xyz[1], xyz[2]);
          have_pos = true;
        } else fail(ctx, "unknown event key '" + k + "'");
      }
      if (!have_kind) fail(ctx, "event needs remove_agent= or add_agent=");
      if (ev.kind == SimEvent::Kind::AddAgent && !have_pos)
        fail(ctx, "add_agent event needs pos_m=");
      if (!sc.events.empty() && ev.at_s < sc.events.back().at_s - 1e-9)
        fail(ctx, "event times must be non-decreasing");
      sc.events.push_back(ev);
    } else {
      fail(ctx, "unknown directive '" + head + "'");
    }
  }
  if (!any_agents)
    throw ParseError(filename, lineno, "missing 'agents count=' directive");
  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path);
  return parse_scenario(in, path);
}

void validate_scenario(const Scenario& s) {
  if (s.buildings.empty()) throw InvariantError("scenario has no buildings");
  if (s.agent_count < static_cast<int>(s.buildings.size()))
    throw InvariantError("agent count " + std::to_string(s.agent_count) +
                         " is below the building count " +
                         std::to_string(s.buildings.size()));
  if (!(s.duration_s > 0)) throw InvariantError("duration must be positive");
  if (s.seeds.empty()) throw InvariantError("at least one seed required");
  if (!(s.camera.fov_w_deg > 0 && s.camera.fov_w_deg < 180))
    throw InvariantError("camera fov_w_deg outside (0, 180)");
  if (!(s.camera.fov_h_deg > 0 && s.camera.fov_h_deg < 180))
    throw InvariantError("camera fov_h_deg outside (0, 180)");
  if (!(s.camera.standoff_m > 0)) throw InvariantError("camera standoff must be positive");
  if (!(s.agent_speed_mps > 0)) throw InvariantError("agent speed must be positive");
  if (s.dwell_s < 0) throw InvariantError("dwell time cannot be negative");
  if (!(s.comms.range_m > 0)) throw InvariantError("comms range must be positive");
  for (const Building& b : s.buildings) {
    if (!(b.height > 0))
      throw InvariantError("building " + std::to_string(b.id) +
                           ": height must be positive");
    if (b.priority < 0)
      throw InvariantError("building " + std::to_string(b.id) +
                           ": priority cannot be negative");
    if (auto defect = simplicity_defect(b.footprint))
      throw NonSimplePolygonError("building " + std::to_string(b.id) + ": " +
                                  *defect);
  }
  if (s.spawn.set) {
    for (int k = 0; k < 3; ++k) {
      if (!(s.spawn.lo[k] < s.spawn.hi[k]))
        throw InvariantError("spawn box must have positive extent on every axis");
    }
    if (s.spawn.lo.z() < 0) throw InvariantError("spawn box must sit at z >= 0");
  }
  std::set<int> known_ids;
  for (int i = 1; i <= s.agent_count; ++i) known_ids.insert(i);
  for (const SimEvent& ev : s.events) {
    if (ev.at_s < 0) throw InvariantError("event time cannot be negative");
    if (ev.kind == SimEvent::Kind::AddAgent) {
      if (!known_ids.insert(ev.agent_id).second)
        throw InvariantError("add_agent id " + std::to_string(ev.agent_id) +
                             " already in use");
    } else if (!known_ids.count(ev.agent_id)) {
      throw InvariantError("remove_agent references unknown id " +
                           std::to_string(ev.agent_id));
    }
  }
}

SpawnBox effective_spawn(const Scenario& s) {
  if (s.spawn.set) return s.spawn;
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const Building& b : s.buildings) {
    for (const Vec2& p : b.footprint) {
      x0 = std::min(x0, p.x());
      y0 = std::min(y0, p.y());
      x1 = std::max(x1, p.x());
      y1 = std::max(y1, p.y());
    }
  }
  SpawnBox box;
  box.lo = Vec3(x0 - 15.0, y0 - 15.0, 2.0);
  box.hi = Vec3(x1 + 15.0, y1 + 15.0, 10.0);
  box.set = true;
  return box;
}

std::string canonical_echo(const Scenario& s) {
  std::ostringstream out;
  const SpawnBox spawn = effective_spawn(s);
  out << "name " << s.name << '\n';
  out << "camera fov_w_deg=" << fmt_fixed(s.camera.fov_w_deg, 6)
      << " fov_h_deg=" << fmt_fixed(s.camera.fov_h_deg, 6)
      << " standoff_m=" << fmt_fixed(s.camera.standoff_m, 6) << '\n';
  out << "agents count=" << s.agent_count
      << " speed_mps=" << fmt_fixed(s.agent_speed_mps, 6)
      << " dwell_s=" << fmt_fixed(s.dwell_s, 6) << '\n';
  out << "comms range_m=" << fmt_fixed(s.comms.range_m, 6) << " los="
      << (s.comms.los_blocking ? "on" : "off") << '\n';
  out << "spawn box_m=" << fmt_fixed(spawn.lo.x(), 6) << ','
      << fmt_fixed(spawn.lo.y(), 6) << ',' << fmt_fixed(spawn.lo.z(), 6) << ','
      << fmt_fixed(spawn.hi.x(), 6) << ',' << fmt_fixed(spawn.hi.y(), 6) << ','
      << fmt_fixed(spawn.hi.z(), 6) << '\n';
  out << "duration_s " << fmt_fixed(s.duration_s, 6) << '\n';
  out << "seeds ";
  for (size_t i = 0; i < s.seeds.size(); ++i) {
    if (i) out << ',';
    out << s.seeds[i];
  }
  out << '\n';
  for (const Building& b : s.buildings) {
    out << "building id=" << b.id << " height_m=" << fmt_fixed(b.height, 6)
        << " priority=" << fmt_fixed(b.priority, 6) << " footprint_m=";
    for (size_t i = 0; i < b.footprint.size(); ++i) {
      if (i) out << ' ';
      out << fmt_fixed(b.footprint[i].x(), 6) << ','
          << fmt_fixed(b.footprint[i].y(), 6);
    }
    out << '\n';
  }
  for (const SimEvent& ev : s.events) {
    out << "event at_s=" << fmt_fixed(ev.at_s, 6);
    if (ev.kind == SimEvent::Kind::RemoveAgent) {
      out << " remove_agent=" << ev.agent_id;
    } else {
      out << " add_agent=" << ev.agent_id << " pos_m=" << fmt_fixed(ev.pos.x(), 6)
          << ',' << fmt_fixed(ev.pos.y(), 6) << ',' << fmt_fixed(ev.pos.z(), 6);
    }
    out << '\n';
  }
  return out.str();
}

uint64_t config_hash(const Scenario& s) { return fnv1a64(canonical_echo(s)); }

}  // namespace swarmpatrol
