#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "support.hpp"
#include "swarmpatrol/allocation.hpp"
#include "swarmpatrol/errors.hpp"

using namespace swarmpatrol;

namespace {

TaskFacts facts(int id, int capacity, double priority, const Vec3& centroid) {
  TaskFacts t;
  t.id = id;
  t.capacity = capacity;
  t.priority = priority;
  t.centroid = centroid;
  return t;
}

AllocationMsg raw_msg(int sender, std::vector<std::vector<WinnerEntry>> winners,
                      std::vector<std::pair<int, double>> info_time) {
  AllocationMsg m;
  m.sender = sender;
  m.winners = std::move(winners);
  m.info_time = std::move(info_time);
  return m;
}

// Synchronous gossip rounds over a fixed topology, mirroring the kernel's
// per-tick order: snapshot everyone, then merge + bid in agent order.
struct Gossip {
  std::vector<AllocationState> states;
  std::vector<Vec3> pos;
  std::vector<std::vector<int>> nbrs;  // by index
  double now = 0.0;

  Gossip(const std::vector<Vec3>& positions,
         const std::vector<TaskFacts>& tasks, bool full_mesh) {
    pos = positions;
    const int n = static_cast<int>(pos.size());
    for (int i = 0; i < n; ++i) states.emplace_back(i + 1, tasks);
    nbrs.assign(n, {});
    if (full_mesh) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) nbrs[i].push_back(j);
    }
  }

  bool converged() const {
    std::vector<const AllocationState*> ptrs;
    for (const auto& s : states) ptrs.push_back(&s);
    return allocation_converged(ptrs, pos);
  }

  // Rounds until convergence, or -1 when the cap is hit.
  int run(int max_rounds) {
    for (int r = 1; r <= max_rounds; ++r) {
      now += 1.0;
      std::vector<AllocationMsg> msgs;
      msgs.reserve(states.size());
      for (auto& s : states) msgs.push_back(s.snapshot(now));
      for (size_t i = 0; i < states.size(); ++i) {
        for (int j : nbrs[i]) states[i].merge(msgs[j], now);
        states[i].bid_phase(pos[i], now);
      }
      if (converged()) return r;
    }
    return -1;
  }
};

// Centralized reference: repeatedly hand the best open (agent, task) pair
// its slot; scan order breaks exact ties toward lower agent then lower task.
std::vector<int> greedy_assign(const std::vector<Vec3>& pos,
                               const std::vector<TaskFacts>& tasks) {
  const int a_n = static_cast<int>(pos.size());
  const int t_n = static_cast<int>(tasks.size());
  std::vector<int> left(t_n);
  for (int t = 0; t < t_n; ++t) left[t] = tasks[t].capacity;
  std::vector<int> out(a_n, -1);
  while (true) {
    int best_a = -1, best_t = -1;
    double best_s = 0.0;
    for (int a = 0; a < a_n; ++a) {
      if (out[a] >= 0) continue;
      for (int t = 0; t < t_n; ++t) {
        if (left[t] <= 0) continue;
        const double s = allocation_score(pos[a], tasks[t]);
        if (s > best_s) {
          best_s = s;
          best_a = a;
          best_t = t;
        }
      }
    }
    if (best_a < 0) return out;
    out[best_a] = best_t;
    --left[best_t];
  }
}

void check_matches_greedy(const Gossip& g,
                          const std::vector<TaskFacts>& tasks) {
  const std::vector<int> want = greedy_assign(g.pos, tasks);
  for (size_t i = 0; i < g.states.size(); ++i) {
    CHECK(g.states[i].my_task() == want[i]);
  }
  // Every agent's winner lists agree with the reference assignment.
  for (const AllocationState& s : g.states) {
    for (size_t t = 0; t < tasks.size(); ++t) {
      std::vector<int> holders;
      for (const WinnerEntry& e : s.winners()[t]) holders.push_back(e.agent_id);
      std::vector<int> expect;
      for (size_t a = 0; a < want.size(); ++a)
        if (want[a] == static_cast<int>(t)) expect.push_back(static_cast<int>(a) + 1);
      std::sort(holders.begin(), holders.end());
      CHECK(holders == expect);
    }
  }
}

}  // namespace

TEST_CASE("allocation_score") {
  const TaskFacts plain = facts(1, 1, 0.0, Vec3(0, 0, 0));
  CHECK(allocation_score(Vec3(1, 0, 0), plain) == doctest::Approx(1.0));
  CHECK(allocation_score(Vec3(2, 0, 0), plain) == doctest::Approx(0.25));
  CHECK(allocation_score(Vec3(0, 3, 4), plain) == doctest::Approx(1.0 / 25.0));

  // Inside the clamp radius the distance term saturates at 1.
  CHECK(allocation_score(Vec3(0.5, 0, 0), plain) == doctest::Approx(1.0));
  CHECK(allocation_score(Vec3(0, 0, 0), plain) == doctest::Approx(1.0));

  const TaskFacts urgent = facts(2, 1, 2.0, Vec3(0, 0, 0));
  CHECK(allocation_score(Vec3(2, 0, 0), urgent) == doctest::Approx(2.25));
  // Priority dominates distance: the clamp caps the distance term at 1, so
  // a priority-2 task beats a priority-0 task from anywhere.
  for (double d : {1.0, 5.0, 40.0}) {
    CHECK(allocation_score(Vec3(d, 0, 0), urgent) >
          allocation_score(Vec3(1, 0, 0), plain));
  }
}

TEST_CASE("bid_phase: lone agent takes the only slot") {
  AllocationState s(1, {facts(1, 1, 0.0, Vec3(0, 0, 0))});
  CHECK(s.my_task() == -1);
  CHECK(s.wants_to_bid(Vec3(1, 0, 0)));
  s.bid_phase(Vec3(1, 0, 0), 1.0);
  CHECK(s.my_task() == 0);
  REQUIRE(s.winners()[0].size() == 1);
  CHECK(s.winners()[0][0].agent_id == 1);
  CHECK(s.winners()[0][0].bid == doctest::Approx(1.0));
  CHECK(!s.wants_to_bid(Vec3(1, 0, 0)));

  // Holding a task, a second bid_phase is a no-op.
  s.bid_phase(Vec3(1, 0, 0), 2.0);
  CHECK(s.my_task() == 0);
  CHECK(s.winners()[0].size() == 1);
}

TEST_CASE("bid_phase: full list with stronger bids blocks entry") {
  const std::vector<TaskFacts> tasks = {facts(1, 1, 1.0, Vec3(0, 0, 0))};
  AllocationState near_agent(1, tasks);
  near_agent.bid_phase(Vec3(1, 0, 0), 1.0);  // bid 2.0

  AllocationState far_agent(2, tasks);
  far_agent.merge(near_agent.snapshot(1.0), 1.0);
  CHECK(!far_agent.wants_to_bid(Vec3(4, 0, 0)));  // would bid 1.0625
  far_agent.bid_phase(Vec3(4, 0, 0), 2.0);
  CHECK(far_agent.my_task() == -1);
  REQUIRE(far_agent.winners()[0].size() == 1);
  CHECK(far_agent.winners()[0][0].agent_id == 1);
}

TEST_CASE("merge: a stronger bid evicts the weaker and reopens bidding") {
  const std::vector<TaskFacts> tasks = {facts(1, 1, 1.0, Vec3(0, 0, 0))};
  AllocationState weak(1, tasks);
  weak.bid_phase(Vec3(2, 0, 0), 1.0);  // bid 1.25
  CHECK(weak.my_task() == 0);

  AllocationState strong(2, tasks);
  strong.merge(weak.snapshot(1.0), 1.0);
  // A closer agent outbids: 2.0 > 1.25 wins the slot.
  CHECK(allocation_score(Vec3(1, 0, 0), tasks[0]) == doctest::Approx(2.0));
  CHECK(strong.wants_to_bid(Vec3(1, 0, 0)));
  strong.bid_phase(Vec3(1, 0, 0), 2.0);
  CHECK(strong.my_task() == 0);
  REQUIRE(strong.winners()[0].size() == 1);
  CHECK(strong.winners()[0][0].agent_id == 2);

  weak.merge(strong.snapshot(2.0), 2.0);
  CHECK(weak.my_task() == -1);  // outbid, back to bidding
  CHECK(weak.winners()[0][0].agent_id == 2);
}

TEST_CASE("equal bids resolve to the lower agent id") {
  const std::vector<TaskFacts> tasks = {facts(1, 1, 0.0, Vec3(0, 0, 0))};
  // Symmetric positions, identical score 1.0.
  AllocationState high(2, tasks);
  high.bid_phase(Vec3(-1, 0, 0), 1.0);
  CHECK(high.my_task() == 0);

  AllocationState low(1, tasks);
  low.merge(high.snapshot(1.0), 1.0);
  CHECK(low.wants_to_bid(Vec3(1, 0, 0)));  // equal bid, lower id wins
  low.bid_phase(Vec3(1, 0, 0), 2.0);
  CHECK(low.my_task() == 0);
  REQUIRE(low.winners()[0].size() == 1);
  CHECK(low.winners()[0][0].agent_id == 1);

  high.merge(low.snapshot(2.0), 2.0);
  CHECK(high.my_task() == -1);
  CHECK(high.winners()[0][0].agent_id == 1);
  CHECK(!high.wants_to_bid(Vec3(-1, 0, 0)));  // equal bid, higher id loses
}

TEST_CASE("merge: sender is authoritative about itself") {
  const std::vector<TaskFacts> tasks = {facts(1, 2, 0.0, Vec3(0, 0, 0))};
  AllocationState s(1, tasks);

  // Learn at t=10 that agent 3 holds a slot.
  s.merge(raw_msg(3, {{WinnerEntry{3, 5.0}}}, {{3, 10.0}}), 10.0);
  REQUIRE(s.winners()[0].size() == 1);
  CHECK(s.winners()[0][0].agent_id == 3);

  // Agent 3 retracts. Its timestamp is older than what we hold, so the
  // third-party freshness rule alone would reject this; sender authority
  // must apply it anyway.
  s.merge(raw_msg(3, {{}}, {{3, 4.0}}), 11.0);
  CHECK(s.winners()[0].empty());
}

TEST_CASE("merge: third-party info needs a strictly newer timestamp") {
  const std::vector<TaskFacts> tasks = {facts(1, 2, 0.0, Vec3(0, 0, 0))};

  // Baseline: heard from agent 5 directly at t=10.
  AllocationState a(1, tasks);
  a.merge(raw_msg(5, {{WinnerEntry{5, 2.0}}}, {{5, 10.0}}), 10.0);
  REQUIRE(a.winners()[0].size() == 1);

  SUBCASE("older relay is ignored") {
    a.merge(raw_msg(2, {{}}, {{2, 20.0}, {5, 7.0}}), 20.0);
    REQUIRE(a.winners()[0].size() == 1);
    CHECK(a.winners()[0][0].agent_id == 5);
  }
  SUBCASE("equal-time relay is ignored") {
    a.merge(raw_msg(2, {{}}, {{2, 20.0}, {5, 10.0}}), 20.0);
    CHECK(a.winners()[0].size() == 1);
  }
  SUBCASE("newer relay replaces") {
    a.merge(raw_msg(2, {{}}, {{2, 20.0}, {5, 15.0}}), 20.0);
    CHECK(a.winners()[0].empty());
  }
  SUBCASE("newer relay can also update the entry") {
    a.merge(raw_msg(2, {{WinnerEntry{5, 3.5}}}, {{2, 20.0}, {5, 15.0}}), 20.0);
    REQUIRE(a.winners()[0].size() == 1);
    CHECK(a.winners()[0][0].bid == doctest::Approx(3.5));
  }
}

TEST_CASE("merge: the receiver's own claim stands") {
  const std::vector<TaskFacts> tasks = {facts(1, 1, 0.0, Vec3(0, 0, 0))};
  AllocationState s(1, tasks);
  s.bid_phase(Vec3(1, 0, 0), 1.0);
  REQUIRE(s.my_task() == 0);

  // A neighbor who has not heard of us claims the list is empty, with a
  // far-future timestamp for us. Our own entry must survive.
  s.merge(raw_msg(2, {{}}, {{1, 99.0}, {2, 99.0}}), 99.0);
  CHECK(s.my_task() == 0);
  REQUIRE(s.winners()[0].size() == 1);
  CHECK(s.winners()[0][0].agent_id == 1);
  CHECK(s.winners()[0][0].bid == doctest::Approx(1.0));

  // A corrupted echo of our own entry is not adopted either.
  s.merge(raw_msg(2, {{WinnerEntry{1, 0.123}}}, {{1, 99.0}, {2, 99.0}}), 99.0);
  CHECK(s.winners()[0][0].bid == doctest::Approx(1.0));
}

TEST_CASE("merge: capacity trim keeps the strongest entries") {
  const std::vector<TaskFacts> tasks = {facts(1, 1, 0.0, Vec3(0, 0, 0))};
  AllocationState observer(3, tasks);
  observer.merge(raw_msg(1, {{WinnerEntry{1, 1.0}}}, {{1, 1.0}}), 1.0);
  observer.merge(raw_msg(2, {{WinnerEntry{2, 2.0}}}, {{2, 2.0}}), 2.0);
  REQUIRE(observer.winners()[0].size() == 1);
  CHECK(observer.winners()[0][0].agent_id == 2);
  CHECK(observer.winners()[0][0].bid == doctest::Approx(2.0));

  CHECK_THROWS_AS(observer.merge(raw_msg(4, {{}, {}}, {{4, 1.0}}), 3.0),
                  InvariantError);
}

TEST_CASE("evict_lost drops silent agents but never the owner") {
  const std::vector<TaskFacts> tasks = {facts(1, 2, 0.0, Vec3(0, 0, 0))};
  AllocationState s(1, tasks);
  s.bid_phase(Vec3(1, 0, 0), 1.0);
  s.merge(raw_msg(3, {{WinnerEntry{3, 0.5}}}, {{3, 5.0}}), 5.0);
  REQUIRE(s.winners()[0].size() == 2);

  s.evict_lost(14.0, 10.0);  // 3 last heard at 5, within timeout
  CHECK(s.winners()[0].size() == 2);

  s.evict_lost(16.0, 10.0);  // now stale
  REQUIRE(s.winners()[0].size() == 1);
  CHECK(s.winners()[0][0].agent_id == 1);

  s.evict_lost(1e9, 10.0);  // own entry survives any silence
  CHECK(s.winners()[0].size() == 1);
  CHECK(s.my_task() == 0);
}

TEST_CASE("snapshot carries sender stamp and state") {
  AllocationState s(7, {facts(1, 1, 0.0, Vec3(0, 0, 0))});
  s.bid_phase(Vec3(1, 0, 0), 3.0);
  const AllocationMsg m = s.snapshot(5.0);
  CHECK(m.sender == 7);
  REQUIRE(m.winners.size() == 1);
  REQUIRE(m.winners[0].size() == 1);
  CHECK(m.winners[0][0].agent_id == 7);
  bool found = false;
  for (const auto& [a, t] : m.info_time) {
    if (a == 7) {
      found = true;
      CHECK(t == doctest::Approx(5.0));
    }
  }
  CHECK(found);
}

TEST_CASE("full-mesh auction matches the centralized greedy assignment") {
  std::mt19937_64 rng(88);
  for (int iter = 0; iter < 100; ++iter) {
    const int a_n = 2 + static_cast<int>(rng() % 11);  // 2..12
    const int t_n = 1 + static_cast<int>(rng() % 4);   // 1..4
    std::vector<TaskFacts> tasks;
    for (int t = 0; t < t_n; ++t) {
      tasks.push_back(facts(t + 1, 1 + static_cast<int>(rng() % 4),
                            0.5 * static_cast<double>(rng() % 5),
                            Vec3(sptest::urand(rng, -50, 50),
                                 sptest::urand(rng, -50, 50),
                                 sptest::urand(rng, 0, 30))));
    }
    std::vector<Vec3> pos;
    for (int a = 0; a < a_n; ++a) {
      pos.emplace_back(sptest::urand(rng, -60, 60), sptest::urand(rng, -60, 60),
                       sptest::urand(rng, 0, 30));
    }
    Gossip g(pos, tasks, true);
    const int rounds = g.run(60);
    REQUIRE(rounds > 0);
    check_matches_greedy(g, tasks);
  }
}

TEST_CASE("saturated fleet: every slot filled, every agent placed") {
  std::mt19937_64 rng(99);
  std::vector<TaskFacts> tasks = {facts(1, 3, 1.0, Vec3(-40, 0, 10)),
                                  facts(2, 2, 0.0, Vec3(40, 0, 10)),
                                  facts(3, 2, 2.0, Vec3(0, 40, 10))};
  std::vector<Vec3> pos;
  for (int a = 0; a < 7; ++a) {
    pos.emplace_back(sptest::urand(rng, -60, 60), sptest::urand(rng, -60, 60),
                     sptest::urand(rng, 0, 20));
  }
  Gossip g(pos, tasks, true);
  REQUIRE(g.run(60) > 0);
  for (const auto& s : g.states) CHECK(s.my_task() >= 0);
  for (size_t t = 0; t < tasks.size(); ++t) {
    CHECK(static_cast<int>(g.states[0].winners()[t].size()) ==
          tasks[t].capacity);
  }
  check_matches_greedy(g, tasks);
}

TEST_CASE("auction outcome is deterministic") {
  std::vector<TaskFacts> tasks = {facts(1, 2, 1.0, Vec3(-30, 10, 8)),
                                  facts(2, 3, 0.5, Vec3(25, -15, 12))};
  std::vector<Vec3> pos = {Vec3(0, 0, 5),   Vec3(-10, 4, 6), Vec3(12, -3, 7),
                           Vec3(30, 22, 9), Vec3(-44, 0, 4), Vec3(5, 5, 5)};
  Gossip g1(pos, tasks, true);
  Gossip g2(pos, tasks, true);
  REQUIRE(g1.run(60) == g2.run(60));
  for (size_t i = 0; i < g1.states.size(); ++i) {
    CHECK(g1.states[i].my_task() == g2.states[i].my_task());
    for (size_t t = 0; t < tasks.size(); ++t) {
      const auto& w1 = g1.states[i].winners()[t];
      const auto& w2 = g2.states[i].winners()[t];
      REQUIRE(w1.size() == w2.size());
      for (size_t k = 0; k < w1.size(); ++k) {
        CHECK(w1[k].agent_id == w2[k].agent_id);
        CHECK(w1[k].bid == w2[k].bid);
      }
    }
  }
}

TEST_CASE("large fleet: 100 agents over 7 tasks") {
  std::mt19937_64 rng(111);
  const std::vector<int> caps = {20, 15, 12, 13, 16, 9, 15};  // sums to 100
  std::vector<TaskFacts> tasks;
  for (int t = 0; t < 7; ++t) {
    tasks.push_back(facts(t + 1, caps[t], 0.5 * static_cast<double>(rng() % 4),
                          Vec3(sptest::urand(rng, -200, 200),
                               sptest::urand(rng, -200, 200),
                               sptest::urand(rng, 5, 30))));
  }
  std::vector<Vec3> pos;
  for (int a = 0; a < 100; ++a) {
    pos.emplace_back(sptest::urand(rng, -250, 250),
                     sptest::urand(rng, -250, 250),
                     sptest::urand(rng, 2, 10));
  }
  Gossip g(pos, tasks, true);
  const int rounds = g.run(80);
  REQUIRE(rounds > 0);
  for (const auto& s : g.states) CHECK(s.my_task() >= 0);
  for (size_t t = 0; t < tasks.size(); ++t) {
    CHECK(static_cast<int>(g.states[0].winners()[t].size()) == caps[t]);
  }
  check_matches_greedy(g, tasks);
}

TEST_CASE("line topology converges within diameter-bounded rounds") {
  std::mt19937_64 rng(123);
  for (int iter = 0; iter < 25; ++iter) {
    const int a_n = 3 + static_cast<int>(rng() % 8);  // 3..10
    std::vector<Vec3> pos;
    for (int a = 0; a < a_n; ++a)
      pos.emplace_back(10.0 * a, sptest::urand(rng, -3, 3), 5);
    std::vector<TaskFacts> tasks = {
        facts(1, 1 + static_cast<int>(rng() % 3), 1.0,
              Vec3(-20, 60, 10)),
        facts(2, 1 + static_cast<int>(rng() % 3), 0.5,
              Vec3(10.0 * a_n + 10, 60, 10))};
    Gossip g(pos, tasks, false);
    for (int a = 0; a < a_n; ++a) {
      if (a > 0) g.nbrs[a].push_back(a - 1);
      if (a + 1 < a_n) g.nbrs[a].push_back(a + 1);
    }
    const int diameter = a_n - 1;
    const int rounds = g.run(4 * diameter + 4);
    REQUIRE(rounds > 0);
    CHECK(rounds <= 4 * diameter + 4);
    check_matches_greedy(g, tasks);
  }
}
