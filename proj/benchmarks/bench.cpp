#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "swarmpatrol/matching.hpp"
#include "swarmpatrol/patrol.hpp"
#include "swarmpatrol/tour.hpp"
#include "swarmpatrol/types.hpp"
#include "swarmpatrol/util.hpp"

using namespace swarmpatrol;

namespace {

// Random points in a 200 m square; Euclidean distances are metric, which is
// the christofides precondition.
std::vector<Vec2> random_points(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i)
    pts.emplace_back(uniform_range(rng, 0, 200), uniform_range(rng, 0, 200));
  return pts;
}

}  // namespace

static void BM_ChristofidesTour(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pts = random_points(n, 42);
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i + 1;
  const DistFn dist = [&](int a, int b) {
    return (pts[a - 1] - pts[b - 1]).norm();
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(christofides_tour(ids, dist));
  }
}
BENCHMARK(BM_ChristofidesTour)->Arg(20)->Arg(40)->Arg(80);

static void BM_BlossomMatching(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pts = random_points(n, 7);
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w[i][j] = (pts[i] - pts[j]).norm();
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_weight_perfect_matching(w));
  }
}
BENCHMARK(BM_BlossomMatching)->Arg(20)->Arg(40);

static void BM_PatrolTick(benchmark::State& state) {
  const int n = 40;
  std::vector<Vec3> ring;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    ring.emplace_back(60 * std::cos(a), 60 * std::sin(a), 12.0);
  }
  std::vector<PatrolMessage> inbox;
  for (int k = 0; k < 8; ++k) {
    PatrolMessage m;
    m.sender = k + 2;
    m.task_id = 1;
    m.pos = ring[(5 * k) % n];
    m.current_index = (5 * k) % n + 1;
    m.last_index = next_index(m.current_index, -1, n);
    m.direction = k % 2 ? 1 : -1;
    inbox.push_back(m);
  }
  for (auto _ : state) {
    PatrolState st;
    st.task_id = 1;
    st.current_index = 3;
    st.last_index = 2;
    st.direction = 1;
    st.dwell_remaining = 3.0;
    int foreign = 0;
    process_messages(st, 1, ring[2], inbox, ring, 3.0, &foreign);
    benchmark::DoNotOptimize(service_step(st, true, 1.0, 3.0, n));
  }
}
BENCHMARK(BM_PatrolTick);

static void BM_RangeFilter(benchmark::State& state) {
  const int n = 100;
  std::mt19937_64 rng(11);
  std::vector<Vec3> pos;
  for (int i = 0; i < n; ++i) {
    pos.emplace_back(uniform_range(rng, 0, 400), uniform_range(rng, 0, 400),
                     uniform_range(rng, 2, 50));
  }
  for (auto _ : state) {
    int delivered = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && (pos[i] - pos[j]).norm() <= 50.0) ++delivered;
      }
    }
    benchmark::DoNotOptimize(delivered);
  }
}
BENCHMARK(BM_RangeFilter);

BENCHMARK_MAIN();
