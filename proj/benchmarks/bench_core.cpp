#include <benchmark/benchmark.h>

#include "geaps/agent.hpp"
#include "geaps/density.hpp"
#include "geaps/explore.hpp"
#include "geaps/oracle.hpp"

using namespace geaps;

namespace {

env::GAMDPSpec maze_spec(int size, int horizon) {
  env::GAMDPSpec s;
  s.maze = env::generate_maze(1, size, size, 0.1);
  s.horizon = horizon;
  return s;
}

}  // namespace

static void BM_QUpdate(benchmark::State& state) {
  const auto spec = maze_spec(10, 256);
  Rng rng(1);
  const auto traj = explore::random_rollout(env::reset(spec), 256, spec, rng);
  std::vector<agent::LabelledTransition> batch;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    batch.push_back({&traj[i], traj[(i * 37) % traj.size()].s_next.position, agent::RelabelCategory::Real});
  }
  agent::QTable q(spec.maze, 0.5, 0.98);
  const agent::GoalPredicate reached = [&](Goal a, Goal g) { return env::goal_reached(spec.maze, a, g); };
  for (auto _ : state) {
    agent::q_update(q, batch, reached);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_QUpdate);

static void BM_FitKde(benchmark::State& state) {
  Rng rng(2);
  std::vector<Goal> goals(static_cast<std::size_t>(state.range(0)));
  for (auto& g : goals) g = {static_cast<double>(rng.uniform_index(20)), static_cast<double>(rng.uniform_index(20))};
  for (auto _ : state) {
    Rng sub(3);
    auto m = density::fit_kde_normalized(goals, 0.1, 10000, sub);
    benchmark::DoNotOptimize(m.log_density(goals.front()));
  }
}
BENCHMARK(BM_FitKde)->Arg(1000)->Arg(10000);

static void BM_EnumeratePe(benchmark::State& state) {
  const auto spec = maze_spec(8, 64);
  const auto start = env::reset(spec);
  const auto policy = oracle::uniform_policy();
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::enumerate_pe(spec, start, static_cast<int>(state.range(0)), policy));
  }
}
BENCHMARK(BM_EnumeratePe)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
