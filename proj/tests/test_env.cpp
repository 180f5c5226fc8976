#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "geaps/env.hpp"

using namespace geaps;
using namespace geaps::env;

namespace {

// Independent flood fill over the wall predicate.
bool all_reachable(const MazeSpec& m) {
  std::vector<bool> seen(static_cast<std::size_t>(m.num_cells()), false);
  std::deque<Cell> open{m.start_cell};
  seen[static_cast<std::size_t>(m.cell_index(m.start_cell))] = true;
  int count = 1;
  while (!open.empty()) {
    Cell c = open.front();
    open.pop_front();
    const Cell nbrs[4] = {{c.x, c.y + 1}, {c.x + 1, c.y}, {c.x, c.y - 1}, {c.x - 1, c.y}};
    for (int i = 0; i < 4; ++i) {
      if (m.blocked(c, static_cast<Move>(i))) continue;
      auto idx = static_cast<std::size_t>(m.cell_index(nbrs[i]));
      if (!seen[idx]) {
        seen[idx] = true;
        ++count;
        open.push_back(nbrs[i]);
      }
    }
  }
  return count == m.num_cells();
}

GAMDPSpec spec_of(MazeSpec m, int horizon = 50) {
  GAMDPSpec s;
  s.maze = std::move(m);
  s.horizon = horizon;
  return s;
}

}  // namespace

TEST(Env, GeneratedMazeIsConnected) {
  const auto m = generate_maze(7, 10, 10, 0.1);
  EXPECT_EQ(m.width, 10);
  EXPECT_EQ(m.height, 10);
  EXPECT_TRUE(all_reachable(m));
  EXPECT_TRUE(m.in_bounds(m.start_cell));
  ASSERT_EQ(m.desired_region.size(), 1u);
  EXPECT_EQ(m.desired_region[0], (Cell{9, 9}));
}

TEST(Env, ConnectivityAcrossSeedsAndLoopProbabilities) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (double lp : {0.0, 0.3, 1.0}) {
      EXPECT_TRUE(all_reachable(generate_maze(seed, 7, 4, lp))) << seed << " " << lp;
    }
  }
}

TEST(Env, ZeroLoopProbabilityGivesSpanningTree) {
  const auto m = generate_maze(3, 6, 5, 0.0);
  const std::size_t interior_edges = 5 * 5 + 6 * 4;
  // A spanning tree over 30 cells opens exactly 29 edges.
  EXPECT_EQ(interior_edges - m.interior_wall_count(), 29u);
}

TEST(Env, SingleCellMaze) {
  for (std::uint64_t seed : {0ull, 5ull, 99ull}) {
    const auto m = generate_maze(seed, 1, 1, 0.0);
    EXPECT_EQ(m.num_cells(), 1);
    EXPECT_EQ(m.interior_wall_count(), 0u);
    for (Move a : kAllMoves) EXPECT_TRUE(m.blocked({0, 0}, a));
  }
}

TEST(Env, GenerationIsDeterministic) {
  EXPECT_EQ(generate_maze(7, 10, 10, 0.1), generate_maze(7, 10, 10, 0.1));
  EXPECT_NE(generate_maze(7, 10, 10, 0.1), generate_maze(8, 10, 10, 0.1));
}

TEST(Env, PretrainSuite) {
  const auto suite = generate_pretrain_suite(0, 20, 5);
  ASSERT_EQ(suite.size(), 20u);
  for (std::size_t i = 0; i < suite.size(); ++i) {
    EXPECT_EQ(suite[i].width, 5);
    EXPECT_EQ(suite[i].start_cell, (Cell{2, 2}));
    EXPECT_TRUE(all_reachable(suite[i]));
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(suite[i], suite[j]);
  }
  EXPECT_TRUE(generate_pretrain_suite(0, 0, 5).empty());
  EXPECT_THROW(generate_pretrain_suite(0, 3, 2), InvalidParameter);
  EXPECT_THROW(generate_pretrain_suite(0, -1, 5), InvalidParameter);
}

TEST(Env, StepOpenAndWall) {
  auto spec = spec_of(MazeSpec::open(5, 5, {2, 2}));
  auto s = reset(spec);
  auto n = step(s, Move::Right, spec);
  EXPECT_EQ(n.position, (Vec2{3, 2}));
  EXPECT_EQ(n.step_index, 1);

  spec.maze.set_wall({2, 2}, Move::Up, true);
  auto b = step(s, Move::Up, spec);
  EXPECT_EQ(b.position, s.position);
  EXPECT_EQ(b.step_index, 1);
  EXPECT_EQ(achieved_goal(b), achieved_goal(s));
  EXPECT_TRUE(spec.maze.blocked({2, 3}, Move::Down));
}

TEST(Env, BoundaryIsClosed) {
  auto spec = spec_of(MazeSpec::open(2, 2, {0, 0}));
  auto s = reset(spec);
  EXPECT_EQ(step(s, Move::Left, spec).position, s.position);
  EXPECT_EQ(step(s, Move::Down, spec).position, s.position);
  spec.maze.set_wall({0, 0}, Move::Left, true);  // ignored
  EXPECT_EQ(spec.maze.interior_wall_count(), 0u);
}

TEST(Env, CorridorHandSimulation) {
  // 3x1 corridor, start in the middle, horizon 6.
  auto spec = spec_of(MazeSpec::open(3, 1, {1, 0}), 6);
  const Move actions[] = {Move::Right, Move::Right, Move::Left, Move::Left, Move::Left, Move::Up};
  const int expected_x[] = {2, 2, 1, 0, 0, 0};
  auto s = reset(spec);
  for (int t = 0; t < 6; ++t) {
    s = step(s, actions[t], spec);
    EXPECT_EQ(s.position, (Vec2{static_cast<double>(expected_x[t]), 0.0})) << t;
    EXPECT_EQ(s.step_index, t + 1);
  }
  EXPECT_THROW(step(s, Move::Right, spec), EpisodeExhausted);
}

TEST(Env, AchievedGoalIsPosition) {
  EXPECT_EQ(achieved_goal({{3, 4}, 0}), (Goal{3, 4}));
  EXPECT_EQ(achieved_goal({{3, 4}, 17}), (Goal{3, 4}));
  EXPECT_EQ(achieved_goal({{1.27, 0.53}, 2}), (Goal{1.27, 0.53}));
}

TEST(Env, AgentObsOpenInterior) {
  auto spec = spec_of(MazeSpec::open(5, 5, {2, 2}));
  EXPECT_EQ(agent_obs(reset(spec), spec).wall_mask, 0);
  // Corner: Down and Left blocked.
  EXPECT_EQ(agent_obs(state_at(spec, {0, 0}), spec).wall_mask, 0b1100);
}

TEST(Env, AgentObsContinuousOffset) {
  auto m = MazeSpec::open(10, 10, {0, 0});
  m.continuous = true;
  auto spec = spec_of(m);
  const auto obs = agent_obs({{2.3, 5.8}, 0}, spec);
  EXPECT_NEAR(obs.offset.x, 0.3, 1e-12);
  EXPECT_NEAR(obs.offset.y, 0.8, 1e-12);
}

TEST(Env, AgentObsDependsOnlyOnLocalWalls) {
  auto spec = spec_of(generate_maze(11, 6, 6, 0.3));
  const auto& m = spec.maze;
  for (int i = 0; i < m.num_cells(); ++i) {
    for (int j = 0; j < m.num_cells(); ++j) {
      const Cell a = m.cell_at(i), b = m.cell_at(j);
      bool same = true;
      for (Move mv : kAllMoves) same = same && m.blocked(a, mv) == m.blocked(b, mv);
      const auto oa = agent_obs(state_at(spec, a, 0), spec);
      const auto ob = agent_obs(state_at(spec, b, 7), spec);
      EXPECT_EQ(same, oa == ob) << i << " " << j;
    }
  }
}

TEST(Env, ContinuousStepClampsAndSlides) {
  auto m = MazeSpec::open(3, 3, {1, 1});
  m.continuous = true;
  m.set_wall({1, 1}, Move::Right, true);
  auto spec = spec_of(m);
  EnvState s{{1.5, 1.5}, 0};
  // Length 5 displacement clamps to 1.
  auto n = step_continuous(s, {0.0, 5.0}, spec);
  EXPECT_NEAR(n.position.y, 2.5, 1e-12);
  EXPECT_NEAR(n.position.x, 1.5, 1e-12);
  // x stopped by the wall, y still moves.
  auto w = step_continuous(s, {0.6, -0.6}, spec);
  EXPECT_LT(w.position.x, 2.0);
  EXPECT_EQ(cell_of(w.position).x, 1);
  EXPECT_NEAR(w.position.y, 0.9, 1e-12);
  // Discrete action in the point maze.
  auto u = step(s, Move::Up, spec);
  EXPECT_NEAR(u.position.y, 2.5, 1e-12);
  EXPECT_TRUE(goal_reached(m, {1.5, 1.5}, {1.8, 1.9}));
  EXPECT_FALSE(goal_reached(m, {1.5, 1.5}, {1.9, 1.9}));
}

TEST(Env, GoalReachedDiscrete) {
  auto m = MazeSpec::open(3, 3, {0, 0});
  EXPECT_TRUE(goal_reached(m, {1, 2}, {1, 2}));
  EXPECT_FALSE(goal_reached(m, {1, 2}, {2, 2}));
}

TEST(Env, SpecValidation) {
  GAMDPSpec s;
  EXPECT_NO_THROW(s.validate());
  s.horizon = 0;
  EXPECT_THROW(s.validate(), InvalidParameter);
  s.horizon = 5;
  s.discount = 0.0;
  EXPECT_THROW(s.validate(), InvalidParameter);
  s.discount = 1.0;
  EXPECT_NO_THROW(s.validate());
}

TEST(Env, Distances) {
  const auto m = MazeSpec::open(3, 1, {0, 0});
  EXPECT_EQ(distances_from(m, {0, 0}), (std::vector<int>{0, 1, 2}));
}

TEST(Env, TextRoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto m = generate_maze(seed, 4 + static_cast<int>(seed % 3), 3, 0.2);
    EXPECT_EQ(parse_text(to_text(m)), m);
  }
  auto c = MazeSpec::open(2, 2, {0, 0});
  c.continuous = true;
  c.desired_region = {{0, 0}};
  EXPECT_EQ(parse_text(to_text(c)), c);
}

TEST(Env, TextLayout) {
  auto m = MazeSpec::open(3, 1, {1, 0});
  m.desired_region = {{2, 0}};
  m.set_wall({0, 0}, Move::Right, true);
  EXPECT_EQ(to_text(m), "maze 3 1 discrete\n#######\n# #S G#\n#######\n");
}

TEST(Env, TextErrors) {
  EXPECT_THROW(parse_text(""), InvalidParameter);
  EXPECT_THROW(parse_text("maze 2 x discrete\n"), InvalidParameter);
  EXPECT_THROW(parse_text("maze 1 1 discrete\n###\n#S#\n"), InvalidParameter);
  EXPECT_THROW(parse_text("maze 1 1 discrete\n###\n#S##\n###\n"), InvalidParameter);
  EXPECT_THROW(parse_text("maze 1 1 discrete\n###\n# #\n###\n"), InvalidParameter);
  EXPECT_THROW(parse_text("maze 2 1 discrete\n#####\n#S S#\n#####\n"), InvalidParameter);
  EXPECT_THROW(parse_text("maze 1 1 discrete\n###\n#x#\n###\n"), InvalidParameter);
  EXPECT_NO_THROW(parse_text("maze 1 1 discrete\n###\n#B#\n###\n"));
}
