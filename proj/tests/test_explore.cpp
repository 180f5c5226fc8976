#include <gtest/gtest.h>

#include <map>

#include "geaps/explore.hpp"

using namespace geaps;
using namespace geaps::explore;

namespace {

env::GAMDPSpec open_spec(int size, int horizon) {
  env::GAMDPSpec s;
  s.maze = env::MazeSpec::open(size, size, {size / 2, size / 2});
  s.horizon = horizon;
  return s;
}

skills::SkillSet trained_skills() {
  skills::TrainConfig cfg;
  cfg.iterations = 150;
  cfg.seed = 3;
  const std::vector<env::MazeSpec> suite{env::MazeSpec::open(5, 5, {2, 2})};
  return skills::train_skills(suite, cfg);
}

}  // namespace

TEST(Explore, StrategyNames) {
  for (auto s : {Strategy::Geaps, Strategy::Random, Strategy::None}) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_THROW(parse_strategy("greedy"), InvalidParameter);
}

TEST(Explore, ConfigValidation) {
  EXPECT_NO_THROW((ExploreConfig{4, 2}.validate()));
  EXPECT_NO_THROW((ExploreConfig{0, 2}.validate()));
  EXPECT_THROW((ExploreConfig{2, 2}.validate()), InvalidParameter);
  EXPECT_THROW((ExploreConfig{4, 0}.validate()), InvalidParameter);
  EXPECT_THROW((ExploreConfig{-1, 1}.validate()), InvalidParameter);
}

TEST(Explore, GeapsSkillDrawCadence) {
  const auto spec = open_spec(9, 50);
  const skills::SkillSet s(4, 2, 1.0);
  Rng rng(1);
  std::vector<int> drawn;
  const auto traj = geaps_rollout(env::reset(spec), {4, 2}, s, spec, rng, &drawn);
  EXPECT_EQ(traj.size(), 4u);
  EXPECT_EQ(drawn.size(), 2u);
  for (const auto& t : traj) EXPECT_FALSE(t.goal.has_value());

  for (int te = 0; te <= 11; ++te) {
    for (int ts = 1; ts <= 4; ++ts) {
      drawn.clear();
      const auto tr = geaps_rollout(env::reset(spec), {te, ts}, s, spec, rng, &drawn);
      EXPECT_EQ(tr.size(), static_cast<std::size_t>(te));
      EXPECT_EQ(drawn.size(), static_cast<std::size_t>((te + ts - 1) / ts));
    }
  }
}

TEST(Explore, GeapsActionsFollowTheDrawnSkill) {
  // Skill 0 always moves Right, skill 1 always Up.
  skills::SkillSet s(2, 2, 1.0);
  for (int key = 0; key < skills::SkillSet::kObsKeys; ++key) {
    s.logits(key, 0)[1] = 100;
    s.logits(key, 1)[0] = 100;
  }
  const auto spec = open_spec(21, 50);
  Rng rng(2);
  std::vector<int> drawn;
  const auto traj = geaps_rollout(env::reset(spec), {8, 2}, s, spec, rng, &drawn);
  ASSERT_EQ(drawn.size(), 4u);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    EXPECT_EQ(traj[t].a, drawn[t / 2] == 0 ? env::Move::Right : env::Move::Up);
    if (t > 0) {
      EXPECT_EQ(traj[t].s, traj[t - 1].s_next);
    }
  }
}

TEST(Explore, TruncatedAtEpisodeHorizon) {
  const auto spec = open_spec(5, 10);
  const skills::SkillSet s(3, 2, 1.0);
  Rng rng(3);
  const auto start = env::state_at(spec, {2, 2}, 7);
  EXPECT_EQ(geaps_rollout(start, {40, 2}, s, spec, rng).size(), 3u);
  EXPECT_EQ(random_rollout(start, 40, spec, rng).size(), 3u);
  EXPECT_EQ(random_rollout(start, 2, spec, rng).size(), 2u);
  EXPECT_TRUE(random_rollout(env::state_at(spec, {2, 2}, 10), 5, spec, rng).empty());
  EXPECT_TRUE(random_rollout(start, 0, spec, rng).empty());
}

TEST(Explore, RandomActionsUniform) {
  const auto spec = open_spec(5, 100000);
  Rng rng(4);
  const auto traj = random_rollout(env::reset(spec), 100000, spec, rng);
  ASSERT_EQ(traj.size(), 100000u);
  std::array<int, 4> counts{};
  for (const auto& t : traj) {
    ++counts[static_cast<std::size_t>(t.a)];
    EXPECT_FALSE(t.goal.has_value());
  }
  double chi = 0;
  for (int c : counts) chi += (c - 25000.0) * (c - 25000.0) / 25000.0;
  EXPECT_LT(chi, 11.345);
}

TEST(Explore, Reproducible) {
  const auto spec = open_spec(7, 50);
  const auto s = trained_skills();
  Rng a(5), b(5);
  EXPECT_EQ(geaps_rollout(env::reset(spec), {30, 2}, s, spec, a), geaps_rollout(env::reset(spec), {30, 2}, s, spec, b));
  EXPECT_EQ(random_rollout(env::reset(spec), 30, spec, a), random_rollout(env::reset(spec), 30, spec, b));
}

TEST(Explore, DeployedSkillsMatchTrainingDisplacements) {
  // Single-segment rollouts from the centre of a large open maze, compared
  // with terminal displacements of the same skills from evaluate_skills.
  const auto s = trained_skills();
  const auto spec = open_spec(21, 50);
  const int n = 40000;
  Rng rng(6);
  std::map<std::pair<int, Cell>, double> deployed;
  for (int i = 0; i < n; ++i) {
    std::vector<int> drawn;
    const auto traj = geaps_rollout(env::reset(spec), {2, 2}, s, spec, rng, &drawn);
    const Cell d = skills::delta_bin(traj.back().s_next.position - traj.front().s.position, 1.0);
    deployed[{drawn[0], d}] += 1.0 / n;
  }
  const auto tables = skills::evaluate_skills(s, spec.maze, n, 7);
  std::map<std::pair<int, Cell>, double> trained;
  for (int z = 0; z < tables.num_skills(); ++z) {
    for (std::size_t c = 0; c < tables.bins().size(); ++c) {
      trained[{z, tables.bins()[c]}] = tables.count(z, static_cast<int>(c)) / n;
    }
  }
  double tv = 0;
  for (const auto& [k, p] : deployed) tv += std::abs(p - (trained.count(k) ? trained.at(k) : 0.0));
  for (const auto& [k, p] : trained) {
    if (!deployed.count(k)) tv += p;
  }
  EXPECT_LT(0.5 * tv, 0.02);
}
