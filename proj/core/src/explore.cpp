#include "geaps/explore.hpp"

#include <algorithm>

namespace geaps::explore {

Strategy parse_strategy(const std::string& name) {
  if (name == "geaps") return Strategy::Geaps;
  if (name == "random") return Strategy::Random;
  if (name == "none") return Strategy::None;
  throw InvalidParameter("unknown exploration strategy '" + name + "'");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Geaps:
      return "geaps";
    case Strategy::Random:
      return "random";
    case Strategy::None:
      return "none";
  }
  return "unknown";
}

void ExploreConfig::validate() const {
  if (horizon < 0) throw InvalidParameter("exploration horizon must be non-negative");
  if (skill_horizon < 1) throw InvalidParameter("skill horizon must be at least 1");
  if (horizon > 0 && skill_horizon >= horizon) {
    throw InvalidParameter("skill horizon must be shorter than the exploration horizon");
  }
}

namespace {

int budget(const env::EnvState& start, int horizon, const env::GAMDPSpec& spec) {
  return std::max(0, std::min(horizon, spec.horizon - start.step_index));
}

}  // namespace

agent::Trajectory geaps_rollout(const env::EnvState& start, const ExploreConfig& cfg,
                                const skills::SkillSet& skills, const env::GAMDPSpec& spec,
                                Rng& rng, std::vector<int>* drawn_skills) {
  if (cfg.skill_horizon < 1) throw InvalidParameter("skill horizon must be at least 1");
  const int steps = budget(start, cfg.horizon, spec);
  agent::Trajectory traj;
  traj.reserve(static_cast<std::size_t>(steps));
  env::EnvState s = start;
  int z = 0;
  for (int t = 0; t < steps; ++t) {
    if (t % cfg.skill_horizon == 0) {
      z = skills.sample_skill(rng);
      if (drawn_skills) drawn_skills->push_back(z);
    }
    const env::Move a = skills.sample_action(env::agent_obs(s, spec), z, rng);
    const env::EnvState next = env::step(s, a, spec);
    traj.push_back({s, a, next, std::nullopt});
    s = next;
  }
  return traj;
}

agent::Trajectory random_rollout(const env::EnvState& start, int horizon, const env::GAMDPSpec& spec,
                                 Rng& rng) {
  const int steps = budget(start, horizon, spec);
  agent::Trajectory traj;
  traj.reserve(static_cast<std::size_t>(steps));
  env::EnvState s = start;
  for (int t = 0; t < steps; ++t) {
    const auto a = static_cast<env::Move>(rng.uniform_index(env::kNumMoves));
    const env::EnvState next = env::step(s, a, spec);
    traj.push_back({s, a, next, std::nullopt});
    s = next;
  }
  return traj;
}

}  // namespace geaps::explore
