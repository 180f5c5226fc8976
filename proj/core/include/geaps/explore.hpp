#pragma once

#include <string>
#include <vector>

#include "geaps/agent.hpp"
#include "geaps/common.hpp"
#include "geaps/env.hpp"
#include "geaps/skills.hpp"

namespace geaps::explore {

enum class Strategy { Geaps, Random, None };

Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

struct ExploreConfig {
  int horizon = 0;        ///< exploration budget T^e
  int skill_horizon = 2;  ///< steps per skill T^s

  /// Throws InvalidParameter unless T^s >= 1 and (T^e == 0 or T^s < T^e).
  void validate() const;
};

/// Skill-switching exploration: a skill is drawn from the uniform prior
/// whenever t mod T^s == 0 and actions follow pi_Z(obs, z). Returns
/// min(T^e, horizon - step_index) transitions, all with an empty goal. When
/// `drawn_skills` is given, each draw is appended to it.
agent::Trajectory geaps_rollout(const env::EnvState& start, const ExploreConfig& cfg,
                                const skills::SkillSet& skills, const env::GAMDPSpec& spec,
                                Rng& rng, std::vector<int>* drawn_skills = nullptr);

/// Uniform-random-action exploration with the same length contract.
agent::Trajectory random_rollout(const env::EnvState& start, int horizon, const env::GAMDPSpec& spec,
                                 Rng& rng);

}  // namespace geaps::explore
