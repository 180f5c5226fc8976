#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geaps/agent.hpp"
#include "geaps/common.hpp"
#include "geaps/env.hpp"
#include "geaps/explore.hpp"
#include "geaps/skills.hpp"
#include "geaps/subgoal.hpp"

namespace geaps::runner {

/// Raised for malformed or unknown configuration entries.
class ConfigError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

struct ExperimentConfig {
  // env
  std::string maze_file;  ///< plain-text maze; overrides the generator keys
  std::uint64_t maze_seed = 7;
  int maze_width = 10;
  int maze_height = 10;
  double maze_loop_prob = 0.1;
  int horizon = 50;
  bool continuous = false;

  // subgoal
  subgoal::Strategy subgoal = subgoal::Strategy::Mega;
  std::string density = "kde";  ///< kde | histogram
  double bandwidth = 0.1;
  std::size_t density_samples = 10000;
  double omega_b = -3.0;
  std::size_t omega_kl_samples = 256;
  double skew_exponent = -2.5;
  double goid_min = 0.25;
  double goid_max = 0.75;
  std::size_t goid_window = 200;
  double goid_discovery = 0.2;

  // explore
  explore::Strategy explore = explore::Strategy::Geaps;
  int skill_horizon = 2;
  std::string skills_file;  ///< empty: pre-train in process
  bool explore_on_timeout = false;
  std::uint64_t pretrain_seed = 0;
  int pretrain_iterations = 300;

  // agent
  double lr = 0.5;
  double gamma = 0.98;
  double epsilon = 0.1;
  std::string relabel = "rfaab_1_4_3_1_1";
  std::size_t batch_size = 256;
  int updates_per_step = 1;
  std::size_t buffer_capacity = 1000000;

  // run
  std::int64_t total_steps = 300000;
  std::int64_t eval_every = 5000;
  int eval_episodes = 100;
  std::uint64_t seed = 0;

  /// Throws ConfigError for out-of-range values or missing artifacts.
  void validate() const;
};

/// Sets one dotted key from its textual value. Throws ConfigError for an
/// unknown key or an unparsable value.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// `key = value` lines; `#` starts a comment; values may be double-quoted.
/// Unknown or repeated keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical `key = value` text of every key.
std::string to_text(const ExperimentConfig& cfg);

/// All recognized keys, in canonical order.
std::vector<std::string> config_keys();

/// (|B| + T^c) / (|B| + T^c + T^e). Throws InvalidParameter on a negative
/// input or a zero denominator.
double mixture_coefficient(std::int64_t buffer_size, std::int64_t t_c, std::int64_t t_e);

struct IterationRecord {
  int iteration = 0;
  Goal subgoal;
  int pursuit_steps = 0;
  int explore_steps = 0;
  bool goal_reached = false;
  double c = 1.0;
  double entropy_now = 0.0;  ///< filled at eval points
  std::optional<double> success_eval;
  /// H(c p_ag + (1 - c) p_e) - [c H(p_ag) + (1 - c) H(p_e)] on histograms.
  double mixture_slack = 0.0;
  bool mixture_holds = true;
};

/// One logged evaluation point.
struct MetricsRecord {
  std::int64_t step = 0;
  IterationRecord last;
  double success = 0.0;
  double entropy = 0.0;
  std::size_t mixture_checks = 0;
  std::size_t mixture_violations = 0;
};

/// The training loop state: maze, learner, buffer, selector statistics and
/// the exploration policy.
class Experiment {
 public:
  /// `skills` may be null unless the exploration strategy is geaps.
  Experiment(const ExperimentConfig& cfg, std::shared_ptr<const skills::SkillSet> skills);

  /// One pursuit/exploration iteration using at most `max_steps` steps,
  /// followed by one update batch per step taken.
  IterationRecord run_iteration(int max_steps);

  /// Greedy success rate over the configured number of episodes.
  double evaluate();
  /// Shannon entropy of the buffered achieved goals (unit histogram).
  double achieved_entropy() const;

  std::int64_t total_steps() const { return total_steps_; }
  int iteration() const { return iteration_; }
  const agent::ReplayBuffer& buffer() const { return buffer_; }
  const agent::QTable& q() const { return q_; }
  const env::GAMDPSpec& spec() const { return spec_; }
  const ExperimentConfig& config() const { return cfg_; }
  std::size_t mixture_checks() const { return mixture_checks_; }
  std::size_t mixture_violations() const { return mixture_violations_; }
  /// Visit counts of every achieved goal so far, per cell.
  const std::vector<std::int64_t>& coverage() const { return coverage_; }

 private:
  Goal select_subgoal();
  Goal desired_sample(Rng& rng) const;
  void update(std::size_t steps);

  ExperimentConfig cfg_;
  env::GAMDPSpec spec_;
  std::shared_ptr<const skills::SkillSet> skills_;
  agent::QTable q_;
  agent::ReplayBuffer buffer_;
  agent::RelabelRatios ratios_;
  agent::GoalPool actual_pool_;
  agent::GoalPool behavioral_pool_;
  subgoal::SuccessTable success_table_;
  Rng select_rng_;
  Rng act_rng_;
  Rng explore_rng_;
  Rng update_rng_;
  Rng eval_rng_;
  std::vector<std::int64_t> buffer_counts_;  // per cell, over buffered achieved goals
  std::vector<std::int64_t> coverage_;
  Vec2 goal_lo_{};  // extremes of the buffered achieved goals
  Vec2 goal_hi_{};
  std::int64_t total_steps_ = 0;
  int iteration_ = 0;
  std::size_t mixture_checks_ = 0;
  std::size_t mixture_violations_ = 0;
};

struct ExperimentResult {
  std::vector<MetricsRecord> metrics;
  std::vector<std::int64_t> coverage;
  env::MazeSpec maze;
  std::int64_t total_steps = 0;
  std::int64_t pursuit_steps = 0;
  std::int64_t explore_steps = 0;
  std::size_t mixture_checks = 0;
  std::size_t mixture_violations = 0;

  /// Step of the first eval point with success 1, if any.
  std::optional<std::int64_t> steps_to_full_success() const;
  double final_success() const;
  double final_entropy() const;
};

/// The maze described by the configuration.
env::MazeSpec build_maze(const ExperimentConfig& cfg);

/// Skills for a config: loaded from `skills_file` or pre-trained in process
/// on the default suite. Null when exploration is not geaps.
std::shared_ptr<const skills::SkillSet> resolve_skills(const ExperimentConfig& cfg);

/// Runs iterations until total_steps is consumed (the last episode is
/// truncated to fit), evaluating every eval_every steps and at the end.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::shared_ptr<const skills::SkillSet> skills = nullptr);

/// Pre-training suite used by `pretrain` and in-process skill resolution.
struct PretrainConfig {
  std::uint64_t suite_seed = 0;
  int suite_count = 8;
  int maze_size = 5;
  skills::TrainConfig train;
};
skills::SkillSet pretrain(const PretrainConfig& cfg);

}  // namespace geaps::runner
