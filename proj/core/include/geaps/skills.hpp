#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "geaps/common.hpp"
#include "geaps/env.hpp"

namespace geaps::skills {

/// Floor inside the log of the coverage reward.
inline constexpr double kRewardFloor = 1e-6;

/// Bin of a goal displacement: floor(delta / bin_size) per dimension.
Cell delta_bin(Vec2 delta, double bin_size);

/// K latent skills sharing one softmax policy over (agent observation,
/// skill) with a uniform prior p(z).
class SkillSet {
 public:
  static constexpr int kObsKeys = 16;  // one per 4-bit wall mask

  SkillSet(int num_skills, int skill_horizon, double delta_bin_size);

  int num_skills() const { return num_skills_; }
  int skill_horizon() const { return skill_horizon_; }
  double delta_bin_size() const { return delta_bin_size_; }
  std::span<const double> prior() const { return prior_; }

  std::array<double, env::kNumMoves> action_probabilities(const env::AgentObs& obs, int z) const;
  env::Move sample_action(const env::AgentObs& obs, int z, Rng& rng) const;
  int sample_skill(Rng& rng) const;

  /// Logits for (obs key, skill); the key is the wall mask.
  std::span<double, env::kNumMoves> logits(int obs_key, int z);
  std::span<const double, env::kNumMoves> logits(int obs_key, int z) const;

  std::string to_json() const;
  static SkillSet from_json(const std::string& text);

  friend bool operator==(const SkillSet&, const SkillSet&) = default;

 private:
  int num_skills_;
  int skill_horizon_;
  double delta_bin_size_;
  std::vector<double> prior_;
  std::vector<double> logits_;  // [obs_key][z][action]
};

/// One skill rollout outcome: the skill and the binned goal displacement.
struct Outcome {
  int z = 0;
  Cell bin;
};

/// Smoothed Monte Carlo posteriors over (skill, displacement bin). Columns are
/// the observed bins in ascending order plus a trailing catch-all column for
/// bins never observed.
class PosteriorTables {
 public:
  PosteriorTables(int num_skills, std::vector<Cell> bins, std::vector<double> counts, double smoothing);

  int num_skills() const { return num_skills_; }
  /// Number of columns, including the catch-all.
  int num_columns() const { return static_cast<int>(bins_.size()) + 1; }
  std::span<const Cell> bins() const { return bins_; }
  double smoothing() const { return smoothing_; }

  /// Column index of a bin; the catch-all column for unseen bins.
  int column(Cell bin) const;
  double count(int z, int col) const { return counts_[index(z, col)]; }

  double joint(int z, int col) const;  // q(z, g)
  double q_z(int z) const;
  double q_g(int col) const;
  double q_z_given_g(int z, Cell bin) const;
  double q_g_given_z(Cell bin, int z) const;
  double q_z_given_col(int z, int col) const;
  double q_col_given_z(int col, int z) const;
  double max_q_g_given_z(int z) const;

 private:
  std::size_t index(int z, int col) const {
    return static_cast<std::size_t>(z) * static_cast<std::size_t>(num_columns()) +
           static_cast<std::size_t>(col);
  }

  int num_skills_;
  std::vector<Cell> bins_;
  std::vector<double> counts_;  // raw counts [z][col]
  double smoothing_;
  std::vector<double> row_totals_;  // smoothed, per z
  std::vector<double> col_totals_;  // smoothed, per col
  double total_ = 0.0;
};

/// q(z|g) and q(g|z) from counts plus additive smoothing. Throws EmptyBuffer
/// for no outcomes and InvalidParameter for smoothing <= 0 or a skill index
/// outside [0, num_skills).
PosteriorTables estimate_posteriors(std::span<const Outcome> rollouts, int num_skills,
                                    double smoothing);

/// [log q(z|now) - log p(z)] + beta * log(max_g q(g|z) - q(next|z) + floor).
double pseudo_reward(const PosteriorTables& tables, int z, Cell delta_now, Cell delta_next,
                     double beta, double prior_z);

struct InformationTerms {
  double mutual_information = 0.0;  // I(Z; dG)
  double goal_entropy = 0.0;        // H(dG)
  double conditional_entropy = 0.0; // H(dG | Z)
};

/// Exact terms of the smoothed joint, in nats.
InformationTerms mutual_information(const PosteriorTables& tables);

struct TrainConfig {
  int num_skills = 4;
  int skill_horizon = 2;
  int iterations = 300;
  double beta = 0.1;
  std::uint64_t seed = 0;
  int episodes_per_iteration = 100;
  double step_size = 0.05;
  double smoothing = 0.1;
  std::size_t posterior_window = 5000;
  double delta_bin_size = 1.0;
};

/// Called after every posterior refresh.
using TrainObserver = std::function<void(int iteration, const PosteriorTables& tables)>;

/// Alternates rollouts from the central cell of a uniformly drawn suite maze,
/// a posterior refresh over the most recent outcomes, and one vanilla
/// policy-gradient step on the per-step pseudo rewards with a mean-return
/// baseline. Deterministic given the seed.
SkillSet train_skills(std::span<const env::MazeSpec> suite, const TrainConfig& config,
                      const TrainObserver& observer = {});

/// Fresh rollouts of a skill set from the maze start cell; returns the
/// posterior tables of the terminal displacement bins.
PosteriorTables evaluate_skills(const SkillSet& skills, const env::MazeSpec& maze, int episodes,
                                std::uint64_t seed, double smoothing = 0.1);

}  // namespace geaps::skills
