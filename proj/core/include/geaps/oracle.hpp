#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "geaps/agent.hpp"
#include "geaps/common.hpp"
#include "geaps/env.hpp"

namespace geaps::oracle {

/// Raised when a trajectory enumeration would exceed its guard.
class EnumerationLimit : public Error {
 public:
  using Error::Error;
};

/// Raised by substitute_patterns when the library has no match.
class UnmatchedPattern : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kEnumerationGuard = 10'000'000;

using ActionDistribution = std::array<double, env::kNumMoves>;
using Policy = std::function<ActionDistribution(const env::EnvState&)>;
using GoalDistribution = std::map<Cell, double>;

Policy uniform_policy();

/// Shannon entropy in nats; zero-probability atoms contribute nothing.
double shannon_entropy(std::span<const double> p);
double shannon_entropy(const GoalDistribution& p);

struct EnumeratedTrajectory {
  agent::Trajectory steps;
  double probability = 0.0;
};

struct TrajectorySet {
  std::vector<EnumeratedTrajectory> trajectories;
  int horizon = 0;

  double total_probability() const;
};

/// Every positive-probability trajectory of `horizon` steps under `policy`.
/// Throws EnumerationLimit past `guard` trajectories and InvalidParameter for
/// a continuous maze or a horizon that overruns the episode.
TrajectorySet enumerate_trajectories(const env::GAMDPSpec& spec, const env::EnvState& start,
                                     int horizon, const Policy& policy,
                                     std::size_t guard = kEnumerationGuard);

/// Exact exploration goal distribution: the (1/T) visit frequency of the
/// achieved goals of the T post-initial states, averaged over trajectories.
GoalDistribution enumerate_pe(const env::GAMDPSpec& spec, const env::EnvState& start, int horizon,
                              const Policy& policy, std::size_t guard = kEnumerationGuard);

/// Same quantity estimated from `samples` rollouts.
GoalDistribution monte_carlo_pe(const env::GAMDPSpec& spec, const env::EnvState& start, int horizon,
                                const Policy& policy, std::size_t samples, Rng& rng);

double total_variation(const GoalDistribution& a, const GoalDistribution& b);

struct MixtureCheck {
  double lhs = 0.0;  // H(c p1 + (1 - c) p2)
  double rhs = 0.0;  // c H(p1) + (1 - c) H(p2)
  bool holds = false;
};

/// Throws InvalidParameter for mismatched supports, negative or
/// non-normalized entries, or c outside [0, 1].
MixtureCheck entropy_mixture_check(std::span<const double> p1, std::span<const double> p2, double c,
                                   double tolerance = 1e-12);

struct GoalTransitionPattern {
  env::AgentObs agent_start;
  env::AgentObs agent_end;
  Vec2 delta_g;
  std::vector<env::Move> actions;

  std::size_t cardinality() const { return actions.size(); }
  friend bool operator==(const GoalTransitionPattern&, const GoalTransitionPattern&) = default;
};

/// Splits the achieved-goal sequence g_0..g_T at the first index of every
/// maximal constant segment, appends T, and emits one pattern per
/// consecutive index pair. Throws InvalidParameter on an empty trajectory.
std::vector<GoalTransitionPattern> decompose_trajectory(const agent::Trajectory& traj,
                                                        const env::GAMDPSpec& spec);

/// Concatenated actions of a plan.
std::vector<env::Move> concat_actions(std::span<const GoalTransitionPattern> plan);

/// Achieved goals visited when replaying `actions` from `start`, including
/// the start.
std::vector<Goal> replay_goals(const env::EnvState& start, std::span<const env::Move> actions,
                               const env::GAMDPSpec& spec);

struct Substitution {
  std::vector<GoalTransitionPattern> plan;
  std::size_t total_steps = 0;
};

/// Replaces each pattern by the library pattern of least cardinality with the
/// same (agent_start, agent_end, delta_g); earlier library entries win ties.
Substitution substitute_patterns(std::span<const GoalTransitionPattern> decomposition,
                                 std::span<const GoalTransitionPattern> library);

/// All patterns of all decompositions.
std::vector<GoalTransitionPattern> extract_library(std::span<const agent::Trajectory> trajectories,
                                                   const env::GAMDPSpec& spec);

struct ClusterEquivalence {
  double mi_cluster = 0.0;           // I(Z; G)
  double cond_entropy_cluster = 0.0; // H(G | Z)
  double mi_trajectory = 0.0;        // I(Omega; G)
  double cond_entropy_trajectory = 0.0;
  double goal_entropy = 0.0;         // H(G)
  bool sums_equal = false;
};

/// Per-trajectory goal distribution: visit counts of the post-initial states
/// divided by the trajectory length.
GoalDistribution trajectory_goal_distribution(const agent::Trajectory& traj);

/// `clustering[i]` is the cluster of trajectory i, in [0, num_clusters).
/// Throws InvalidParameter when a cluster id is out of range or a cluster
/// carries no probability mass.
ClusterEquivalence cluster_equivalence(const TrajectorySet& ts, std::span<const int> clustering,
                                       int num_clusters, double tolerance = 1e-9);

/// Double-sum I(X; Y) of a joint table (rows x columns) that sums to one.
double mutual_information_bruteforce(const std::vector<std::vector<double>>& joint);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest error or slack deficit seen
  std::string note;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool passed() const;
  std::string to_json() const;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  int mixture_cases = 1000;
  int roundtrip_cases = 1000;
  int clustering_cases = 100;
  int substitution_mazes = 20;
  std::size_t monte_carlo_samples = 100000;
};

/// 3x1 corridor starting in the middle; with `block_left` a wall separates
/// the left and middle cells.
env::GAMDPSpec corridor_fixture(bool block_left);

/// Policy choosing Left or Right with probability 1/2 each.
Policy left_right_policy();

VerificationReport run_verification_suite(const SuiteOptions& options = {});

}  // namespace geaps::oracle
