#pragma once

#include <deque>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "geaps/common.hpp"
#include "geaps/density.hpp"

namespace geaps::subgoal {

/// Candidate cap for density-ranked selection; matches the KDE fit size.
inline constexpr std::size_t kMaxCandidates = 10000;

enum class Strategy { Mega, Omega, SkewFit, Goid, Uniform };

Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

using GoalSampler = std::function<Goal(Rng&)>;

/// Buffered goal of minimal estimated density. When the buffer holds more
/// than `max_candidates` goals, candidates are drawn uniformly with
/// replacement. Ties are broken uniformly. Throws EmptyBuffer.
Goal mega_select(std::span<const Goal> buffer_goals, const density::DensityModel& model, Rng& rng,
                 std::size_t max_candidates = kMaxCandidates);

struct OmegaParams {
  double b = -3.0;
  double alpha = 1.0;
};

/// 1 / max(b + KL, 1), with the KL estimate clamped at zero.
double omega_alpha(double kl_estimate, double b);

/// Monte Carlo estimate of KL(p_dg || p_ag): mean of log p_dg - log p_ag over
/// `desired_samples`, where p_dg is a KDE of the samples fitted in the same
/// input space as `achieved_model`. Clamped at zero.
double estimate_kl(std::span<const Goal> desired_samples,
                   const density::DensityModel& achieved_model, double bandwidth);

/// A desired-goal sample with probability alpha, otherwise mega_select.
Goal omega_select(const OmegaParams& params, const GoalSampler& desired_sampler,
                  std::span<const Goal> buffer_goals, const density::DensityModel& model,
                  Rng& rng, std::size_t max_candidates = kMaxCandidates);

/// Samples a buffered goal with probability proportional to
/// density^exponent (sampling importance resampling over the candidates).
Goal skewfit_select(std::span<const Goal> buffer_goals, const density::DensityModel& model,
                    double exponent, Rng& rng, std::size_t max_candidates = kMaxCandidates);

/// Per-goal-bin pursuit outcomes over a sliding window of recent
/// trajectories.
class SuccessTable {
 public:
  struct Entry {
    Cell bin;
    Goal goal;  ///< most recently recorded goal in the bin
    std::size_t attempts = 0;
    std::size_t successes = 0;
    double estimate() const {
      return attempts == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(attempts);
    }
  };

  explicit SuccessTable(std::size_t window = 200, double bin_size = 1.0);

  void record(Goal goal, bool success);
  /// Bins with at least one attempt inside the window, ordered by bin.
  std::vector<Entry> entries() const;
  std::size_t window() const { return window_; }
  std::size_t size() const { return history_.size(); }

 private:
  struct Outcome {
    Cell bin;
    Goal goal;
    bool success;
  };
  Cell bin_of(Goal g) const;

  std::size_t window_;
  double bin_size_;
  std::deque<Outcome> history_;
  std::map<Cell, Entry> bins_;
};

/// Goal of intermediate difficulty: among bins whose success estimate lies
/// in [r_min, r_max], samples with weight (0.5 - |R - 0.5|) + 0.01. When that
/// set is empty, returns the bin whose estimate is closest to 0.5. Throws
/// EmptyBuffer when no bin has been attempted.
Goal goid_select(const SuccessTable& table, double r_min, double r_max, Rng& rng);

/// Uniform draw over the buffered goals.
Goal uniform_select(std::span<const Goal> buffer_goals, Rng& rng);

}  // namespace geaps::subgoal
