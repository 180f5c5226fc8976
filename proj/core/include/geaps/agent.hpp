#pragma once

#include <array>
#include <cassert>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geaps/common.hpp"
#include "geaps/env.hpp"

namespace geaps::agent {

using env::Move;

/// One environment step. `goal` is empty for goal-independent exploration.
struct Transition {
  env::EnvState s;
  Move a = Move::Up;
  env::EnvState s_next;
  std::optional<Goal> goal;

  friend bool operator==(const Transition&, const Transition&) = default;
};

using Trajectory = std::vector<Transition>;

/// Tabular goal-conditioned action values keyed by (state cell, goal cell,
/// action). Unvisited entries read as zero.
class QTable {
 public:
  QTable(const env::MazeSpec& maze, double learning_rate, double discount);

  double learning_rate() const { return learning_rate_; }
  double discount() const { return discount_; }
  int width() const { return width_; }
  int height() const { return height_; }

  double value(Goal state, Goal goal, Move a) const;
  std::array<double, env::kNumMoves> row(Goal state, Goal goal) const;
  double max_value(Goal state, Goal goal) const;
  void set(Goal state, Goal goal, Move a, double v);

  std::span<const double> raw() const { return values_; }
  std::span<double> raw() { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t index(Goal state, Goal goal, Move a) const {
    const Cell s = cell_of(state);
    const Cell g = cell_of(goal);
    const auto cells = static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    const auto si = static_cast<std::size_t>(s.y * width_ + s.x);
    const auto gi = static_cast<std::size_t>(g.y * width_ + g.x);
    assert(si < cells && gi < cells);
    return (si * cells + gi) * env::kNumMoves + static_cast<std::size_t>(a);
  }

  int width_;
  int height_;
  double learning_rate_;
  double discount_;
  std::vector<double> values_;
};

/// Epsilon-greedy action; greedy ties are broken uniformly.
Move act(const QTable& q, const env::EnvState& state, Goal goal, double epsilon, Rng& rng);

/// Transitions grouped by trajectory. Eviction drops whole trajectories,
/// oldest first, so stored transitions always keep their context.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  /// Throws InvalidParameter when the trajectory alone exceeds capacity.
  void add_trajectory(Trajectory trajectory);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return size_ == 0; }
  std::size_t trajectory_count() const { return trajectories_.size(); }
  const Trajectory& trajectory(std::size_t i) const { return trajectories_[i]; }

  /// achieved_goals()[i] is the achieved goal of the i-th stored transition's
  /// next state.
  std::span<const Goal> achieved_goals() const;

  struct Location {
    const Trajectory* trajectory = nullptr;
    std::size_t index = 0;
  };
  Location locate(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t first_global_ = 0;  // global index of the oldest stored transition
  std::deque<Trajectory> trajectories_;
  std::deque<std::size_t> starts_;  // global index of each trajectory's first transition
  std::size_t first_trajectory_ = 0;  // serial number of trajectories_.front()
  std::vector<Goal> achieved_;
  std::vector<std::size_t> owner_;  // trajectory serial number, parallel to achieved_
  std::size_t achieved_head_ = 0;
};

/// A sampled transition plus the trajectory it belongs to. Valid until the
/// buffer is next modified.
struct TransitionRef {
  const Trajectory* trajectory = nullptr;
  std::size_t index = 0;
  const Transition& get() const { return (*trajectory)[index]; }
};

/// n transitions drawn uniformly with replacement. Throws EmptyBuffer on an
/// empty buffer and InvalidParameter when n == 0.
std::vector<TransitionRef> sample_batch(const ReplayBuffer& buffer, std::size_t n, Rng& rng);

/// FIFO pool of historical goals with a fixed cap.
class GoalPool {
 public:
  explicit GoalPool(std::size_t cap = 50000) : cap_(cap) {}
  void push(Goal g);
  std::size_t size() const { return goals_.size(); }
  bool empty() const { return goals_.empty(); }
  Goal sample(Rng& rng) const { return goals_[rng.uniform_index(goals_.size())]; }

 private:
  std::size_t cap_;
  std::deque<Goal> goals_;
};

enum class RelabelCategory : std::uint8_t { Real = 0, Future, Actual, Achieved, Behavioral };
inline constexpr int kNumRelabelCategories = 5;

/// Relative weights of (real, future, actual, achieved, behavioral).
struct RelabelRatios {
  std::array<double, kNumRelabelCategories> weights{1, 0, 0, 0, 0};

  /// Parses "rfaab_<real>_<future>_<actual>_<achieved>_<behavioral>".
  static RelabelRatios parse(const std::string& spec);
  std::string to_string() const;
};

struct LabelledTransition {
  const Transition* transition = nullptr;
  Goal goal;
  RelabelCategory category = RelabelCategory::Real;
};

/// Historical goal sources for relabelling.
struct RelabelSources {
  std::span<const Goal> achieved;
  const GoalPool* actual = nullptr;
  const GoalPool* behavioral = nullptr;
};

/// Assigns each transition a goal by a category drawn from `ratios`.
/// Exploration transitions drawing `real` use `achieved` instead. An empty
/// historical pool falls back to the original goal, or to the transition's
/// own achieved goal when it has none; `category` records what was applied.
std::vector<LabelledTransition> relabel(std::span<const TransitionRef> batch,
                                        const RelabelRatios& ratios, const RelabelSources& sources,
                                        Rng& rng);

using GoalPredicate = std::function<bool(Goal achieved, Goal goal)>;

/// One-step Q-learning over the batch, in order: reward 1 when the next
/// state's achieved goal satisfies the predicate (no bootstrap), else 0 plus
/// the discounted greedy value of the next state.
void q_update(QTable& q, std::span<const LabelledTransition> batch, const GoalPredicate& reached);

}  // namespace geaps::agent
