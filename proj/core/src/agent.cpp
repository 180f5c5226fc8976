#include "geaps/agent.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace geaps::agent {

QTable::QTable(const env::MazeSpec& maze, double learning_rate, double discount)
    : width_(maze.width),
      height_(maze.height),
      learning_rate_(learning_rate),
      discount_(discount),
      values_(static_cast<std::size_t>(maze.num_cells()) * static_cast<std::size_t>(maze.num_cells()) *
                  env::kNumMoves,
              0.0) {
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) {
    throw InvalidParameter("learning rate must lie in [0, 1]");
  }
  if (!(discount > 0.0 && discount < 1.0)) throw InvalidParameter("discount must lie in (0, 1)");
}

double QTable::value(Goal state, Goal goal, Move a) const { return values_[index(state, goal, a)]; }

std::array<double, env::kNumMoves> QTable::row(Goal state, Goal goal) const {
  const std::size_t base = index(state, goal, Move::Up);
  return {values_[base], values_[base + 1], values_[base + 2], values_[base + 3]};
}

double QTable::max_value(Goal state, Goal goal) const {
  const auto r = row(state, goal);
  return *std::max_element(r.begin(), r.end());
}

void QTable::set(Goal state, Goal goal, Move a, double v) { values_[index(state, goal, a)] = v; }

Move act(const QTable& q, const env::EnvState& state, Goal goal, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidParameter("epsilon must lie in [0, 1]");
  if (epsilon > 0.0 && rng.bernoulli(epsilon)) {
    return static_cast<Move>(rng.uniform_index(env::kNumMoves));
  }
  const auto r = q.row(state.position, goal);
  const double best = *std::max_element(r.begin(), r.end());
  std::array<int, env::kNumMoves> ties{};
  std::size_t n = 0;
  for (int a = 0; a < env::kNumMoves; ++a) {
    if (r[static_cast<std::size_t>(a)] == best) ties[n++] = a;
  }
  return static_cast<Move>(ties[n == 1 ? 0 : rng.uniform_index(n)]);
}

// --- replay buffer -------------------------------------------------------------

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidParameter("replay buffer capacity must be positive");
}

void ReplayBuffer::add_trajectory(Trajectory trajectory) {
  if (trajectory.empty()) return;
  if (trajectory.size() > capacity_) {
    throw InvalidParameter("trajectory longer than the replay buffer capacity");
  }
  while (size_ + trajectory.size() > capacity_) {
    const std::size_t n = trajectories_.front().size();
    trajectories_.pop_front();
    starts_.pop_front();
    size_ -= n;
    first_global_ += n;
    achieved_head_ += n;
    ++first_trajectory_;
  }
  if (achieved_head_ > 4096 && achieved_head_ * 2 > achieved_.size()) {
    const auto head = static_cast<std::ptrdiff_t>(achieved_head_);
    achieved_.erase(achieved_.begin(), achieved_.begin() + head);
    owner_.erase(owner_.begin(), owner_.begin() + head);
    achieved_head_ = 0;
  }
  const std::size_t serial = first_trajectory_ + trajectories_.size();
  for (const Transition& t : trajectory) {
    achieved_.push_back(env::achieved_goal(t.s_next));
    owner_.push_back(serial);
  }
  starts_.push_back(first_global_ + size_);
  size_ += trajectory.size();
  trajectories_.push_back(std::move(trajectory));
}

std::span<const Goal> ReplayBuffer::achieved_goals() const {
  return std::span<const Goal>(achieved_).subspan(achieved_head_, size_);
}

ReplayBuffer::Location ReplayBuffer::locate(std::size_t i) const {
  if (i >= size_) throw InvalidParameter("replay buffer index out of range");
  const std::size_t global = first_global_ + i;
  const std::size_t t = owner_[achieved_head_ + i] - first_trajectory_;
  return {&trajectories_[t], global - starts_[t]};
}

std::vector<TransitionRef> sample_batch(const ReplayBuffer& buffer, std::size_t n, Rng& rng) {
  if (buffer.empty()) throw EmptyBuffer("sample_batch: empty replay buffer");
  if (n == 0) throw InvalidParameter("sample_batch: batch size must be at least 1");
  std::vector<TransitionRef> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto loc = buffer.locate(rng.uniform_index(buffer.size()));
    out.push_back({loc.trajectory, loc.index});
  }
  return out;
}

void GoalPool::push(Goal g) {
  goals_.push_back(g);
  while (goals_.size() > cap_) goals_.pop_front();
}

// --- relabelling ---------------------------------------------------------------

RelabelRatios RelabelRatios::parse(const std::string& spec) {
  std::istringstream in(spec);
  std::string token;
  std::vector<std::string> parts;
  while (std::getline(in, token, '_')) parts.push_back(token);
  if (parts.size() != kNumRelabelCategories + 1 || parts[0] != "rfaab") {
    throw InvalidParameter("relabel strategy must look like rfaab_1_4_3_1_1, got '" + spec + "'");
  }
  RelabelRatios r;
  double total = 0.0;
  for (int i = 0; i < kNumRelabelCategories; ++i) {
    const std::string& p = parts[static_cast<std::size_t>(i + 1)];
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != p.size() || !(v >= 0.0)) {
      throw InvalidParameter("relabel ratio '" + p + "' is not a non-negative number");
    }
    r.weights[static_cast<std::size_t>(i)] = v;
    total += v;
  }
  if (!(total > 0.0)) throw InvalidParameter("relabel ratios must not all be zero");
  return r;
}

std::string RelabelRatios::to_string() const {
  std::ostringstream out;
  out << "rfaab";
  for (double w : weights) out << '_' << w;
  return out.str();
}

std::vector<LabelledTransition> relabel(std::span<const TransitionRef> batch,
                                        const RelabelRatios& ratios, const RelabelSources& sources,
                                        Rng& rng) {
  std::vector<LabelledTransition> out;
  out.reserve(batch.size());
  for (const TransitionRef& ref : batch) {
    const Transition& t = ref.get();
    const Goal own = env::achieved_goal(t.s_next);
    auto category = static_cast<RelabelCategory>(rng.categorical(ratios.weights));
    if (category == RelabelCategory::Real && !t.goal) category = RelabelCategory::Achieved;

    LabelledTransition lt{&t, own, category};
    auto fallback = [&] {
      if (t.goal) {
        lt.goal = *t.goal;
        lt.category = RelabelCategory::Real;
      } else {
        lt.goal = own;
        lt.category = RelabelCategory::Achieved;
      }
    };
    switch (category) {
      case RelabelCategory::Real:
        lt.goal = *t.goal;
        break;
      case RelabelCategory::Future: {
        const std::size_t len = ref.trajectory->size();
        if (ref.index + 1 < len) {
          const std::size_t k = ref.index + 1 + rng.uniform_index(len - ref.index - 1);
          lt.goal = env::achieved_goal((*ref.trajectory)[k].s_next);
        } else {
          lt.goal = own;
        }
        break;
      }
      case RelabelCategory::Actual:
        if (sources.actual && !sources.actual->empty()) {
          lt.goal = sources.actual->sample(rng);
        } else {
          fallback();
        }
        break;
      case RelabelCategory::Achieved:
        if (!sources.achieved.empty()) {
          lt.goal = sources.achieved[rng.uniform_index(sources.achieved.size())];
        } else {
          fallback();
        }
        break;
      case RelabelCategory::Behavioral:
        if (sources.behavioral && !sources.behavioral->empty()) {
          lt.goal = sources.behavioral->sample(rng);
        } else {
          fallback();
        }
        break;
    }
    out.push_back(lt);
  }
  return out;
}

void q_update(QTable& q, std::span<const LabelledTransition> batch, const GoalPredicate& reached) {
  const double lr = q.learning_rate();
  if (lr == 0.0) return;
  const double gamma = q.discount();
  [[maybe_unused]] const double upper = 1.0 / (1.0 - gamma);
  for (const LabelledTransition& lt : batch) {
    const Transition& t = *lt.transition;
    const Goal achieved = env::achieved_goal(t.s_next);
    const bool done = reached(achieved, lt.goal);
    const double target = done ? 1.0 : gamma * q.max_value(t.s_next.position, lt.goal);
    const double old = q.value(t.s.position, lt.goal, t.a);
    const double updated = old + lr * (target - old);
    assert(updated >= 0.0 && updated <= upper);
    q.set(t.s.position, lt.goal, t.a, updated);
  }
}

}  // namespace geaps::agent
