#include "geaps/density.hpp"

#include <algorithm>
#include <numbers>
#include <unordered_map>

namespace geaps::density {

Cell DensityModel::bin_of(Goal g) const {
  return {static_cast<int>(std::floor(g.x / scale_)), static_cast<int>(std::floor(g.y / scale_))};
}

double DensityModel::density(Goal g) const {
  if (kind_ == Kind::Histogram) {
    const auto it = counts_.find(bin_of(g));
    if (it == counts_.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(sample_count_);
  }
  return std::max(std::exp(log_density(g)), std::numeric_limits<double>::min());
}

double DensityModel::log_density(Goal g) const {
  if (kind_ == Kind::Histogram) {
    return std::log(std::max(density(g), kProbabilityFloor));
  }
  if (input_map_) g = input_map_->apply(g);
  const double inv_two_h2 = 1.0 / (2.0 * scale_ * scale_);
  // Running log-sum-exp over kernel terms.
  double m = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double dx = g.x - points_[i].x;
    const double dy = g.y - points_[i].y;
    const double term = std::log(weights_[i]) - (dx * dx + dy * dy) * inv_two_h2;
    if (term > m) {
      acc = acc * std::exp(m - term) + 1.0;
      m = term;
    } else {
      acc += std::exp(term - m);
    }
  }
  return log_norm_ + m + std::log(acc);
}

DensityModel fit_histogram(std::span<const Goal> goals, double bin_size) {
  if (goals.empty()) throw EmptyBuffer("fit_histogram: no goals");
  if (!(bin_size > 0.0)) throw InvalidParameter("fit_histogram: bin_size must be positive");
  DensityModel model;
  model.kind_ = Kind::Histogram;
  model.scale_ = bin_size;
  model.sample_count_ = goals.size();
  for (const Goal& g : goals) ++model.counts_[model.bin_of(g)];
  return model;
}

DensityModel fit_kde(std::span<const Goal> goals, double bandwidth) {
  if (goals.empty()) throw EmptyBuffer("fit_kde: no goals");
  if (!(bandwidth > 0.0)) throw InvalidParameter("fit_kde: bandwidth must be positive");
  DensityModel model;
  model.kind_ = Kind::Kde;
  model.scale_ = bandwidth;
  model.sample_count_ = goals.size();

  // Coincident samples share one kernel centre weighted by multiplicity.
  std::unordered_map<Vec2, double, Vec2Hash> multiplicity;
  for (const Vec2& p : goals) multiplicity[p] += 1.0;
  model.points_.reserve(multiplicity.size());
  for (const auto& [p, w] : multiplicity) model.points_.push_back(p);
  std::sort(model.points_.begin(), model.points_.end(),
            [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  model.weights_.reserve(model.points_.size());
  for (const Vec2& p : model.points_) model.weights_.push_back(multiplicity.at(p));
  model.log_norm_ = -std::log(static_cast<double>(goals.size()) * 2.0 * std::numbers::pi *
                              bandwidth * bandwidth);
  return model;
}

DensityModel fit_kde(std::span<const Goal> goals, double bandwidth, const GoalNormalizer& input_map) {
  const std::vector<Goal> mapped = input_map.apply(goals);
  DensityModel model = fit_kde(mapped, bandwidth);
  model.input_map_ = std::make_shared<const GoalNormalizer>(input_map);
  return model;
}

DensityModel fit_kde_normalized(std::span<const Goal> goals, double bandwidth,
                                std::size_t max_samples, Rng& rng) {
  if (goals.empty()) throw EmptyBuffer("fit_kde_normalized: no goals");
  return fit_kde_normalized(goals, bandwidth, max_samples, rng, GoalNormalizer(goals));
}

DensityModel fit_kde_normalized(std::span<const Goal> goals, double bandwidth,
                                std::size_t max_samples, Rng& rng, const GoalNormalizer& normalizer) {
  if (goals.empty()) throw EmptyBuffer("fit_kde_normalized: no goals");
  if (goals.size() <= max_samples) return fit_kde(goals, bandwidth, normalizer);
  std::vector<Goal> subsample;
  subsample.reserve(max_samples);
  for (std::size_t i = 0; i < max_samples; ++i) subsample.push_back(goals[rng.uniform_index(goals.size())]);
  return fit_kde(subsample, bandwidth, normalizer);
}

DensityModel fit_kde(std::span<const Goal> goals, double bandwidth, std::size_t max_samples,
                     Rng& rng) {
  if (goals.size() <= max_samples) return fit_kde(goals, bandwidth);
  std::vector<Goal> subsample;
  subsample.reserve(max_samples);
  for (std::size_t i = 0; i < max_samples; ++i) subsample.push_back(goals[rng.uniform_index(goals.size())]);
  return fit_kde(subsample, bandwidth);
}

double log_density(const DensityModel& model, Goal g) { return model.log_density(g); }

double empirical_entropy(const DensityModel& model, std::span<const Goal> eval_goals) {
  if (eval_goals.empty()) throw EmptyBuffer("empirical_entropy: empty evaluation set");
  if (model.kind() == Kind::Histogram) {
    // H = log N - (1/N) sum n_i log n_i
    const double n = static_cast<double>(model.sample_count());
    double acc = 0.0;
    for (const auto& [bin, count] : model.bin_counts()) {
      const double c = static_cast<double>(count);
      acc += c * std::log(c);
    }
    return std::log(n) - acc / n;
  }
  double total = 0.0;
  for (const Goal& g : eval_goals) total += model.log_density(g);
  return -total / static_cast<double>(eval_goals.size());
}

SkewedWeights skew_weights(const DensityModel& model, std::span<const Goal> buffer_goals,
                           double exponent) {
  if (buffer_goals.empty()) throw EmptyBuffer("skew_weights: empty buffer");
  SkewedWeights out;
  out.exponent = exponent;
  out.weights.resize(buffer_goals.size());
  for (std::size_t i = 0; i < buffer_goals.size(); ++i) {
    out.weights[i] = exponent == 0.0 ? 0.0 : exponent * model.log_density(buffer_goals[i]);
  }
  const double lz = log_sum_exp(out.weights);
  for (double& w : out.weights) w = std::exp(w - lz);
  return out;
}

GoalNormalizer::GoalNormalizer(std::span<const Goal> goals) {
  if (goals.empty()) return;
  Vec2 lo = goals.front();
  Vec2 hi = goals.front();
  for (const Goal& g : goals) {
    lo.x = std::min(lo.x, g.x);
    lo.y = std::min(lo.y, g.y);
    hi.x = std::max(hi.x, g.x);
    hi.y = std::max(hi.y, g.y);
  }
  lo_ = lo;
  inv_range_ = {hi.x > lo.x ? 1.0 / (hi.x - lo.x) : 1.0, hi.y > lo.y ? 1.0 / (hi.y - lo.y) : 1.0};
}

GoalNormalizer::GoalNormalizer(Vec2 lo, Vec2 hi)
    : lo_(lo), inv_range_{hi.x > lo.x ? 1.0 / (hi.x - lo.x) : 1.0, hi.y > lo.y ? 1.0 / (hi.y - lo.y) : 1.0} {}

Goal GoalNormalizer::apply(Goal g) const {
  return {(g.x - lo_.x) * inv_range_.x, (g.y - lo_.y) * inv_range_.y};
}

std::vector<Goal> GoalNormalizer::apply(std::span<const Goal> goals) const {
  std::vector<Goal> out;
  out.reserve(goals.size());
  for (const Goal& g : goals) out.push_back(apply(g));
  return out;
}

}  // namespace geaps::density
