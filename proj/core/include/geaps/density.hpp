#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "geaps/common.hpp"

namespace geaps::density {

/// Floor applied before taking the log of a zero-probability bin.
inline constexpr double kProbabilityFloor = 1e-12;

enum class Kind { Histogram, Kde };

/// Per-dimension min-max scaling to [0, 1]. A dimension with zero range is
/// only shifted.
class GoalNormalizer {
 public:
  GoalNormalizer() = default;
  explicit GoalNormalizer(std::span<const Goal> goals);
  /// From known per-dimension extremes.
  GoalNormalizer(Vec2 lo, Vec2 hi);

  Goal apply(Goal g) const;
  std::vector<Goal> apply(std::span<const Goal> goals) const;

 private:
  Vec2 lo_{0.0, 0.0};
  Vec2 inv_range_{1.0, 1.0};
};

/// Achieved-goal density: a histogram over square bins or a Gaussian-kernel
/// KDE. Immutable once fitted; queries are safe to run concurrently.
class DensityModel {
 public:
  Kind kind() const { return kind_; }
  double bin_size() const { return scale_; }
  double bandwidth() const { return scale_; }
  std::size_t sample_count() const { return sample_count_; }

  /// Histogram: probability mass of the bin containing g.
  /// KDE: probability density at g (strictly positive).
  double density(Goal g) const;
  double log_density(Goal g) const;

  /// Histogram bin index of a goal.
  Cell bin_of(Goal g) const;
  /// Histogram counts per bin, ordered by bin.
  const std::map<Cell, std::size_t>& bin_counts() const { return counts_; }

  /// Map applied to samples and queries before kernel evaluation; null for
  /// models fitted in raw goal coordinates.
  const GoalNormalizer* input_map() const { return input_map_.get(); }

  /// Distinct KDE centres and their multiplicities.
  std::span<const Vec2> kde_points() const { return points_; }
  std::span<const double> kde_weights() const { return weights_; }

 private:
  friend DensityModel fit_histogram(std::span<const Goal>, double);
  friend DensityModel fit_kde(std::span<const Goal>, double);
  friend DensityModel fit_kde(std::span<const Goal>, double, const GoalNormalizer&);

  Kind kind_ = Kind::Histogram;
  double scale_ = 1.0;
  std::size_t sample_count_ = 0;
  std::map<Cell, std::size_t> counts_;
  std::vector<Vec2> points_;
  std::vector<double> weights_;
  double log_norm_ = 0.0;
  std::shared_ptr<const GoalNormalizer> input_map_;
};

/// Throws EmptyBuffer on empty input, InvalidParameter on bin_size <= 0.
DensityModel fit_histogram(std::span<const Goal> goals, double bin_size);

/// Throws EmptyBuffer on empty input, InvalidParameter on bandwidth <= 0.
DensityModel fit_kde(std::span<const Goal> goals, double bandwidth);

/// KDE fitted in the space of `input_map`: samples and later queries are
/// both mapped before kernel evaluation.
DensityModel fit_kde(std::span<const Goal> goals, double bandwidth, const GoalNormalizer& input_map);

/// KDE over at most `max_samples` goals drawn uniformly (with replacement)
/// from `goals` when the input is larger.
DensityModel fit_kde(std::span<const Goal> goals, double bandwidth, std::size_t max_samples,
                     Rng& rng);

/// Min-max normalizes goals using their extremes, then fits a KDE to at most
/// `max_samples` of them drawn uniformly with replacement.
DensityModel fit_kde_normalized(std::span<const Goal> goals, double bandwidth,
                                std::size_t max_samples, Rng& rng);

/// As above with the normalizer supplied by the caller, e.g. from extremes
/// tracked incrementally.
DensityModel fit_kde_normalized(std::span<const Goal> goals, double bandwidth,
                                std::size_t max_samples, Rng& rng, const GoalNormalizer& normalizer);

/// Finite log-density; histogram bins outside the support read as
/// log(kProbabilityFloor).
double log_density(const DensityModel& model, Goal g);

/// Entropy in nats. Histogram: Shannon entropy of the bin distribution.
/// KDE: minus the mean log-density over `eval_goals`. Throws EmptyBuffer when
/// `eval_goals` is empty.
double empirical_entropy(const DensityModel& model, std::span<const Goal> eval_goals);

struct SkewedWeights {
  std::vector<double> weights;
  double exponent = 0.0;
};

/// weight(g) proportional to density(g)^exponent over the buffered goals.
SkewedWeights skew_weights(const DensityModel& model, std::span<const Goal> buffer_goals,
                           double exponent);

}  // namespace geaps::density
