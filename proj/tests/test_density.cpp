#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "geaps/density.hpp"
#include "geaps/oracle.hpp"

using namespace geaps;
using namespace geaps::density;

namespace {
double sum_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }
}  // namespace

TEST(Density, HistogramCounting) {
  const std::vector<Goal> goals{{0, 0}, {0, 0}, {1, 1}, {2, 2}};
  const auto m = fit_histogram(goals, 1.0);
  EXPECT_EQ(m.kind(), Kind::Histogram);
  EXPECT_EQ(m.sample_count(), 4u);
  EXPECT_DOUBLE_EQ(m.density({0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(m.density({1, 1}), 0.25);
  EXPECT_DOUBLE_EQ(m.density({2.5, 2.9}), 0.25);
  EXPECT_DOUBLE_EQ(m.density({5, 5}), 0.0);
  EXPECT_NEAR(log_density(m, {0, 0}), std::log(0.5), 1e-15);
  EXPECT_NEAR(log_density(m, {9, 9}), std::log(1e-12), 1e-12);
}

TEST(Density, HistogramPointMass) {
  const std::vector<Goal> goals{{3, 1}};
  const auto m = fit_histogram(goals, 1.0);
  EXPECT_DOUBLE_EQ(m.density({3, 1}), 1.0);
  EXPECT_DOUBLE_EQ(empirical_entropy(m, goals), 0.0);
}

TEST(Density, HistogramNormalizesOnRandomInputs) {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Goal> goals(1 + rng.uniform_index(40));
    for (auto& g : goals) g = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double bin = rng.uniform(0.2, 2.0);
    const auto m = fit_histogram(goals, bin);
    double total = 0.0;
    for (const auto& [cell, count] : m.bin_counts()) {
      total += m.density({(cell.x + 0.5) * bin, (cell.y + 0.5) * bin});
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Density, HistogramEntropyMatchesShannon) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Goal> goals(1 + rng.uniform_index(60));
    for (auto& g : goals) g = {static_cast<double>(rng.uniform_index(5)), static_cast<double>(rng.uniform_index(5))};
    const auto m = fit_histogram(goals, 1.0);
    std::vector<double> p;
    for (const auto& [cell, count] : m.bin_counts()) p.push_back(static_cast<double>(count) / goals.size());
    EXPECT_NEAR(empirical_entropy(m, goals), oracle::shannon_entropy(p), 1e-12);
  }
}

TEST(Density, UniformFourBinsEntropy) {
  const std::vector<Goal> goals{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  EXPECT_NEAR(empirical_entropy(fit_histogram(goals, 1.0), goals), std::log(4.0), 1e-12);
}

TEST(Density, Errors) {
  const std::vector<Goal> none;
  const std::vector<Goal> one{{0, 0}};
  EXPECT_THROW(fit_histogram(none, 1.0), EmptyBuffer);
  EXPECT_THROW(fit_kde(none, 0.1), EmptyBuffer);
  EXPECT_THROW(fit_histogram(one, 0.0), InvalidParameter);
  EXPECT_THROW(fit_kde(one, -1.0), InvalidParameter);
  EXPECT_THROW(empirical_entropy(fit_kde(one, 0.1), none), EmptyBuffer);
  EXPECT_THROW(skew_weights(fit_kde(one, 0.1), none, -1.0), EmptyBuffer);
}

TEST(Density, KdeSingleSamplePeak) {
  const std::vector<Goal> goals{{0, 0}};
  const auto m = fit_kde(goals, 0.1);
  EXPECT_EQ(m.kind(), Kind::Kde);
  const double expected = 1.0 / (2.0 * std::numbers::pi * 0.01);
  EXPECT_NEAR(m.density({0, 0}), expected, 1e-9);
  EXPECT_NEAR(expected, 15.9155, 1e-4);
  EXPECT_NEAR(log_density(m, {0, 0}), 2.7673, 1e-4);
}

TEST(Density, KdeSymmetricPairAndPositivity) {
  const std::vector<Goal> goals{{-1, 0}, {1, 0}};
  const auto m = fit_kde(goals, 0.3);
  EXPECT_NEAR(m.density({-1, 0}), m.density({1, 0}), 1e-15);
  EXPECT_GT(m.density({40, 40}), 0.0);
  EXPECT_TRUE(std::isfinite(log_density(m, {1e3, 1e3})));
}

TEST(Density, KdeIntegratesToOne) {
  const std::vector<Goal> goals{{0, 0}, {0.3, 0.1}, {-0.2, 0.4}};
  const auto m = fit_kde(goals, 0.1);
  const double lo = -1.5, hi = 1.5;
  const int n = 301;
  const double h = (hi - lo) / (n - 1);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      total += wi * wj * m.density({lo + i * h, lo + j * h});
    }
  }
  EXPECT_NEAR(total * h * h, 1.0, 0.01);
}

TEST(Density, KdeUniformSquareEntropyNearZero) {
  Rng rng(3);
  std::vector<Goal> goals(10000);
  for (auto& g : goals) g = {rng.uniform01(), rng.uniform01()};
  const auto m = fit_kde(goals, 0.1);
  // Kernel mass leaking past the square's edges biases the estimate upward.
  const double h = empirical_entropy(m, goals);
  EXPECT_GT(h, 0.0);
  EXPECT_LT(h, 0.25);
}

TEST(Density, KdeTranslationEquivariant) {
  Rng rng(4);
  std::vector<Goal> goals(30), shifted(30);
  const Vec2 off{3.25, -1.5};
  for (std::size_t i = 0; i < goals.size(); ++i) {
    goals[i] = {rng.uniform(0, 2), rng.uniform(0, 2)};
    shifted[i] = goals[i] + off;
  }
  const auto a = fit_kde(goals, 0.2);
  const auto b = fit_kde(shifted, 0.2);
  for (int k = 0; k < 50; ++k) {
    const Goal q{rng.uniform(-1, 3), rng.uniform(-1, 3)};
    EXPECT_NEAR(a.density(q), b.density(q + off), 1e-12);
  }
}

TEST(Density, KdeMergesCoincidentPoints) {
  const std::vector<Goal> goals{{1, 1}, {1, 1}, {2, 2}};
  const auto m = fit_kde(goals, 0.5);
  ASSERT_EQ(m.kde_points().size(), 2u);
  EXPECT_EQ(m.sample_count(), 3u);
  EXPECT_DOUBLE_EQ(m.kde_weights()[0] + m.kde_weights()[1], 3.0);
}

TEST(Density, NormalizedKdeUsesExtremes) {
  const std::vector<Goal> goals{{0, 0}, {10, 4}, {5, 2}};
  Rng rng(5);
  const auto m = fit_kde_normalized(goals, 0.1, 10000, rng);
  ASSERT_NE(m.input_map(), nullptr);
  const Goal mid = m.input_map()->apply(Goal{5, 2});
  EXPECT_NEAR(mid.x, 0.5, 1e-12);
  EXPECT_NEAR(mid.y, 0.5, 1e-12);
  // Same answer as a raw fit on pre-normalized goals.
  const GoalNormalizer norm(goals);
  const auto raw = fit_kde(norm.apply(goals), 0.1);
  EXPECT_NEAR(m.density({10, 4}), raw.density({1, 1}), 1e-12);
}

TEST(Density, NormalizerConstantDimensionIsShifted) {
  const std::vector<Goal> goals{{2, 7}, {4, 7}};
  const GoalNormalizer norm(goals);
  EXPECT_EQ(norm.apply(Goal{3, 7}), (Goal{0.5, 0.0}));
  const GoalNormalizer explicit_norm(Vec2{2, 7}, Vec2{4, 7});
  EXPECT_EQ(explicit_norm.apply(Goal{3, 7}), (Goal{0.5, 0.0}));
}

TEST(Density, SubsampledKdeCapsSamples) {
  std::vector<Goal> goals(500);
  for (std::size_t i = 0; i < goals.size(); ++i) goals[i] = {static_cast<double>(i), 0.0};
  Rng rng(6);
  EXPECT_EQ(fit_kde(goals, 0.1, 100, rng).sample_count(), 100u);
  EXPECT_EQ(fit_kde(goals, 0.1, 1000, rng).sample_count(), 500u);
}

TEST(Density, SkewWeightsExamples) {
  const std::vector<Goal> samples{{0, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}};
  const auto m = fit_histogram(samples, 1.0);
  const std::vector<Goal> buffer{{0, 0}, {1, 0}};
  const auto w = skew_weights(m, buffer, -1.0);
  ASSERT_EQ(w.weights.size(), 2u);
  EXPECT_NEAR(w.weights[0], 0.8, 1e-12);
  EXPECT_NEAR(w.weights[1], 0.2, 1e-12);
  EXPECT_DOUBLE_EQ(w.exponent, -1.0);
  const auto u = skew_weights(m, buffer, 0.0);
  EXPECT_NEAR(u.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(u.weights[1], 0.5, 1e-12);
}

TEST(Density, SkewWeightsNormalizedAndOrderReversing) {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Goal> goals(2 + rng.uniform_index(30));
    for (auto& g : goals) g = {rng.uniform(0, 3), rng.uniform(0, 3)};
    const bool use_kde = rng.bernoulli(0.5);
    const auto m = use_kde ? fit_kde(goals, 0.3) : fit_histogram(goals, 1.0);
    const double exponent = rng.uniform(-4, 2);
    const auto w = skew_weights(m, goals, exponent);
    EXPECT_NEAR(sum_of(w.weights), 1.0, 1e-12);
    for (double x : w.weights) EXPECT_GE(x, 0.0);
    if (exponent < 0) {
      for (std::size_t i = 0; i + 1 < goals.size(); ++i) {
        if (m.density(goals[i]) < m.density(goals[i + 1])) {
          EXPECT_GE(w.weights[i], w.weights[i + 1] * (1 - 1e-12));
        }
      }
    }
  }
}
