#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "geaps/density.hpp"
#include "geaps/subgoal.hpp"

using namespace geaps;
using namespace geaps::subgoal;

namespace {

// Upper 1% points of the chi-square distribution.
double chi2_crit_01(int df) {
  switch (df) {
    case 1: return 6.635;
    case 3: return 11.345;
    case 9: return 21.666;
    default: return 1e300;
  }
}

double chi2_uniform(const std::vector<int>& counts) {
  double n = 0;
  for (int c : counts) n += c;
  const double e = n / static_cast<double>(counts.size());
  double s = 0;
  for (int c : counts) s += (c - e) * (c - e) / e;
  return s;
}

std::vector<Goal> line_goals(int n) {
  std::vector<Goal> g;
  for (int i = 0; i < n; ++i) g.push_back({static_cast<double>(i), 0.0});
  return g;
}

}  // namespace

TEST(Subgoal, StrategyNames) {
  for (auto s : {Strategy::Mega, Strategy::Omega, Strategy::SkewFit, Strategy::Goid, Strategy::Uniform}) {
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  }
  EXPECT_THROW(parse_strategy("bogus"), InvalidParameter);
}

TEST(Subgoal, MegaPicksArgmin) {
  // A has density 0.9, B 0.1.
  std::vector<Goal> samples(9, Goal{0, 0});
  samples.push_back({1, 0});
  const auto m = density::fit_histogram(samples, 1.0);
  const std::vector<Goal> buffer{{0, 0}, {1, 0}};
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(mega_select(buffer, m, rng), (Goal{1, 0}));
}

TEST(Subgoal, MegaIsMinimalOnFullScan) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Goal> buffer(5 + rng.uniform_index(50));
    for (auto& g : buffer) g = {rng.uniform(0, 4), rng.uniform(0, 4)};
    const auto m = density::fit_kde(buffer, 0.3);
    const Goal g = mega_select(buffer, m, rng);
    for (const auto& b : buffer) EXPECT_LE(m.log_density(g), m.log_density(b) + 1e-12);
  }
}

TEST(Subgoal, MegaTiesAreUniform) {
  const auto buffer = line_goals(10);
  const auto m = density::fit_histogram(buffer, 1.0);
  Rng rng(3);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 10000; ++i) ++counts[static_cast<std::size_t>(mega_select(buffer, m, rng).x)];
  EXPECT_LT(chi2_uniform(counts), chi2_crit_01(9));
}

TEST(Subgoal, MegaSubsampledStaysInLowestPercentile) {
  // 1,000 cells with counts 1..40 expanded into a 20,000+ goal buffer.
  Rng rng(4);
  std::vector<Goal> buffer;
  for (int c = 0; c < 1000; ++c) {
    const int count = 1 + static_cast<int>(rng.uniform_index(40));
    for (int k = 0; k < count; ++k) buffer.push_back({static_cast<double>(c % 40), static_cast<double>(c / 40)});
  }
  ASSERT_GT(buffer.size(), kMaxCandidates);
  const auto m = density::fit_histogram(buffer, 1.0);
  std::vector<double> dens;
  for (const auto& g : buffer) dens.push_back(m.density(g));
  std::sort(dens.begin(), dens.end());
  const double q01 = dens[dens.size() / 100];
  for (int i = 0; i < 20; ++i) EXPECT_LE(m.density(mega_select(buffer, m, rng)), q01);
}

TEST(Subgoal, MegaEmptyBuffer) {
  const std::vector<Goal> one{{0, 0}};
  const auto m = density::fit_histogram(one, 1.0);
  Rng rng(0);
  EXPECT_THROW(mega_select(std::span<const Goal>{}, m, rng), EmptyBuffer);
  EXPECT_THROW(skewfit_select(std::span<const Goal>{}, m, -1, rng), EmptyBuffer);
  EXPECT_THROW(uniform_select(std::span<const Goal>{}, rng), EmptyBuffer);
}

TEST(Subgoal, OmegaAlphaExamples) {
  EXPECT_DOUBLE_EQ(omega_alpha(0.0, -3.0), 1.0);
  EXPECT_DOUBLE_EQ(omega_alpha(6.0, -3.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(omega_alpha(10.0, -3.0), 1.0 / 7.0);
  EXPECT_DOUBLE_EQ(omega_alpha(-5.0, -3.0), 1.0);
  double prev = 1.0;
  for (double kl = 0; kl < 50; kl += 0.25) {
    const double a = omega_alpha(kl, -3.0);
    EXPECT_GT(a, 0.0);
    EXPECT_LE(a, prev);
    prev = a;
  }
}

TEST(Subgoal, OmegaMixture) {
  const auto buffer = line_goals(5);
  const auto m = density::fit_histogram(std::vector<Goal>{{0, 0}, {0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, 1.0);
  const Goal desired{-100, -100};
  const GoalSampler sampler = [&](Rng&) { return desired; };
  Rng rng(5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(omega_select({-3, 1.0}, sampler, buffer, m, rng), desired);

  Rng a(6), b(6);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(omega_select({-3, 0.0}, sampler, buffer, m, a), mega_select(buffer, m, b));
  }

  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += omega_select({-3, 0.3}, sampler, buffer, m, rng) == desired;
  EXPECT_NEAR(hits / 10000.0, 0.3, 0.02);
}

TEST(Subgoal, KlEstimate) {
  Rng rng(7);
  std::vector<Goal> a(400), far(400);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = {rng.uniform01(), rng.uniform01()};
    far[i] = {rng.uniform(5, 6), rng.uniform(5, 6)};
  }
  const auto model = density::fit_kde(a, 0.1);
  EXPECT_GE(estimate_kl(a, model, 0.1), 0.0);
  EXPECT_LT(estimate_kl(a, model, 0.1), 0.05);
  EXPECT_GT(estimate_kl(far, model, 0.1), 100.0);
  EXPECT_THROW(estimate_kl(std::span<const Goal>{}, model, 0.1), EmptyBuffer);
}

TEST(Subgoal, SkewfitExponentZeroIsUniform) {
  const auto buffer = line_goals(4);
  const auto m = density::fit_histogram(std::vector<Goal>{{0, 0}, {0, 0}, {0, 0}, {1, 0}, {2, 0}, {3, 0}}, 1.0);
  Rng rng(8);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 10000; ++i) ++counts[static_cast<std::size_t>(skewfit_select(buffer, m, 0.0, rng).x)];
  EXPECT_LT(chi2_uniform(counts), chi2_crit_01(3));
}

TEST(Subgoal, SkewfitTwoGoalFrequencies) {
  const auto m = density::fit_histogram(std::vector<Goal>{{0, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}}, 1.0);
  const std::vector<Goal> buffer{{0, 0}, {1, 0}};
  Rng rng(9);
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += skewfit_select(buffer, m, -1.0, rng) == Goal{0, 0};
  EXPECT_NEAR(first / 10000.0, 0.8, 0.02);
}

TEST(Subgoal, SkewfitOversamplesLowDensity) {
  // 100 distinct goals with counts 1..100.
  std::vector<Goal> samples;
  for (int i = 0; i < 100; ++i) {
    for (int k = 0; k <= i; ++k) samples.push_back({static_cast<double>(i), 0.0});
  }
  const auto m = density::fit_histogram(samples, 1.0);
  const auto buffer = line_goals(100);
  Rng rng(10);
  int low = 0;
  for (int i = 0; i < 10000; ++i) low += skewfit_select(buffer, m, -2.5, rng).x < 10;
  EXPECT_GT(low / 10000.0, 0.5);
}

TEST(Subgoal, SuccessTableWindow) {
  SuccessTable t(3);
  t.record({0, 0}, true);
  t.record({0.4, 0.2}, false);
  t.record({1, 0}, true);
  auto e = t.entries();
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].attempts, 2u);
  EXPECT_EQ(e[0].successes, 1u);
  EXPECT_EQ(e[0].goal, (Goal{0.4, 0.2}));
  t.record({2, 0}, false);  // evicts the first (0,0) success
  e = t.entries();
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].attempts, 1u);
  EXPECT_EQ(e[0].successes, 0u);
  EXPECT_EQ(t.size(), 3u);
  for (const auto& x : e) {
    EXPECT_LE(x.successes, x.attempts);
    EXPECT_GE(x.estimate(), 0.0);
    EXPECT_LE(x.estimate(), 1.0);
  }
  EXPECT_THROW(SuccessTable(3, 0.0), InvalidParameter);
}

namespace {
void record_rate(SuccessTable& t, Goal g, int successes, int attempts) {
  for (int i = 0; i < attempts; ++i) t.record(g, i < successes);
}
}  // namespace

TEST(Subgoal, GoidSelectsIntermediate) {
  SuccessTable t(200);
  record_rate(t, {0, 0}, 1, 10);
  record_rate(t, {1, 0}, 5, 10);
  record_rate(t, {2, 0}, 9, 10);
  Rng rng(11);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(goid_select(t, 0.25, 0.75, rng), (Goal{1, 0}));
}

TEST(Subgoal, GoidFallback) {
  SuccessTable t(200);
  record_rate(t, {3, 3}, 1, 20);
  Rng rng(12);
  EXPECT_EQ(goid_select(t, 0.25, 0.75, rng), (Goal{3, 3}));
  record_rate(t, {4, 4}, 0, 20);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(goid_select(t, 0.25, 0.75, rng), (Goal{3, 3}));
  SuccessTable empty;
  EXPECT_THROW(goid_select(empty, 0.25, 0.75, rng), EmptyBuffer);
}

TEST(Subgoal, GoidFrequencyOrdering) {
  SuccessTable t(200);
  record_rate(t, {0, 0}, 3, 10);
  record_rate(t, {1, 0}, 5, 10);
  record_rate(t, {2, 0}, 7, 10);
  record_rate(t, {3, 0}, 0, 10);
  Rng rng(13);
  std::map<double, int> freq;
  for (int i = 0; i < 10000; ++i) ++freq[goid_select(t, 0.25, 0.75, rng).x];
  EXPECT_EQ(freq.count(3.0), 0u);
  EXPECT_GT(freq[1.0], freq[0.0]);
  EXPECT_GT(freq[1.0], freq[2.0]);
}

TEST(Subgoal, SelectorsDeterministicGivenStream) {
  const auto buffer = line_goals(30);
  const auto m = density::fit_kde(buffer, 0.5);
  Rng a(14), b(14);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(skewfit_select(buffer, m, -2.5, a), skewfit_select(buffer, m, -2.5, b));
    EXPECT_EQ(uniform_select(buffer, a), uniform_select(buffer, b));
  }
}
