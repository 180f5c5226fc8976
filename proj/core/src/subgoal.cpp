#include "geaps/subgoal.hpp"

#include <algorithm>
#include <unordered_map>

namespace geaps::subgoal {

Strategy parse_strategy(const std::string& name) {
  if (name == "mega") return Strategy::Mega;
  if (name == "omega") return Strategy::Omega;
  if (name == "skewfit") return Strategy::SkewFit;
  if (name == "goid") return Strategy::Goid;
  if (name == "uniform") return Strategy::Uniform;
  throw InvalidParameter("unknown sub-goal strategy '" + name + "'");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Mega:
      return "mega";
    case Strategy::Omega:
      return "omega";
    case Strategy::SkewFit:
      return "skewfit";
    case Strategy::Goid:
      return "goid";
    case Strategy::Uniform:
      return "uniform";
  }
  return "unknown";
}

namespace {

std::vector<Goal> draw_candidates(std::span<const Goal> buffer_goals, Rng& rng,
                                  std::size_t max_candidates) {
  if (buffer_goals.size() <= max_candidates) return {buffer_goals.begin(), buffer_goals.end()};
  std::vector<Goal> out;
  out.reserve(max_candidates);
  for (std::size_t i = 0; i < max_candidates; ++i) {
    out.push_back(buffer_goals[rng.uniform_index(buffer_goals.size())]);
  }
  return out;
}

/// Log-densities of the candidates; repeated goals are evaluated once.
std::vector<double> candidate_log_densities(std::span<const Goal> candidates,
                                            const density::DensityModel& model) {
  std::unordered_map<Vec2, double, Vec2Hash> cache;
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const Goal& g : candidates) {
    auto it = cache.find(g);
    if (it == cache.end()) it = cache.emplace(g, model.log_density(g)).first;
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

Goal mega_select(std::span<const Goal> buffer_goals, const density::DensityModel& model, Rng& rng,
                 std::size_t max_candidates) {
  if (buffer_goals.empty()) throw EmptyBuffer("mega_select: empty buffer");
  const std::vector<Goal> candidates = draw_candidates(buffer_goals, rng, max_candidates);
  const std::vector<double> logp = candidate_log_densities(candidates, model);
  const double lowest = *std::min_element(logp.begin(), logp.end());
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < logp.size(); ++i) {
    if (logp[i] <= lowest + 1e-12) ties.push_back(i);
  }
  return candidates[ties[rng.uniform_index(ties.size())]];
}

double omega_alpha(double kl_estimate, double b) {
  const double kl = std::max(kl_estimate, 0.0);
  return 1.0 / std::max(b + kl, 1.0);
}

double estimate_kl(std::span<const Goal> desired_samples,
                   const density::DensityModel& achieved_model, double bandwidth) {
  if (desired_samples.empty()) throw EmptyBuffer("estimate_kl: no desired samples");
  const density::DensityModel desired_model =
      achieved_model.input_map() != nullptr
          ? density::fit_kde(desired_samples, bandwidth, *achieved_model.input_map())
          : density::fit_kde(desired_samples, bandwidth);
  double total = 0.0;
  for (const Goal& g : desired_samples) {
    total += desired_model.log_density(g) - achieved_model.log_density(g);
  }
  return std::max(total / static_cast<double>(desired_samples.size()), 0.0);
}

Goal omega_select(const OmegaParams& params, const GoalSampler& desired_sampler,
                  std::span<const Goal> buffer_goals, const density::DensityModel& model,
                  Rng& rng, std::size_t max_candidates) {
  if (params.alpha >= 1.0) return desired_sampler(rng);
  if (params.alpha <= 0.0) return mega_select(buffer_goals, model, rng, max_candidates);
  if (rng.bernoulli(params.alpha)) return desired_sampler(rng);
  return mega_select(buffer_goals, model, rng, max_candidates);
}

Goal skewfit_select(std::span<const Goal> buffer_goals, const density::DensityModel& model,
                    double exponent, Rng& rng, std::size_t max_candidates) {
  if (buffer_goals.empty()) throw EmptyBuffer("skewfit_select: empty buffer");
  const std::vector<Goal> candidates = draw_candidates(buffer_goals, rng, max_candidates);
  if (exponent == 0.0) return candidates[rng.uniform_index(candidates.size())];
  std::vector<double> logw = candidate_log_densities(candidates, model);
  for (double& w : logw) w *= exponent;
  const double lz = log_sum_exp(logw);
  for (double& w : logw) w = std::exp(w - lz);
  return candidates[rng.categorical(logw)];
}

SuccessTable::SuccessTable(std::size_t window, double bin_size)
    : window_(std::max<std::size_t>(window, 1)), bin_size_(bin_size) {
  if (!(bin_size > 0.0)) throw InvalidParameter("SuccessTable: bin_size must be positive");
}

Cell SuccessTable::bin_of(Goal g) const {
  return {static_cast<int>(std::floor(g.x / bin_size_)), static_cast<int>(std::floor(g.y / bin_size_))};
}

void SuccessTable::record(Goal goal, bool success) {
  const Cell bin = bin_of(goal);
  history_.push_back({bin, goal, success});
  Entry& e = bins_[bin];
  e.bin = bin;
  e.goal = goal;
  ++e.attempts;
  if (success) ++e.successes;
  if (history_.size() > window_) {
    const Outcome old = history_.front();
    history_.pop_front();
    Entry& o = bins_[old.bin];
    --o.attempts;
    if (old.success) --o.successes;
    if (o.attempts == 0) bins_.erase(old.bin);
  }
}

std::vector<SuccessTable::Entry> SuccessTable::entries() const {
  std::vector<Entry> out;
  out.reserve(bins_.size());
  for (const auto& [bin, e] : bins_) out.push_back(e);
  return out;
}

Goal goid_select(const SuccessTable& table, double r_min, double r_max, Rng& rng) {
  const auto entries = table.entries();
  if (entries.empty()) throw EmptyBuffer("goid_select: no attempted goals");
  std::vector<std::size_t> goid;
  std::vector<double> weights;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double r = entries[i].estimate();
    if (r >= r_min && r <= r_max) {
      goid.push_back(i);
      weights.push_back((0.5 - std::abs(r - 0.5)) + 0.01);
    }
  }
  if (!goid.empty()) return entries[goid[rng.categorical(weights)]].goal;

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> closest;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double d = std::abs(entries[i].estimate() - 0.5);
    if (d < best - 1e-15) {
      best = d;
      closest.assign(1, i);
    } else if (std::abs(d - best) <= 1e-15) {
      closest.push_back(i);
    }
  }
  return entries[closest[rng.uniform_index(closest.size())]].goal;
}

Goal uniform_select(std::span<const Goal> buffer_goals, Rng& rng) {
  if (buffer_goals.empty()) throw EmptyBuffer("uniform_select: empty buffer");
  return buffer_goals[rng.uniform_index(buffer_goals.size())];
}

}  // namespace geaps::subgoal
