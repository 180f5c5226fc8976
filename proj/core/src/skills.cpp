#include "geaps/skills.hpp"

#include <algorithm>
#include <deque>
#include "json.hpp"

namespace geaps::skills {

Cell delta_bin(Vec2 delta, double bin_size) {
  // The small epsilon keeps exact multiples (1.0 / 0.2 = 4.999...) in their bin.
  const double eps = 1e-9;
  return {static_cast<int>(std::floor(delta.x / bin_size + eps)),
          static_cast<int>(std::floor(delta.y / bin_size + eps))};
}

// --- SkillSet --------------------------------------------------------------------

SkillSet::SkillSet(int num_skills, int skill_horizon, double delta_bin_size)
    : num_skills_(num_skills), skill_horizon_(skill_horizon), delta_bin_size_(delta_bin_size) {
  if (num_skills < 1) throw InvalidParameter("skill set needs at least one skill");
  if (skill_horizon < 1) throw InvalidParameter("skill horizon must be at least 1");
  if (!(delta_bin_size > 0.0)) throw InvalidParameter("delta bin size must be positive");
  prior_.assign(static_cast<std::size_t>(num_skills), 1.0 / num_skills);
  logits_.assign(static_cast<std::size_t>(kObsKeys * num_skills * env::kNumMoves), 0.0);
}

std::span<double, env::kNumMoves> SkillSet::logits(int obs_key, int z) {
  const auto off = static_cast<std::size_t>((obs_key * num_skills_ + z) * env::kNumMoves);
  return std::span<double, env::kNumMoves>(logits_.data() + off, env::kNumMoves);
}

std::span<const double, env::kNumMoves> SkillSet::logits(int obs_key, int z) const {
  const auto off = static_cast<std::size_t>((obs_key * num_skills_ + z) * env::kNumMoves);
  return std::span<const double, env::kNumMoves>(logits_.data() + off, env::kNumMoves);
}

std::array<double, env::kNumMoves> SkillSet::action_probabilities(const env::AgentObs& obs,
                                                                  int z) const {
  const auto l = logits(obs.wall_mask & 0xF, z);
  const double m = *std::max_element(l.begin(), l.end());
  std::array<double, env::kNumMoves> p{};
  double total = 0.0;
  for (int a = 0; a < env::kNumMoves; ++a) {
    p[static_cast<std::size_t>(a)] = std::exp(l[static_cast<std::size_t>(a)] - m);
    total += p[static_cast<std::size_t>(a)];
  }
  for (double& v : p) v /= total;
  return p;
}

env::Move SkillSet::sample_action(const env::AgentObs& obs, int z, Rng& rng) const {
  const auto p = action_probabilities(obs, z);
  return static_cast<env::Move>(rng.categorical(p));
}

int SkillSet::sample_skill(Rng& rng) const { return static_cast<int>(rng.categorical(prior_)); }

std::string SkillSet::to_json() const {
  nlohmann::json j;
  j["format"] = "geaps-skills";
  j["version"] = 1;
  j["num_skills"] = num_skills_;
  j["skill_horizon"] = skill_horizon_;
  j["delta_bin_size"] = delta_bin_size_;
  j["prior"] = prior_;
  j["obs_keys"] = kObsKeys;
  j["logits"] = logits_;
  return j.dump(1);
}

SkillSet SkillSet::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("skill artifact is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != "geaps-skills") throw InvalidParameter("not a skill artifact");
  if (j.value("version", 0) != 1) throw InvalidParameter("unsupported skill artifact version");
  try {
    SkillSet s(j.at("num_skills").get<int>(), j.at("skill_horizon").get<int>(),
               j.at("delta_bin_size").get<double>());
    auto prior = j.at("prior").get<std::vector<double>>();
    auto logits = j.at("logits").get<std::vector<double>>();
    if (j.at("obs_keys").get<int>() != kObsKeys || prior.size() != s.prior_.size() ||
        logits.size() != s.logits_.size()) {
      throw InvalidParameter("skill artifact tables have the wrong shape");
    }
    s.prior_ = std::move(prior);
    s.logits_ = std::move(logits);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed skill artifact: ") + e.what());
  }
}

// --- posteriors ------------------------------------------------------------------

PosteriorTables::PosteriorTables(int num_skills, std::vector<Cell> bins, std::vector<double> counts,
                                 double smoothing)
    : num_skills_(num_skills), bins_(std::move(bins)), counts_(std::move(counts)), smoothing_(smoothing) {
  const int cols = num_columns();
  if (counts_.size() != static_cast<std::size_t>(num_skills_ * cols)) {
    throw InvalidParameter("posterior count table has the wrong shape");
  }
  row_totals_.assign(static_cast<std::size_t>(num_skills_), 0.0);
  col_totals_.assign(static_cast<std::size_t>(cols), 0.0);
  for (int z = 0; z < num_skills_; ++z) {
    for (int c = 0; c < cols; ++c) {
      const double m = counts_[index(z, c)] + smoothing_;
      row_totals_[static_cast<std::size_t>(z)] += m;
      col_totals_[static_cast<std::size_t>(c)] += m;
      total_ += m;
    }
  }
}

int PosteriorTables::column(Cell bin) const {
  const auto it = std::lower_bound(bins_.begin(), bins_.end(), bin);
  if (it != bins_.end() && *it == bin) return static_cast<int>(it - bins_.begin());
  return static_cast<int>(bins_.size());
}

double PosteriorTables::joint(int z, int col) const {
  return (counts_[index(z, col)] + smoothing_) / total_;
}

double PosteriorTables::q_z(int z) const { return row_totals_[static_cast<std::size_t>(z)] / total_; }

double PosteriorTables::q_g(int col) const { return col_totals_[static_cast<std::size_t>(col)] / total_; }

double PosteriorTables::q_z_given_col(int z, int col) const {
  return (counts_[index(z, col)] + smoothing_) / col_totals_[static_cast<std::size_t>(col)];
}

double PosteriorTables::q_col_given_z(int col, int z) const {
  return (counts_[index(z, col)] + smoothing_) / row_totals_[static_cast<std::size_t>(z)];
}

double PosteriorTables::q_z_given_g(int z, Cell bin) const { return q_z_given_col(z, column(bin)); }

double PosteriorTables::q_g_given_z(Cell bin, int z) const { return q_col_given_z(column(bin), z); }

double PosteriorTables::max_q_g_given_z(int z) const {
  double best = 0.0;
  for (int c = 0; c < num_columns(); ++c) best = std::max(best, q_col_given_z(c, z));
  return best;
}

PosteriorTables estimate_posteriors(std::span<const Outcome> rollouts, int num_skills,
                                    double smoothing) {
  if (rollouts.empty()) throw EmptyBuffer("estimate_posteriors: no rollouts");
  if (!(smoothing > 0.0)) throw InvalidParameter("estimate_posteriors: smoothing must be positive");
  if (num_skills < 1) throw InvalidParameter("estimate_posteriors: need at least one skill");
  std::vector<Cell> bins;
  bins.reserve(rollouts.size());
  for (const Outcome& o : rollouts) {
    if (o.z < 0 || o.z >= num_skills) throw InvalidParameter("estimate_posteriors: skill out of range");
    bins.push_back(o.bin);
  }
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
  const std::size_t cols = bins.size() + 1;
  std::vector<double> counts(static_cast<std::size_t>(num_skills) * cols, 0.0);
  for (const Outcome& o : rollouts) {
    const auto col = static_cast<std::size_t>(std::lower_bound(bins.begin(), bins.end(), o.bin) - bins.begin());
    counts[static_cast<std::size_t>(o.z) * cols + col] += 1.0;
  }
  return PosteriorTables(num_skills, std::move(bins), std::move(counts), smoothing);
}

double pseudo_reward(const PosteriorTables& tables, int z, Cell delta_now, Cell delta_next,
                     double beta, double prior_z) {
  const double mi = std::log(tables.q_z_given_g(z, delta_now)) - std::log(prior_z);
  if (beta == 0.0) return mi;
  const double gap = tables.max_q_g_given_z(z) - tables.q_g_given_z(delta_next, z);
  return mi + beta * std::log(std::max(gap, 0.0) + kRewardFloor);
}

InformationTerms mutual_information(const PosteriorTables& tables) {
  InformationTerms out;
  const int cols = tables.num_columns();
  for (int c = 0; c < cols; ++c) {
    const double pg = tables.q_g(c);
    out.goal_entropy -= pg * std::log(pg);
  }
  for (int z = 0; z < tables.num_skills(); ++z) {
    const double pz = tables.q_z(z);
    for (int c = 0; c < cols; ++c) {
      const double pzg = tables.joint(z, c);
      out.mutual_information += pzg * std::log(pzg / (pz * tables.q_g(c)));
      out.conditional_entropy -= pzg * std::log(pzg / pz);
    }
  }
  return out;
}

// --- training ----------------------------------------------------------------------

namespace {

struct Episode {
  int z = 0;
  std::vector<int> obs_keys;
  std::vector<env::Move> actions;
  std::vector<Cell> deltas;  // deltas[t]: bin of phi(s_t) - phi(s_0), t = 0..T
};

Episode rollout(const SkillSet& skills, const env::MazeSpec& maze, Rng& rng) {
  env::GAMDPSpec spec;
  spec.maze = maze;
  spec.horizon = skills.skill_horizon();
  Episode ep;
  ep.z = skills.sample_skill(rng);
  env::EnvState s = env::reset(spec);
  const Goal origin = env::achieved_goal(s);
  ep.deltas.push_back(delta_bin({0.0, 0.0}, skills.delta_bin_size()));
  for (int t = 0; t < skills.skill_horizon(); ++t) {
    const env::AgentObs obs = env::agent_obs(s, spec);
    const env::Move a = skills.sample_action(obs, ep.z, rng);
    ep.obs_keys.push_back(obs.wall_mask & 0xF);
    ep.actions.push_back(a);
    s = env::step(s, a, spec);
    ep.deltas.push_back(delta_bin(env::achieved_goal(s) - origin, skills.delta_bin_size()));
  }
  return ep;
}

}  // namespace

SkillSet train_skills(std::span<const env::MazeSpec> suite, const TrainConfig& config,
                      const TrainObserver& observer) {
  if (suite.empty()) throw InvalidParameter("train_skills: empty maze suite");
  if (config.num_skills < 2) throw InvalidParameter("train_skills: need at least two skills");
  if (config.iterations < 1) throw InvalidParameter("train_skills: need at least one iteration");
  if (config.episodes_per_iteration < 1) throw InvalidParameter("train_skills: empty batch");
  if (config.beta < 0.0) throw InvalidParameter("train_skills: beta must be non-negative");

  SkillSet skills(config.num_skills, config.skill_horizon, config.delta_bin_size);
  Rng rng(config.seed);
  const int horizon = config.skill_horizon;
  std::deque<Outcome> window;
  std::vector<Episode> batch(static_cast<std::size_t>(config.episodes_per_iteration));
  std::vector<double> returns(batch.size() * static_cast<std::size_t>(horizon));
  std::vector<double> baseline(static_cast<std::size_t>(horizon));
  std::vector<double> grad(static_cast<std::size_t>(SkillSet::kObsKeys * config.num_skills * env::kNumMoves));

  for (int iter = 0; iter < config.iterations; ++iter) {
    // (i) collect
    for (Episode& ep : batch) {
      const env::MazeSpec& maze = suite[rng.uniform_index(suite.size())];
      ep = rollout(skills, maze, rng);
      for (int t = 1; t <= horizon; ++t) window.push_back({ep.z, ep.deltas[static_cast<std::size_t>(t)]});
    }
    const std::size_t max_outcomes = config.posterior_window * static_cast<std::size_t>(horizon);
    while (window.size() > max_outcomes) window.pop_front();

    // (ii) refresh posteriors
    const std::vector<Outcome> recent(window.begin(), window.end());
    const PosteriorTables tables = estimate_posteriors(recent, config.num_skills, config.smoothing);
    if (observer) observer(iter, tables);

    // (iii) policy gradient with returns-to-go and a per-step mean baseline
    std::fill(baseline.begin(), baseline.end(), 0.0);
    for (std::size_t e = 0; e < batch.size(); ++e) {
      const Episode& ep = batch[e];
      const double prior_z = skills.prior()[static_cast<std::size_t>(ep.z)];
      double g = 0.0;
      for (int t = horizon - 1; t >= 0; --t) {
        const auto ti = static_cast<std::size_t>(t);
        g += pseudo_reward(tables, ep.z, ep.deltas[ti], ep.deltas[ti + 1], config.beta, prior_z);
        returns[e * static_cast<std::size_t>(horizon) + ti] = g;
        baseline[ti] += g;
      }
    }
    for (double& b : baseline) b /= static_cast<double>(batch.size());

    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t e = 0; e < batch.size(); ++e) {
      const Episode& ep = batch[e];
      for (int t = 0; t < horizon; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        const double adv = returns[e * static_cast<std::size_t>(horizon) + ti] - baseline[ti];
        env::AgentObs obs;
        obs.wall_mask = static_cast<std::uint8_t>(ep.obs_keys[ti]);
        const auto p = skills.action_probabilities(obs, ep.z);
        const auto off = static_cast<std::size_t>((ep.obs_keys[ti] * config.num_skills + ep.z) * env::kNumMoves);
        for (int a = 0; a < env::kNumMoves; ++a) {
          const double indicator = static_cast<int>(ep.actions[ti]) == a ? 1.0 : 0.0;
          grad[off + static_cast<std::size_t>(a)] += adv * (indicator - p[static_cast<std::size_t>(a)]);
        }
      }
    }
    const double scale = config.step_size;
    for (int key = 0; key < SkillSet::kObsKeys; ++key) {
      for (int z = 0; z < config.num_skills; ++z) {
        auto l = skills.logits(key, z);
        const auto off = static_cast<std::size_t>((key * config.num_skills + z) * env::kNumMoves);
        for (int a = 0; a < env::kNumMoves; ++a) l[static_cast<std::size_t>(a)] += scale * grad[off + static_cast<std::size_t>(a)];
      }
    }
  }
  return skills;
}

PosteriorTables evaluate_skills(const SkillSet& skills, const env::MazeSpec& maze, int episodes,
                                std::uint64_t seed, double smoothing) {
  if (episodes < 1) throw InvalidParameter("evaluate_skills: need at least one episode");
  Rng rng(seed);
  std::vector<Outcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    const Episode ep = rollout(skills, maze, rng);
    outcomes.push_back({ep.z, ep.deltas.back()});
  }
  return estimate_posteriors(outcomes, skills.num_skills(), smoothing);
}

}  // namespace geaps::skills
