#include "geaps/runner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "geaps/density.hpp"
#include "geaps/oracle.hpp"

namespace geaps::runner {

double mixture_coefficient(std::int64_t buffer_size, std::int64_t t_c, std::int64_t t_e) {
  if (buffer_size < 0 || t_c < 0 || t_e < 0) {
    throw InvalidParameter("mixture_coefficient: inputs must be non-negative");
  }
  const std::int64_t denom = buffer_size + t_c + t_e;
  if (denom == 0) throw InvalidParameter("mixture_coefficient: zero denominator");
  return static_cast<double>(buffer_size + t_c) / static_cast<double>(denom);
}

env::MazeSpec build_maze(const ExperimentConfig& cfg) {
  if (!cfg.maze_file.empty()) {
    std::ifstream in(cfg.maze_file);
    if (!in) throw ConfigError("cannot read maze " + cfg.maze_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return env::parse_text(buf.str());
  }
  env::MazeSpec maze = env::generate_maze(cfg.maze_seed, cfg.maze_width, cfg.maze_height, cfg.maze_loop_prob);
  maze.continuous = cfg.continuous;
  return maze;
}

skills::SkillSet pretrain(const PretrainConfig& cfg) {
  const auto suite = env::generate_pretrain_suite(cfg.suite_seed, cfg.suite_count, cfg.maze_size);
  return skills::train_skills(suite, cfg.train);
}

std::shared_ptr<const skills::SkillSet> resolve_skills(const ExperimentConfig& cfg) {
  if (cfg.explore != explore::Strategy::Geaps) return nullptr;
  if (!cfg.skills_file.empty()) {
    std::ifstream in(cfg.skills_file);
    if (!in) throw ConfigError("cannot read skills " + cfg.skills_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::make_shared<const skills::SkillSet>(skills::SkillSet::from_json(buf.str()));
  }
  PretrainConfig p;
  p.suite_seed = cfg.pretrain_seed;
  p.train.seed = cfg.pretrain_seed;
  p.train.iterations = cfg.pretrain_iterations;
  p.train.skill_horizon = cfg.skill_horizon;
  return std::make_shared<const skills::SkillSet>(pretrain(p));
}

namespace {

env::GAMDPSpec make_spec(const ExperimentConfig& cfg) {
  env::GAMDPSpec spec;
  spec.maze = build_maze(cfg);
  spec.horizon = cfg.horizon;
  spec.discount = cfg.gamma;
  spec.validate();
  return spec;
}

enum StreamTag : std::uint64_t { kSelect = 1, kAct, kExplore, kUpdate, kEval };

}  // namespace

Experiment::Experiment(const ExperimentConfig& cfg, std::shared_ptr<const skills::SkillSet> skill_set)
    : cfg_(cfg),
      spec_(make_spec(cfg)),
      skills_(std::move(skill_set)),
      q_(spec_.maze, cfg.lr, cfg.gamma),
      buffer_(cfg.buffer_capacity),
      ratios_(agent::RelabelRatios::parse(cfg.relabel)),
      success_table_(cfg.goid_window, 1.0),
      select_rng_(Rng(cfg.seed).split(kSelect)),
      act_rng_(Rng(cfg.seed).split(kAct)),
      explore_rng_(Rng(cfg.seed).split(kExplore)),
      update_rng_(Rng(cfg.seed).split(kUpdate)),
      eval_rng_(Rng(cfg.seed).split(kEval)),
      buffer_counts_(static_cast<std::size_t>(spec_.maze.num_cells()), 0),
      coverage_(static_cast<std::size_t>(spec_.maze.num_cells()), 0) {
  cfg_.validate();
  if (spec_.maze.desired_region.empty()) throw ConfigError("maze has no desired region");
  if (cfg_.explore == explore::Strategy::Geaps && !skills_) {
    throw ConfigError("geaps exploration needs a skill set");
  }
}

Goal Experiment::desired_sample(Rng& rng) const {
  const auto& region = spec_.maze.desired_region;
  return env::goal_of_cell(spec_.maze, region[rng.uniform_index(region.size())]);
}

Goal Experiment::select_subgoal() {
  if (buffer_.empty()) return desired_sample(select_rng_);
  const auto achieved = buffer_.achieved_goals();
  switch (cfg_.subgoal) {
    case subgoal::Strategy::Uniform:
      return subgoal::uniform_select(achieved, select_rng_);
    case subgoal::Strategy::Goid:
      if (success_table_.size() == 0 || select_rng_.bernoulli(cfg_.goid_discovery)) {
        return subgoal::uniform_select(achieved, select_rng_);
      }
      return subgoal::goid_select(success_table_, cfg_.goid_min, cfg_.goid_max, select_rng_);
    case subgoal::Strategy::Mega:
    case subgoal::Strategy::SkewFit:
    case subgoal::Strategy::Omega:
      break;
  }
  const density::DensityModel model =
      cfg_.density == "kde"
          ? density::fit_kde_normalized(achieved, cfg_.bandwidth, cfg_.density_samples, select_rng_,
                                        density::GoalNormalizer(goal_lo_, goal_hi_))
          : density::fit_histogram(achieved, 1.0);
  if (cfg_.subgoal == subgoal::Strategy::Mega) {
    return subgoal::mega_select(achieved, model, select_rng_, cfg_.density_samples);
  }
  if (cfg_.subgoal == subgoal::Strategy::SkewFit) {
    return subgoal::skewfit_select(achieved, model, cfg_.skew_exponent, select_rng_, cfg_.density_samples);
  }
  std::vector<Goal> desired;
  desired.reserve(cfg_.omega_kl_samples);
  for (std::size_t i = 0; i < cfg_.omega_kl_samples; ++i) desired.push_back(desired_sample(select_rng_));
  const double kl = subgoal::estimate_kl(desired, model, cfg_.bandwidth);
  subgoal::OmegaParams params{cfg_.omega_b, subgoal::omega_alpha(kl, cfg_.omega_b)};
  const subgoal::GoalSampler sampler = [this](Rng& rng) { return desired_sample(rng); };
  return subgoal::omega_select(params, sampler, achieved, model, select_rng_, cfg_.density_samples);
}

IterationRecord Experiment::run_iteration(int max_steps) {
  if (max_steps < 1) throw InvalidParameter("run_iteration needs at least one step");
  const int budget = std::min(spec_.horizon, max_steps);
  IterationRecord rec;
  rec.iteration = iteration_;
  rec.subgoal = select_subgoal();
  behavioral_pool_.push(rec.subgoal);
  actual_pool_.push(desired_sample(select_rng_));

  agent::Trajectory traj;
  traj.reserve(static_cast<std::size_t>(budget));
  env::EnvState s = env::reset(spec_);
  bool reached = env::goal_reached(spec_.maze, env::achieved_goal(s), rec.subgoal);
  while (!reached && static_cast<int>(traj.size()) < budget) {
    const env::Move a = agent::act(q_, s, rec.subgoal, cfg_.epsilon, act_rng_);
    const env::EnvState next = env::step(s, a, spec_);
    traj.push_back({s, a, next, rec.subgoal});
    s = next;
    reached = env::goal_reached(spec_.maze, env::achieved_goal(s), rec.subgoal);
  }
  rec.goal_reached = reached;
  rec.pursuit_steps = static_cast<int>(traj.size());

  const int remaining = budget - rec.pursuit_steps;
  if (remaining > 0 && (reached || cfg_.explore_on_timeout)) {
    agent::Trajectory extra;
    if (cfg_.explore == explore::Strategy::Geaps) {
      explore::ExploreConfig ec{remaining, cfg_.skill_horizon};
      extra = explore::geaps_rollout(s, ec, *skills_, spec_, explore_rng_);
    } else if (cfg_.explore == explore::Strategy::Random) {
      extra = explore::random_rollout(s, remaining, spec_, explore_rng_);
    }
    rec.explore_steps = static_cast<int>(extra.size());
    traj.insert(traj.end(), extra.begin(), extra.end());
  }

  const auto before = static_cast<std::int64_t>(buffer_.size());
  rec.c = mixture_coefficient(before, rec.pursuit_steps, rec.explore_steps);

  auto cell_index = [&](const agent::Transition& t) {
    const Cell c = cell_of(env::achieved_goal(t.s_next));
    return static_cast<std::size_t>(spec_.maze.cell_index(c));
  };
  if (rec.explore_steps > 0) {
    const std::size_t n = buffer_counts_.size();
    std::vector<double> p_ag(n, 0.0);
    std::vector<double> p_e(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) p_ag[i] = static_cast<double>(buffer_counts_[i]);
    for (int i = 0; i < rec.pursuit_steps; ++i) p_ag[cell_index(traj[static_cast<std::size_t>(i)])] += 1.0;
    for (std::size_t i = static_cast<std::size_t>(rec.pursuit_steps); i < traj.size(); ++i) p_e[cell_index(traj[i])] += 1.0;
    const double n_ag = static_cast<double>(before + rec.pursuit_steps);
    const double n_e = rec.explore_steps;
    if (n_ag > 0.0) {
      for (double& v : p_ag) v /= n_ag;
    } else {
      p_ag = p_e;
      for (double& v : p_ag) v /= n_e;
    }
    for (double& v : p_e) v /= n_e;
    const auto check = oracle::entropy_mixture_check(p_ag, p_e, rec.c, 1e-9);
    rec.mixture_slack = check.lhs - check.rhs;
    rec.mixture_holds = check.holds;
    ++mixture_checks_;
    if (!check.holds) ++mixture_violations_;
  }

  for (const auto& t : traj) ++coverage_[cell_index(t)];
  const std::size_t steps = traj.size();
  if (steps > 0) {
    buffer_.add_trajectory(traj);
    auto widen = [this](Goal g, bool first) {
      goal_lo_ = first ? g : Vec2{std::min(goal_lo_.x, g.x), std::min(goal_lo_.y, g.y)};
      goal_hi_ = first ? g : Vec2{std::max(goal_hi_.x, g.x), std::max(goal_hi_.y, g.y)};
    };
    if (static_cast<std::int64_t>(buffer_.size()) == before + static_cast<std::int64_t>(steps)) {
      for (const auto& t : traj) {
        ++buffer_counts_[cell_index(t)];
        widen(env::achieved_goal(t.s_next), before == 0 && &t == &traj.front());
      }
    } else {
      std::fill(buffer_counts_.begin(), buffer_counts_.end(), 0);
      bool first = true;
      for (const Goal& g : buffer_.achieved_goals()) {
        ++buffer_counts_[static_cast<std::size_t>(spec_.maze.cell_index(cell_of(g)))];
        widen(g, first);
        first = false;
      }
    }
  }
  success_table_.record(rec.subgoal, reached);
  total_steps_ += static_cast<std::int64_t>(steps);
  ++iteration_;
  update(steps);
  return rec;
}

void Experiment::update(std::size_t steps) {
  if (buffer_.empty() || cfg_.updates_per_step == 0) return;
  const env::MazeSpec& maze = spec_.maze;
  const agent::GoalPredicate reached = [&maze](Goal a, Goal g) { return env::goal_reached(maze, a, g); };
  const agent::RelabelSources sources{buffer_.achieved_goals(), &actual_pool_, &behavioral_pool_};
  const std::size_t n = steps * static_cast<std::size_t>(cfg_.updates_per_step);
  for (std::size_t i = 0; i < n; ++i) {
    const auto batch = agent::sample_batch(buffer_, cfg_.batch_size, update_rng_);
    const auto labelled = agent::relabel(batch, ratios_, sources, update_rng_);
    agent::q_update(q_, labelled, reached);
  }
}

double Experiment::evaluate() {
  int successes = 0;
  for (int e = 0; e < cfg_.eval_episodes; ++e) {
    const Goal g = desired_sample(eval_rng_);
    env::EnvState s = env::reset(spec_);
    bool ok = env::goal_reached(spec_.maze, env::achieved_goal(s), g);
    while (!ok && s.step_index < spec_.horizon) {
      s = env::step(s, agent::act(q_, s, g, 0.0, eval_rng_), spec_);
      ok = env::goal_reached(spec_.maze, env::achieved_goal(s), g);
    }
    if (ok) ++successes;
  }
  return static_cast<double>(successes) / cfg_.eval_episodes;
}

double Experiment::achieved_entropy() const {
  if (buffer_.empty()) return 0.0;
  const auto goals = buffer_.achieved_goals();
  return density::empirical_entropy(density::fit_histogram(goals, 1.0), goals);
}

std::optional<std::int64_t> ExperimentResult::steps_to_full_success() const {
  for (const auto& m : metrics) {
    if (m.success >= 1.0) return m.step;
  }
  return std::nullopt;
}

double ExperimentResult::final_success() const { return metrics.empty() ? 0.0 : metrics.back().success; }
double ExperimentResult::final_entropy() const { return metrics.empty() ? 0.0 : metrics.back().entropy; }

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::shared_ptr<const skills::SkillSet> skill_set) {
  cfg.validate();
  if (!skill_set) skill_set = resolve_skills(cfg);
  Experiment ex(cfg, std::move(skill_set));
  ExperimentResult out;
  out.maze = ex.spec().maze;
  std::int64_t next_eval = cfg.eval_every;
  while (ex.total_steps() < cfg.total_steps) {
    const auto left = cfg.total_steps - ex.total_steps();
    IterationRecord rec = ex.run_iteration(static_cast<int>(std::min<std::int64_t>(left, cfg.horizon)));
    out.pursuit_steps += rec.pursuit_steps;
    out.explore_steps += rec.explore_steps;
    if (ex.total_steps() >= next_eval || ex.total_steps() >= cfg.total_steps) {
      MetricsRecord m;
      m.step = ex.total_steps();
      m.success = ex.evaluate();
      m.entropy = ex.achieved_entropy();
      rec.success_eval = m.success;
      rec.entropy_now = m.entropy;
      m.last = rec;
      m.mixture_checks = ex.mixture_checks();
      m.mixture_violations = ex.mixture_violations();
      out.metrics.push_back(m);
      while (next_eval <= ex.total_steps()) next_eval += cfg.eval_every;
    }
  }
  out.total_steps = ex.total_steps();
  out.coverage = ex.coverage();
  out.mixture_checks = ex.mixture_checks();
  out.mixture_violations = ex.mixture_violations();
  return out;
}

}  // namespace geaps::runner
