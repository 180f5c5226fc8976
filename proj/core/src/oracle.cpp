#include "geaps/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace geaps::oracle {

namespace {

constexpr double kNormTolerance = 1e-9;

void require_discrete(const env::GAMDPSpec& spec, const env::EnvState& start, int horizon) {
  spec.validate();
  if (spec.maze.continuous) throw InvalidParameter("enumeration needs a grid maze");
  if (horizon < 1) throw InvalidParameter("enumeration horizon must be at least 1");
  if (start.step_index + horizon > spec.horizon) {
    throw InvalidParameter("enumeration horizon overruns the episode");
  }
}

void check_action_distribution(const ActionDistribution& p) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw InvalidParameter("policy returned a negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > kNormTolerance) throw InvalidParameter("policy is not normalized");
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

Policy uniform_policy() {
  return [](const env::EnvState&) { return ActionDistribution{0.25, 0.25, 0.25, 0.25}; };
}

Policy left_right_policy() {
  return [](const env::EnvState&) { return ActionDistribution{0.0, 0.5, 0.0, 0.5}; };
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h -= xlogx(v);
  return h;
}

double shannon_entropy(const GoalDistribution& p) {
  double h = 0.0;
  for (const auto& [cell, v] : p) h -= xlogx(v);
  return h;
}

double TrajectorySet::total_probability() const {
  double total = 0.0;
  for (const auto& t : trajectories) total += t.probability;
  return total;
}

namespace {

/// Depth-first walk over every positive-probability trajectory; `leaf` is
/// called with the transition path and its probability.
template <typename Leaf>
void walk(const env::GAMDPSpec& spec, const env::EnvState& start, int horizon, const Policy& policy,
          std::size_t guard, Leaf&& leaf) {
  require_discrete(spec, start, horizon);
  agent::Trajectory path;
  path.reserve(static_cast<std::size_t>(horizon));
  std::size_t leaves = 0;
  auto rec = [&](auto&& self, const env::EnvState& s, double prob) -> void {
    if (static_cast<int>(path.size()) == horizon) {
      if (++leaves > guard) {
        throw EnumerationLimit("trajectory enumeration exceeds the guard of " + std::to_string(guard));
      }
      leaf(path, prob);
      return;
    }
    const ActionDistribution pa = policy(s);
    check_action_distribution(pa);
    for (int a = 0; a < env::kNumMoves; ++a) {
      const double pr = pa[static_cast<std::size_t>(a)];
      if (pr <= 0.0) continue;
      const auto move = static_cast<env::Move>(a);
      const env::EnvState next = env::step(s, move, spec);
      path.push_back({s, move, next, std::nullopt});
      self(self, next, prob * pr);
      path.pop_back();
    }
  };
  rec(rec, start, 1.0);
}

}  // namespace

TrajectorySet enumerate_trajectories(const env::GAMDPSpec& spec, const env::EnvState& start,
                                     int horizon, const Policy& policy, std::size_t guard) {
  TrajectorySet ts;
  ts.horizon = horizon;
  walk(spec, start, horizon, policy, guard, [&](const agent::Trajectory& path, double prob) {
    ts.trajectories.push_back({path, prob});
  });
  return ts;
}

GoalDistribution enumerate_pe(const env::GAMDPSpec& spec, const env::EnvState& start, int horizon,
                              const Policy& policy, std::size_t guard) {
  GoalDistribution pe;
  const double inv = 1.0 / horizon;
  walk(spec, start, horizon, policy, guard, [&](const agent::Trajectory& path, double prob) {
    for (const auto& t : path) pe[cell_of(env::achieved_goal(t.s_next))] += prob * inv;
  });
  return pe;
}

GoalDistribution monte_carlo_pe(const env::GAMDPSpec& spec, const env::EnvState& start, int horizon,
                                const Policy& policy, std::size_t samples, Rng& rng) {
  require_discrete(spec, start, horizon);
  if (samples == 0) throw InvalidParameter("monte_carlo_pe needs at least one sample");
  std::map<Cell, std::size_t> counts;
  for (std::size_t n = 0; n < samples; ++n) {
    env::EnvState s = start;
    for (int t = 0; t < horizon; ++t) {
      const ActionDistribution pa = policy(s);
      s = env::step(s, static_cast<env::Move>(rng.categorical(pa)), spec);
      ++counts[cell_of(env::achieved_goal(s))];
    }
  }
  GoalDistribution pe;
  const double total = static_cast<double>(samples) * horizon;
  for (const auto& [c, k] : counts) pe[c] = static_cast<double>(k) / total;
  return pe;
}

double total_variation(const GoalDistribution& a, const GoalDistribution& b) {
  double tv = 0.0;
  for (const auto& [c, p] : a) {
    const auto it = b.find(c);
    tv += std::abs(p - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [c, p] : b) {
    if (!a.contains(c)) tv += p;
  }
  return 0.5 * tv;
}

MixtureCheck entropy_mixture_check(std::span<const double> p1, std::span<const double> p2, double c,
                                   double tolerance) {
  if (p1.size() != p2.size() || p1.empty()) {
    throw InvalidParameter("mixture components need the same non-empty support");
  }
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidParameter("mixture weight must lie in [0, 1]");
  for (auto p : {p1, p2}) {
    double total = 0.0;
    for (double v : p) {
      if (!(v >= 0.0)) throw InvalidParameter("distribution has a negative entry");
      total += v;
    }
    if (std::abs(total - 1.0) > kNormTolerance) throw InvalidParameter("distribution does not sum to 1");
  }
  std::vector<double> mix(p1.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = c * p1[i] + (1.0 - c) * p2[i];
  MixtureCheck out;
  out.lhs = shannon_entropy(mix);
  out.rhs = c * shannon_entropy(p1) + (1.0 - c) * shannon_entropy(p2);
  out.holds = out.lhs >= out.rhs - tolerance;
  return out;
}

// --- goal-transition patterns ----------------------------------------------------

std::vector<GoalTransitionPattern> decompose_trajectory(const agent::Trajectory& traj,
                                                        const env::GAMDPSpec& spec) {
  if (traj.empty()) throw InvalidParameter("cannot decompose an empty trajectory");
  const std::size_t T = traj.size();
  auto state = [&](std::size_t i) -> const env::EnvState& {
    return i == 0 ? traj.front().s : traj[i - 1].s_next;
  };
  auto goal = [&](std::size_t i) { return env::achieved_goal(state(i)); };

  std::vector<std::size_t> cuts{0};
  for (std::size_t i = 1; i <= T; ++i) {
    if (!(goal(i) == goal(i - 1))) cuts.push_back(i);
  }
  if (cuts.back() != T) cuts.push_back(T);

  std::vector<GoalTransitionPattern> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const std::size_t a = cuts[k];
    const std::size_t b = cuts[k + 1];
    GoalTransitionPattern p;
    p.agent_start = env::agent_obs(state(a), spec);
    p.agent_end = env::agent_obs(state(b), spec);
    p.delta_g = goal(b) - goal(a);
    for (std::size_t i = a; i < b; ++i) p.actions.push_back(traj[i].a);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<env::Move> concat_actions(std::span<const GoalTransitionPattern> plan) {
  std::vector<env::Move> out;
  for (const auto& p : plan) out.insert(out.end(), p.actions.begin(), p.actions.end());
  return out;
}

std::vector<Goal> replay_goals(const env::EnvState& start, std::span<const env::Move> actions,
                               const env::GAMDPSpec& spec) {
  std::vector<Goal> out{env::achieved_goal(start)};
  env::EnvState s = start;
  for (env::Move m : actions) {
    s = env::step(s, m, spec);
    out.push_back(env::achieved_goal(s));
  }
  return out;
}

Substitution substitute_patterns(std::span<const GoalTransitionPattern> decomposition,
                                 std::span<const GoalTransitionPattern> library) {
  Substitution out;
  for (const auto& p : decomposition) {
    const GoalTransitionPattern* best = nullptr;
    for (const auto& q : library) {
      if (q.agent_start == p.agent_start && q.agent_end == p.agent_end && q.delta_g == p.delta_g &&
          (best == nullptr || q.cardinality() < best->cardinality())) {
        best = &q;
      }
    }
    if (best == nullptr) {
      std::ostringstream msg;
      msg << "no library pattern matches delta_g (" << p.delta_g.x << ", " << p.delta_g.y << ")";
      throw UnmatchedPattern(msg.str());
    }
    out.plan.push_back(*best);
    out.total_steps += best->cardinality();
  }
  return out;
}

std::vector<GoalTransitionPattern> extract_library(std::span<const agent::Trajectory> trajectories,
                                                   const env::GAMDPSpec& spec) {
  std::vector<GoalTransitionPattern> lib;
  for (const auto& t : trajectories) {
    if (t.empty()) continue;
    auto d = decompose_trajectory(t, spec);
    lib.insert(lib.end(), std::make_move_iterator(d.begin()), std::make_move_iterator(d.end()));
  }
  return lib;
}

// --- cluster equivalence ---------------------------------------------------------

GoalDistribution trajectory_goal_distribution(const agent::Trajectory& traj) {
  if (traj.empty()) throw InvalidParameter("empty trajectory has no goal distribution");
  GoalDistribution d;
  const double inv = 1.0 / static_cast<double>(traj.size());
  for (const auto& t : traj) d[cell_of(env::achieved_goal(t.s_next))] += inv;
  return d;
}

namespace {

/// sum_x p(x) KL(p(.|x) || p(.)) and sum_x p(x) H(p(.|x)).
std::pair<double, double> decompose_terms(std::span<const double> weights,
                                          std::span<const GoalDistribution> conditionals,
                                          const GoalDistribution& marginal) {
  double mi = 0.0;
  double ce = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    for (const auto& [g, p] : conditionals[i]) {
      if (p <= 0.0) continue;
      mi += weights[i] * p * (std::log(p) - std::log(marginal.at(g)));
    }
    ce += weights[i] * shannon_entropy(conditionals[i]);
  }
  return {mi, ce};
}

}  // namespace

ClusterEquivalence cluster_equivalence(const TrajectorySet& ts, std::span<const int> clustering,
                                       int num_clusters, double tolerance) {
  const std::size_t n = ts.trajectories.size();
  if (clustering.size() != n) throw InvalidParameter("clustering must label every trajectory");
  if (num_clusters < 1) throw InvalidParameter("need at least one cluster");

  std::vector<double> pt(n);
  std::vector<GoalDistribution> cond(n);
  GoalDistribution marginal;
  for (std::size_t i = 0; i < n; ++i) {
    pt[i] = ts.trajectories[i].probability;
    cond[i] = trajectory_goal_distribution(ts.trajectories[i].steps);
    for (const auto& [g, p] : cond[i]) marginal[g] += pt[i] * p;
  }

  const auto K = static_cast<std::size_t>(num_clusters);
  std::vector<double> pz(K, 0.0);
  std::vector<GoalDistribution> cond_z(K);
  for (std::size_t i = 0; i < n; ++i) {
    const int z = clustering[i];
    if (z < 0 || z >= num_clusters) throw InvalidParameter("cluster id out of range");
    pz[static_cast<std::size_t>(z)] += pt[i];
  }
  for (std::size_t z = 0; z < K; ++z) {
    if (!(pz[z] > 0.0)) throw InvalidParameter("cluster " + std::to_string(z) + " has no probability mass");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = static_cast<std::size_t>(clustering[i]);
    const double w = pt[i] / pz[z];
    for (const auto& [g, p] : cond[i]) cond_z[z][g] += w * p;
  }

  ClusterEquivalence out;
  out.goal_entropy = shannon_entropy(marginal);
  std::tie(out.mi_trajectory, out.cond_entropy_trajectory) = decompose_terms(pt, cond, marginal);
  std::tie(out.mi_cluster, out.cond_entropy_cluster) = decompose_terms(pz, cond_z, marginal);
  out.sums_equal = std::abs((out.mi_cluster + out.cond_entropy_cluster) -
                            (out.mi_trajectory + out.cond_entropy_trajectory)) <= tolerance;
  return out;
}

double mutual_information_bruteforce(const std::vector<std::vector<double>>& joint) {
  if (joint.empty() || joint.front().empty()) throw InvalidParameter("empty joint table");
  const std::size_t cols = joint.front().size();
  std::vector<double> px(joint.size(), 0.0);
  std::vector<double> py(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    if (joint[i].size() != cols) throw InvalidParameter("ragged joint table");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!(joint[i][j] >= 0.0)) throw InvalidParameter("negative joint entry");
      px[i] += joint[i][j];
      py[j] += joint[i][j];
      total += joint[i][j];
    }
  }
  if (std::abs(total - 1.0) > kNormTolerance) throw InvalidParameter("joint table does not sum to 1");
  double mi = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double p = joint[i][j];
      if (p > 0.0) mi += p * std::log(p / (px[i] * py[j]));
    }
  }
  return mi;
}

// --- fixtures and suite ----------------------------------------------------------

env::GAMDPSpec corridor_fixture(bool block_left) {
  env::GAMDPSpec spec;
  spec.maze = env::MazeSpec::open(3, 1, {1, 0});
  if (block_left) spec.maze.set_wall({0, 0}, env::Move::Right, true);
  spec.horizon = 50;
  return spec;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed();
  j["seconds"] = seconds;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json o;
    o["name"] = c.name;
    o["passed"] = c.passed;
    o["cases"] = c.cases;
    o["violations"] = c.violations;
    o["worst"] = c.worst;
    if (!c.note.empty()) o["note"] = c.note;
    arr.push_back(std::move(o));
  }
  j["checks"] = std::move(arr);
  return j.dump(2);
}

namespace {

double distribution_error(const GoalDistribution& got, const GoalDistribution& want) {
  return 2.0 * total_variation(got, want);
}

void finish(CheckResult& r, double tolerance) {
  r.passed = r.violations == 0 && r.worst <= tolerance;
}

std::vector<double> random_distribution(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& v : p) {
    v = rng.bernoulli(0.2) ? 0.0 : rng.uniform01();
    total += v;
  }
  if (total <= 0.0) {
    p[rng.uniform_index(n)] = 1.0;
    return p;
  }
  for (auto& v : p) v /= total;
  return p;
}

agent::Trajectory random_trajectory(const env::GAMDPSpec& spec, env::EnvState s, int len, Rng& rng) {
  agent::Trajectory traj;
  for (int t = 0; t < len; ++t) {
    const auto a = static_cast<env::Move>(rng.uniform_index(env::kNumMoves));
    const env::EnvState next = env::step(s, a, spec);
    traj.push_back({s, a, next, std::nullopt});
    s = next;
  }
  return traj;
}

env::GAMDPSpec random_spec(Rng& rng) {
  env::GAMDPSpec spec;
  const int w = 3 + static_cast<int>(rng.uniform_index(4));
  const int h = 3 + static_cast<int>(rng.uniform_index(4));
  spec.maze = env::generate_maze(rng.next_u64(), w, h, rng.uniform(0.0, 0.5));
  spec.horizon = 50;
  return spec;
}

CheckResult check_corridor_enumeration() {
  CheckResult r;
  r.name = "enumerate_pe_corridor";
  const auto open = corridor_fixture(false);
  const auto blocked = corridor_fixture(true);
  const env::EnvState s0 = env::reset(open);
  struct Case {
    const env::GAMDPSpec* spec;
    int horizon;
    GoalDistribution want;
  };
  const std::vector<Case> cases{
      {&open, 1, {{{0, 0}, 0.5}, {{2, 0}, 0.5}}},
      {&blocked, 1, {{{1, 0}, 0.5}, {{2, 0}, 0.5}}},
      {&open, 2, {{{0, 0}, 0.375}, {{1, 0}, 0.25}, {{2, 0}, 0.375}}},
  };
  for (const auto& c : cases) {
    const auto got = enumerate_pe(*c.spec, s0, c.horizon, left_right_policy());
    const double err = distribution_error(got, c.want);
    r.worst = std::max(r.worst, err);
    if (err != 0.0) ++r.violations;
    ++r.cases;
  }
  finish(r, 0.0);
  return r;
}

CheckResult check_pe_normalization(Rng& rng, std::size_t mc_samples) {
  CheckResult r;
  r.name = "enumerate_pe_normalized_and_monte_carlo";
  for (int i = 0; i < 20; ++i) {
    const auto spec = random_spec(rng);
    const auto start = env::state_at(spec, spec.maze.cell_at(static_cast<int>(rng.uniform_index(
                                               static_cast<std::size_t>(spec.maze.num_cells())))));
    const int horizon = 1 + static_cast<int>(rng.uniform_index(5));
    const auto pe = enumerate_pe(spec, start, horizon, uniform_policy());
    double total = 0.0;
    for (const auto& [c, p] : pe) total += p;
    r.worst = std::max(r.worst, std::abs(total - 1.0));
    ++r.cases;
  }
  const auto spec = random_spec(rng);
  const auto start = env::reset(spec);
  const auto exact = enumerate_pe(spec, start, 4, uniform_policy());
  const auto mc = monte_carlo_pe(spec, start, 4, uniform_policy(), mc_samples, rng);
  const double tv = total_variation(exact, mc);
  ++r.cases;
  if (tv > 0.01) ++r.violations;
  r.note = "monte carlo total variation " + std::to_string(tv);
  finish(r, 1e-12);
  return r;
}

CheckResult check_mixture(Rng& rng, int cases) {
  CheckResult r;
  r.name = "entropy_mixture_check";
  for (int i = 0; i < cases; ++i) {
    const std::size_t n = 1 + rng.uniform_index(8);
    const auto p1 = random_distribution(n, rng);
    const auto p2 = random_distribution(n, rng);
    const double c = rng.uniform01();
    const auto m = entropy_mixture_check(p1, p2, c, 1e-12);
    r.worst = std::max(r.worst, m.rhs - m.lhs);
    if (!m.holds) ++r.violations;
    ++r.cases;
  }
  finish(r, 1e-12);
  return r;
}

CheckResult check_roundtrip(Rng& rng, int cases) {
  CheckResult r;
  r.name = "decompose_replay_roundtrip";
  for (int i = 0; i < cases; ++i) {
    const auto spec = random_spec(rng);
    const auto start = env::state_at(
        spec, spec.maze.cell_at(static_cast<int>(rng.uniform_index(static_cast<std::size_t>(spec.maze.num_cells())))));
    const int len = 1 + static_cast<int>(rng.uniform_index(20));
    const auto traj = random_trajectory(spec, start, len, rng);
    const auto patterns = decompose_trajectory(traj, spec);
    const auto actions = concat_actions(patterns);
    std::vector<Goal> want{env::achieved_goal(start)};
    for (const auto& t : traj) want.push_back(env::achieved_goal(t.s_next));
    bool ok = actions.size() == traj.size();
    for (std::size_t k = 0; ok && k < actions.size(); ++k) ok = actions[k] == traj[k].a;
    ok = ok && replay_goals(start, actions, spec) == want;
    if (!ok) ++r.violations;
    ++r.cases;
  }
  finish(r, 0.0);
  return r;
}

CheckResult check_substitution(Rng& rng, int mazes) {
  CheckResult r;
  r.name = "substitute_patterns_budget";
  // Hand construction: a 2-step pattern with a 1-step equivalent.
  {
    const auto spec = corridor_fixture(false);
    const auto s = env::state_at(spec, {0, 0});
    agent::Trajectory two{{s, env::Move::Left, env::step(s, env::Move::Left, spec), std::nullopt}};
    two.push_back({two.back().s_next, env::Move::Right, env::step(two.back().s_next, env::Move::Right, spec),
                   std::nullopt});
    const agent::Trajectory one{{s, env::Move::Right, env::step(s, env::Move::Right, spec), std::nullopt}};
    const auto decomp = decompose_trajectory(two, spec);
    const auto lib = decompose_trajectory(one, spec);
    const auto sub = substitute_patterns(decomp, lib);
    ++r.cases;
    if (sub.total_steps + 1 != two.size()) ++r.violations;
  }
  for (int m = 0; m < mazes; ++m) {
    const auto spec = random_spec(rng);
    const int te = 2 + static_cast<int>(rng.uniform_index(12));
    std::vector<agent::Trajectory> trajs;
    for (int k = 0; k < 50; ++k) {
      const auto start = env::state_at(
          spec, spec.maze.cell_at(static_cast<int>(rng.uniform_index(static_cast<std::size_t>(spec.maze.num_cells())))));
      trajs.push_back(random_trajectory(spec, start, te, rng));
    }
    const auto lib = extract_library(trajs, spec);
    for (const auto& t : trajs) {
      const auto sub = substitute_patterns(decompose_trajectory(t, spec), lib);
      ++r.cases;
      if (sub.total_steps > static_cast<std::size_t>(te)) ++r.violations;
    }
  }
  finish(r, 0.0);
  return r;
}

CheckResult check_clusters(Rng& rng, int cases) {
  CheckResult r;
  r.name = "cluster_equivalence";
  const auto spec = corridor_fixture(false);
  const auto ts = enumerate_trajectories(spec, env::reset(spec), 2, uniform_policy());
  const std::size_t n = ts.trajectories.size();
  for (int i = 0; i < cases; ++i) {
    const int k = 1 + static_cast<int>(rng.uniform_index(n));
    std::vector<int> labels(n);
    for (std::size_t t = 0; t < n; ++t) labels[t] = static_cast<int>(t < static_cast<std::size_t>(k) ? t : rng.uniform_index(static_cast<std::size_t>(k)));
    for (std::size_t t = n; t > 1; --t) std::swap(labels[t - 1], labels[rng.uniform_index(t)]);
    const auto ce = cluster_equivalence(ts, labels, k, 1e-9);
    r.worst = std::max(r.worst, std::abs((ce.mi_cluster + ce.cond_entropy_cluster) -
                                         (ce.mi_trajectory + ce.cond_entropy_trajectory)));
    if (!ce.sums_equal) ++r.violations;
    ++r.cases;
  }
  finish(r, 1e-9);
  return r;
}

CheckResult check_pe_identity(Rng& rng) {
  CheckResult r;
  r.name = "exploration_entropy_identity";
  for (int i = 0; i < 10; ++i) {
    const auto spec = random_spec(rng);
    const auto start = env::reset(spec);
    const int horizon = 1 + static_cast<int>(rng.uniform_index(5));
    const auto pe = enumerate_pe(spec, start, horizon, uniform_policy());
    const auto ts = enumerate_trajectories(spec, start, horizon, uniform_policy());
    const std::vector<int> singletons = [&] {
      std::vector<int> v(ts.trajectories.size());
      std::iota(v.begin(), v.end(), 0);
      return v;
    }();
    const auto ce = cluster_equivalence(ts, singletons, static_cast<int>(singletons.size()));
    const double err = std::abs(shannon_entropy(pe) - (ce.mi_trajectory + ce.cond_entropy_trajectory));
    r.worst = std::max(r.worst, err);
    if (err > 1e-9) ++r.violations;
    ++r.cases;
  }
  finish(r, 1e-9);
  return r;
}

}  // namespace

VerificationReport run_verification_suite(const SuiteOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(options.seed);
  VerificationReport report;
  report.checks.push_back(check_corridor_enumeration());
  report.checks.push_back(check_pe_normalization(rng, options.monte_carlo_samples));
  report.checks.push_back(check_mixture(rng, options.mixture_cases));
  report.checks.push_back(check_roundtrip(rng, options.roundtrip_cases));
  report.checks.push_back(check_substitution(rng, options.substitution_mazes));
  report.checks.push_back(check_clusters(rng, options.clustering_cases));
  report.checks.push_back(check_pe_identity(rng));
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace geaps::oracle
