#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "geaps/oracle.hpp"
#include "geaps/report.hpp"
#include "geaps/runner.hpp"
#include "geaps/skills.hpp"

namespace fs = std::filesystem;
using namespace geaps;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void apply_overrides(runner::ExperimentConfig& cfg, const std::vector<std::string>& sets) {
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw runner::ConfigError("--set expects key=value, got '" + kv + "'");
    runner::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

runner::ExperimentConfig config_from(const std::string& path, const std::vector<std::string>& sets) {
  runner::ExperimentConfig cfg = path.empty() ? runner::ExperimentConfig{} : runner::load_config(path);
  apply_overrides(cfg, sets);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geaps-lab: goal-conditioned exploration laboratory"};
  app.require_subcommand(1);

  // pretrain
  auto* pre = app.add_subcommand("pretrain", "pre-train skills on a generated maze suite");
  runner::PretrainConfig pcfg;
  std::string pre_out = "skills.json";
  pre->add_option("--suite-seed", pcfg.suite_seed, "seed of the pre-training suite and of training");
  pre->add_option("--suite-count", pcfg.suite_count, "number of suite mazes")->check(CLI::PositiveNumber);
  pre->add_option("--size", pcfg.maze_size, "suite maze side length")->check(CLI::Range(3, 64));
  pre->add_option("--k", pcfg.train.num_skills, "number of skills")->check(CLI::PositiveNumber);
  pre->add_option("--horizon", pcfg.train.skill_horizon, "skill horizon T^s")->check(CLI::PositiveNumber);
  pre->add_option("--beta", pcfg.train.beta, "weight of the coverage term")->check(CLI::NonNegativeNumber);
  pre->add_option("--iters", pcfg.train.iterations, "policy-gradient iterations")->check(CLI::PositiveNumber);
  pre->add_option("--episodes", pcfg.train.episodes_per_iteration, "rollouts per iteration")->check(CLI::PositiveNumber);
  pre->add_option("--out", pre_out, "output artifact path");

  // train
  auto* train = app.add_subcommand("train", "run one experiment");
  std::string train_config;
  std::uint64_t train_seed = 0;
  std::string train_out = "run";
  std::vector<std::string> train_sets;
  train->add_option("--config", train_config, "config file")->check(CLI::ExistingFile);
  train->add_option("--seed", train_seed, "experiment seed")->required();
  train->add_option("--out", train_out, "output directory");
  train->add_option("--set", train_sets, "override a config key (key=value)");

  // eval
  auto* ev = app.add_subcommand("eval", "measure a skill artifact");
  std::string eval_skills;
  std::string eval_maze;
  int eval_size = 5;
  int eval_episodes = 5000;
  std::uint64_t eval_seed = 0;
  ev->add_option("--skills", eval_skills, "skill artifact")->required()->check(CLI::ExistingFile);
  ev->add_option("--maze", eval_maze, "plain-text maze (default: empty maze)")->check(CLI::ExistingFile);
  ev->add_option("--size", eval_size, "empty maze side length")->check(CLI::Range(3, 64));
  ev->add_option("--episodes", eval_episodes, "rollouts")->check(CLI::PositiveNumber);
  ev->add_option("--seed", eval_seed, "rollout seed");

  // oracle
  auto* orc = app.add_subcommand("oracle", "run the brute-force verification suite");
  oracle::SuiteOptions sopt;
  std::string oracle_out;
  orc->add_option("--seed", sopt.seed, "seed of the randomized checks");
  orc->add_option("--out", oracle_out, "also write the JSON report here");

  // sweep
  auto* sw = app.add_subcommand("sweep", "run strategies x seeds");
  std::string sweep_config;
  std::string sweep_seeds = "1,2,3,4,5";
  std::string sweep_subgoals = "mega";
  std::string sweep_explores = "geaps,random";
  std::string sweep_out = "sweep";
  std::vector<std::string> sweep_sets;
  int sweep_threads = 1;
  sw->add_option("--config", sweep_config, "base config file")->check(CLI::ExistingFile);
  sw->add_option("--seeds", sweep_seeds, "comma-separated seeds");
  sw->add_option("--subgoals", sweep_subgoals, "comma-separated sub-goal strategies");
  sw->add_option("--explores", sweep_explores, "comma-separated exploration strategies");
  sw->add_option("--threads", sweep_threads, "concurrent runs")->check(CLI::PositiveNumber);
  sw->add_option("--out", sweep_out, "output directory");
  sw->add_option("--set", sweep_sets, "override a config key (key=value)");

  // plot
  auto* pl = app.add_subcommand("plot", "redraw figures from run directories");
  std::vector<std::string> plot_runs;
  std::string plot_out;
  pl->add_option("runs", plot_runs, "run directories")->required()->check(CLI::ExistingDirectory);
  pl->add_option("--out", plot_out, "overlay curves into this SVG instead of redrawing each run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pre) {
      const skills::SkillSet set = runner::pretrain(pcfg);
      report::write_file(pre_out, set.to_json() + "\n");
      std::cout << "wrote " << pre_out << "\n";
      return 0;
    }
    if (*train) {
      runner::ExperimentConfig cfg = config_from(train_config, train_sets);
      cfg.seed = train_seed;
      const auto result = runner::run_experiment(cfg);
      report::write_run(train_out, cfg, result);
      const auto row = report::summarize(cfg, result);
      std::cout << report::summary_csv({row});
      return 0;
    }
    if (*ev) {
      const auto set = skills::SkillSet::from_json(report::read_file(eval_skills));
      env::MazeSpec maze = eval_maze.empty() ? env::MazeSpec::open(eval_size, eval_size, {eval_size / 2, eval_size / 2})
                                             : env::parse_text(report::read_file(eval_maze));
      const auto tables = skills::evaluate_skills(set, maze, eval_episodes, eval_seed);
      const auto info = skills::mutual_information(tables);
      std::printf("{\"mutual_information\": %.10g, \"goal_entropy\": %.10g, \"conditional_entropy\": %.10g}\n",
                  info.mutual_information, info.goal_entropy, info.conditional_entropy);
      return 0;
    }
    if (*orc) {
      const auto rep = oracle::run_verification_suite(sopt);
      const std::string json = rep.to_json();
      std::cout << json << "\n";
      if (!oracle_out.empty()) report::write_file(oracle_out, json + "\n");
      return rep.passed() ? 0 : 1;
    }
    if (*sw) {
      report::SweepSpec spec;
      spec.base = config_from(sweep_config, sweep_sets);
      for (const auto& s : split_list(sweep_seeds)) spec.seeds.push_back(std::stoull(s));
      for (const auto& s : split_list(sweep_subgoals)) spec.subgoals.push_back(subgoal::parse_strategy(s));
      for (const auto& s : split_list(sweep_explores)) spec.explores.push_back(explore::parse_strategy(s));
      spec.threads = sweep_threads;
      std::cout << report::summary_csv(report::run_sweep(spec, sweep_out));
      return 0;
    }
    if (*pl) {
      if (!plot_out.empty()) {
        std::vector<report::Series> series;
        for (const auto& dir : plot_runs) {
          series.push_back({fs::path(dir).filename().string(),
                            report::parse_metrics_jsonl(report::read_file(fs::path(dir) / "metrics.jsonl"))});
        }
        report::write_file(plot_out, report::curves_svg(series));
        return 0;
      }
      for (const auto& dir : plot_runs) {
        const fs::path d(dir);
        const auto curve = report::parse_metrics_jsonl(report::read_file(d / "metrics.jsonl"));
        report::write_file(d / "curves.svg", report::curves_svg({{d.filename().string(), curve}}));
        if (fs::exists(d / "maze.txt") && fs::exists(d / "coverage.csv")) {
          const auto maze = env::parse_text(report::read_file(d / "maze.txt"));
          const auto cov = report::parse_coverage_csv(maze, report::read_file(d / "coverage.csv"));
          report::write_file(d / "heatmap.svg", report::heatmap_svg(maze, cov));
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
