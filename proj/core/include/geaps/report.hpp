#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "geaps/env.hpp"
#include "geaps/runner.hpp"

namespace geaps::report {

/// One JSON object per eval point, newline-terminated. Deterministic.
std::string metrics_jsonl(const runner::ExperimentResult& result);

struct CurvePoint {
  double step = 0.0;
  double success = 0.0;
  double entropy = 0.0;
};

/// Reads the step, success and entropy fields back from metrics.jsonl text.
std::vector<CurvePoint> parse_metrics_jsonl(const std::string& text);
std::vector<CurvePoint> curve_of(const runner::ExperimentResult& result);

struct Series {
  std::string label;
  std::vector<CurvePoint> points;
};

/// Two panels: evaluated success and achieved-goal entropy against steps.
std::string curves_svg(const std::vector<Series>& series);

/// Maze walls over a log-scaled visit-count heat map.
std::string heatmap_svg(const env::MazeSpec& maze, const std::vector<std::int64_t>& coverage);

std::string coverage_csv(const env::MazeSpec& maze, const std::vector<std::int64_t>& coverage);
std::vector<std::int64_t> parse_coverage_csv(const env::MazeSpec& maze, const std::string& text);

struct SummaryRow {
  std::uint64_t seed = 0;
  std::string subgoal;
  std::string explore;
  std::int64_t total_steps = 0;
  double final_success = 0.0;
  double final_entropy = 0.0;
  std::int64_t steps_to_full_success = -1;  ///< -1 when never reached
  std::size_t mixture_violations = 0;
};

SummaryRow summarize(const runner::ExperimentConfig& cfg, const runner::ExperimentResult& result);
std::string summary_csv(const std::vector<SummaryRow>& rows);

/// Writes config.txt, maze.txt, metrics.jsonl, summary.csv, coverage.csv,
/// curves.svg and heatmap.svg into `dir`.
void write_run(const std::filesystem::path& dir, const runner::ExperimentConfig& cfg,
               const runner::ExperimentResult& result);

struct SweepSpec {
  runner::ExperimentConfig base;
  std::vector<std::uint64_t> seeds;
  std::vector<subgoal::Strategy> subgoals;
  std::vector<explore::Strategy> explores;
  int threads = 1;
};

/// Runs every (subgoal, explore, seed) combination as an independent
/// experiment, writing each run to `<out>/<subgoal>_<explore>/seed_<n>` and
/// the combined summary.csv and median curves.svg to `out`.
std::vector<SummaryRow> run_sweep(const SweepSpec& spec, const std::filesystem::path& out);

/// Pointwise median over runs, matched by eval index.
std::vector<CurvePoint> median_curve(const std::vector<std::vector<CurvePoint>>& runs);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace geaps::report
