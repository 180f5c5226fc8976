#include "geaps/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace geaps::report {

using nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string metrics_jsonl(const runner::ExperimentResult& result) {
  std::string out;
  for (const auto& m : result.metrics) {
    ordered_json j;
    j["step"] = m.step;
    j["iteration"] = m.last.iteration;
    j["subgoal"] = {m.last.subgoal.x, m.last.subgoal.y};
    j["pursuit_steps"] = m.last.pursuit_steps;
    j["explore_steps"] = m.last.explore_steps;
    j["goal_reached"] = m.last.goal_reached;
    j["c"] = m.last.c;
    j["entropy"] = m.entropy;
    j["success"] = m.success;
    j["mixture_slack"] = m.last.mixture_slack;
    j["mixture_checks"] = m.mixture_checks;
    j["mixture_violations"] = m.mixture_violations;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<CurvePoint> parse_metrics_jsonl(const std::string& text) {
  std::vector<CurvePoint> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("step").get<double>(), j.at("success").get<double>(), j.at("entropy").get<double>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("metrics line: ") + e.what());
    }
  }
  return out;
}

std::vector<CurvePoint> curve_of(const runner::ExperimentResult& result) {
  std::vector<CurvePoint> out;
  for (const auto& m : result.metrics) out.push_back({static_cast<double>(m.step), m.success, m.entropy});
  return out;
}

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string axis_label(double v) {
  std::ostringstream s;
  if (std::abs(v) >= 1000.0) {
    s << std::setprecision(3) << v / 1000.0 << "k";
  } else {
    s << std::setprecision(3) << v;
  }
  return s.str();
}

}  // namespace

std::string curves_svg(const std::vector<Series>& series) {
  const double pw = 360, ph = 240, ml = 55, mt = 30, gap = 70, mb = 45;
  const double width = ml + pw + gap + pw + 20;
  const double height = mt + ph + mb + 20.0 * static_cast<double>(series.size() + 1);
  double max_step = 1.0, max_entropy = 1e-9;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      max_step = std::max(max_step, p.step);
      max_entropy = std::max(max_entropy, p.entropy);
    }
  }
  max_entropy = std::ceil(max_entropy * 2.0) / 2.0;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  struct Panel {
    const char* title;
    double x0;
    double ymax;
    bool success;
  };
  const Panel panels[] = {{"evaluated success", ml, 1.0, true}, {"achieved-goal entropy (nats)", ml + pw + gap, max_entropy, false}};
  for (const auto& p : panels) {
    o << "<text x=\"" << num(p.x0 + pw / 2) << "\" y=\"" << num(mt - 10) << "\" text-anchor=\"middle\" font-size=\"13\">"
      << p.title << "</text>\n";
    o << "<rect x=\"" << num(p.x0) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double fx = k / 4.0;
      const double x = p.x0 + fx * pw;
      const double y = mt + ph - fx * ph;
      o << "<line x1=\"" << num(x) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(x) << "\" y2=\"" << num(mt + ph + 4)
        << "\" stroke=\"black\"/>\n";
      o << "<text x=\"" << num(x) << "\" y=\"" << num(mt + ph + 16) << "\" text-anchor=\"middle\">"
        << axis_label(fx * max_step) << "</text>\n";
      o << "<line x1=\"" << num(p.x0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(p.x0 + pw) << "\" y2=\"" << num(y)
        << "\" stroke=\"#e0e0e0\"/>\n";
      o << "<text x=\"" << num(p.x0 - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << axis_label(fx * p.ymax)
        << "</text>\n";
    }
    o << "<text x=\"" << num(p.x0 + pw / 2) << "\" y=\"" << num(mt + ph + 32)
      << "\" text-anchor=\"middle\">environment steps</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      o << "<polyline fill=\"none\" stroke-width=\"1.8\" stroke=\"" << kPalette[i % std::size(kPalette)] << "\" points=\"";
      for (const auto& pt : series[i].points) {
        const double v = p.success ? pt.success : pt.entropy;
        o << num(p.x0 + pt.step / max_step * pw) << ',' << num(mt + ph - v / p.ymax * ph) << ' ';
      }
      o << "\"/>\n";
    }
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = mt + ph + mb + 20.0 * static_cast<double>(i);
    o << "<line x1=\"" << num(ml) << "\" y1=\"" << num(y) << "\" x2=\"" << num(ml + 24) << "\" y2=\"" << num(y)
      << "\" stroke-width=\"3\" stroke=\"" << kPalette[i % std::size(kPalette)] << "\"/>\n";
    o << "<text x=\"" << num(ml + 30) << "\" y=\"" << num(y + 4) << "\">" << escape(series[i].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string heatmap_svg(const env::MazeSpec& maze, const std::vector<std::int64_t>& coverage) {
  const double cell = std::max(12.0, 360.0 / std::max(maze.width, maze.height));
  const double margin = 20.0;
  const double w = maze.width * cell + 2 * margin;
  const double h = maze.height * cell + 2 * margin + 20;
  double lmax = 0.0;
  for (auto v : coverage) lmax = std::max(lmax, std::log1p(static_cast<double>(v)));
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(w / 2) << "\" y=\"14\" text-anchor=\"middle\">achieved-goal coverage (log visits)</text>\n";
  auto px = [&](double x) { return margin + x * cell; };
  auto py = [&](double y) { return margin + 20 + (maze.height - y) * cell; };
  for (int y = 0; y < maze.height; ++y) {
    for (int x = 0; x < maze.width; ++x) {
      const auto idx = static_cast<std::size_t>(maze.cell_index({x, y}));
      const double v = idx < coverage.size() && lmax > 0.0 ? std::log1p(static_cast<double>(coverage[idx])) / lmax : 0.0;
      const int r = static_cast<int>(255 - 200 * v);
      const int g = static_cast<int>(255 - 120 * v);
      o << "<rect x=\"" << num(px(x)) << "\" y=\"" << num(py(y + 1)) << "\" width=\"" << num(cell) << "\" height=\""
        << num(cell) << "\" fill=\"rgb(" << r << ',' << g << ",255)\"/>\n";
    }
  }
  auto line = [&](double x1, double y1, double x2, double y2) {
    o << "<line x1=\"" << num(px(x1)) << "\" y1=\"" << num(py(y1)) << "\" x2=\"" << num(px(x2)) << "\" y2=\""
      << num(py(y2)) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  };
  for (int y = 0; y < maze.height; ++y) {
    for (int x = 0; x < maze.width; ++x) {
      if (maze.blocked({x, y}, env::Move::Right)) line(x + 1, y, x + 1, y + 1);
      if (maze.blocked({x, y}, env::Move::Up)) line(x, y + 1, x + 1, y + 1);
      if (x == 0) line(0, y, 0, y + 1);
      if (y == 0) line(x, 0, x + 1, 0);
    }
  }
  auto mark = [&](Cell c, const char* label) {
    o << "<text x=\"" << num(px(c.x + 0.5)) << "\" y=\"" << num(py(c.y + 0.5) + 4)
      << "\" text-anchor=\"middle\" font-weight=\"bold\">" << label << "</text>\n";
  };
  mark(maze.start_cell, "S");
  for (const Cell& c : maze.desired_region) mark(c, "G");
  o << "</svg>\n";
  return o.str();
}

std::string coverage_csv(const env::MazeSpec& maze, const std::vector<std::int64_t>& coverage) {
  std::ostringstream o;
  o << "x,y,visits\n";
  for (int i = 0; i < maze.num_cells(); ++i) {
    const Cell c = maze.cell_at(i);
    o << c.x << ',' << c.y << ',' << coverage.at(static_cast<std::size_t>(i)) << '\n';
  }
  return o.str();
}

std::vector<std::int64_t> parse_coverage_csv(const env::MazeSpec& maze, const std::string& text) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(maze.num_cells()), 0);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int x = 0, y = 0;
    long long v = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ls(line);
    if (!(ls >> x >> c1 >> y >> c2 >> v) || !maze.in_bounds({x, y})) throw Error("bad coverage row: " + line);
    out[static_cast<std::size_t>(maze.cell_index({x, y}))] = v;
  }
  return out;
}

SummaryRow summarize(const runner::ExperimentConfig& cfg, const runner::ExperimentResult& result) {
  SummaryRow r;
  r.seed = cfg.seed;
  r.subgoal = subgoal::to_string(cfg.subgoal);
  r.explore = explore::to_string(cfg.explore);
  r.total_steps = result.total_steps;
  r.final_success = result.final_success();
  r.final_entropy = result.final_entropy();
  r.steps_to_full_success = result.steps_to_full_success().value_or(-1);
  r.mixture_violations = result.mixture_violations;
  return r;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream o;
  o << "seed,subgoal,explore,total_steps,final_success,final_entropy,steps_to_full_success,mixture_violations\n";
  o << std::setprecision(10);
  for (const auto& r : rows) {
    o << r.seed << ',' << r.subgoal << ',' << r.explore << ',' << r.total_steps << ',' << r.final_success << ','
      << r.final_entropy << ',' << r.steps_to_full_success << ',' << r.mixture_violations << '\n';
  }
  return o.str();
}

void write_run(const std::filesystem::path& dir, const runner::ExperimentConfig& cfg,
               const runner::ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  write_file(dir / "config.txt", runner::to_text(cfg));
  write_file(dir / "maze.txt", env::to_text(result.maze));
  write_file(dir / "metrics.jsonl", metrics_jsonl(result));
  write_file(dir / "summary.csv", summary_csv({summarize(cfg, result)}));
  write_file(dir / "coverage.csv", coverage_csv(result.maze, result.coverage));
  const std::string label = subgoal::to_string(cfg.subgoal) + "+" + explore::to_string(cfg.explore) +
                            " seed " + std::to_string(cfg.seed);
  write_file(dir / "curves.svg", curves_svg({{label, curve_of(result)}}));
  write_file(dir / "heatmap.svg", heatmap_svg(result.maze, result.coverage));
}

std::vector<CurvePoint> median_curve(const std::vector<std::vector<CurvePoint>>& runs) {
  std::vector<CurvePoint> out;
  if (runs.empty()) return out;
  std::size_t len = runs.front().size();
  for (const auto& r : runs) len = std::min(len, r.size());
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<double> s, su, e;
    for (const auto& r : runs) {
      s.push_back(r[i].step);
      su.push_back(r[i].success);
      e.push_back(r[i].entropy);
    }
    out.push_back({median(s), median(su), median(e)});
  }
  return out;
}

std::vector<SummaryRow> run_sweep(const SweepSpec& spec, const std::filesystem::path& out) {
  if (spec.seeds.empty() || spec.subgoals.empty() || spec.explores.empty()) {
    throw InvalidParameter("sweep needs at least one seed, subgoal and explore strategy");
  }
  struct Job {
    runner::ExperimentConfig cfg;
    std::filesystem::path dir;
  };
  std::vector<Job> jobs;
  for (auto sg : spec.subgoals) {
    for (auto ex : spec.explores) {
      for (auto seed : spec.seeds) {
        Job j{spec.base, {}};
        j.cfg.subgoal = sg;
        j.cfg.explore = ex;
        j.cfg.seed = seed;
        j.cfg.validate();
        j.dir = out / (subgoal::to_string(sg) + "_" + explore::to_string(ex)) / ("seed_" + std::to_string(seed));
        jobs.push_back(std::move(j));
      }
    }
  }
  std::shared_ptr<const skills::SkillSet> skill_set;
  if (std::find(spec.explores.begin(), spec.explores.end(), explore::Strategy::Geaps) != spec.explores.end()) {
    runner::ExperimentConfig g = spec.base;
    g.explore = explore::Strategy::Geaps;
    skill_set = runner::resolve_skills(g);
  }

  std::vector<runner::ExperimentResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const auto& job = jobs[i];
        auto sk = job.cfg.explore == explore::Strategy::Geaps ? skill_set : nullptr;
        results[i] = runner::run_experiment(job.cfg, sk);
        write_run(job.dir, job.cfg, results[i]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  const int threads = std::max(1, spec.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) throw Error("sweep run failed: " + first_error);

  std::vector<SummaryRow> rows;
  std::map<std::string, std::vector<std::vector<CurvePoint>>> groups;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    rows.push_back(summarize(jobs[i].cfg, results[i]));
    const std::string key = subgoal::to_string(jobs[i].cfg.subgoal) + "+" + explore::to_string(jobs[i].cfg.explore);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(curve_of(results[i]));
  }
  std::vector<Series> series;
  for (const auto& key : order) series.push_back({key + " (median)", median_curve(groups[key])});
  std::filesystem::create_directories(out);
  write_file(out / "summary.csv", summary_csv(rows));
  write_file(out / "curves.svg", curves_svg(series));
  return rows;
}

}  // namespace geaps::report
