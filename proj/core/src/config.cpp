#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "geaps/runner.hpp"

namespace geaps::runner {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const char* first = v.data();
  const char* last = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || v.empty()) {
    throw ConfigError("bad value '" + v + "' for " + key);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad boolean '" + v + "' for " + key);
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
std::string fmt_int(T v) {
  return std::to_string(v);
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define GEAPS_NUM(KEY, MEMBER, TYPE)                                                              \
  Field {                                                                                         \
    KEY, [](ExperimentConfig& c, const std::string& k, const std::string& v) {                    \
      c.MEMBER = parse_number<TYPE>(k, v);                                                        \
    },                                                                                            \
        [](const ExperimentConfig& c) {                                                           \
          if constexpr (std::is_floating_point_v<TYPE>) return fmt(c.MEMBER);                     \
          else return fmt_int(c.MEMBER);                                                          \
        }                                                                                         \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      {"env.maze_file", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.maze_file = v; },
       [](const ExperimentConfig& c) { return quote(c.maze_file); }},
      GEAPS_NUM("env.seed", maze_seed, std::uint64_t),
      GEAPS_NUM("env.width", maze_width, int),
      GEAPS_NUM("env.height", maze_height, int),
      GEAPS_NUM("env.loop_prob", maze_loop_prob, double),
      GEAPS_NUM("env.horizon", horizon, int),
      {"env.continuous",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.continuous = parse_bool(k, v); },
       [](const ExperimentConfig& c) { return std::string(c.continuous ? "true" : "false"); }},

      {"subgoal.strategy",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         try {
           c.subgoal = subgoal::parse_strategy(v);
         } catch (const InvalidParameter& e) {
           throw ConfigError(e.what());
         }
       },
       [](const ExperimentConfig& c) { return subgoal::to_string(c.subgoal); }},
      {"subgoal.density", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.density = v; },
       [](const ExperimentConfig& c) { return c.density; }},
      GEAPS_NUM("subgoal.bandwidth", bandwidth, double),
      GEAPS_NUM("subgoal.density_samples", density_samples, std::size_t),
      GEAPS_NUM("subgoal.omega_b", omega_b, double),
      GEAPS_NUM("subgoal.omega_kl_samples", omega_kl_samples, std::size_t),
      GEAPS_NUM("subgoal.skew_exponent", skew_exponent, double),
      GEAPS_NUM("subgoal.goid_min", goid_min, double),
      GEAPS_NUM("subgoal.goid_max", goid_max, double),
      GEAPS_NUM("subgoal.goid_window", goid_window, std::size_t),
      GEAPS_NUM("subgoal.goid_discovery", goid_discovery, double),

      {"explore.strategy",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         try {
           c.explore = explore::parse_strategy(v);
         } catch (const InvalidParameter& e) {
           throw ConfigError(e.what());
         }
       },
       [](const ExperimentConfig& c) { return explore::to_string(c.explore); }},
      GEAPS_NUM("explore.skill_horizon", skill_horizon, int),
      {"explore.skills", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.skills_file = v; },
       [](const ExperimentConfig& c) { return quote(c.skills_file); }},
      {"explore.on_timeout",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.explore_on_timeout = parse_bool(k, v); },
       [](const ExperimentConfig& c) { return std::string(c.explore_on_timeout ? "true" : "false"); }},
      GEAPS_NUM("explore.pretrain_seed", pretrain_seed, std::uint64_t),
      GEAPS_NUM("explore.pretrain_iterations", pretrain_iterations, int),

      GEAPS_NUM("agent.lr", lr, double),
      GEAPS_NUM("agent.gamma", gamma, double),
      GEAPS_NUM("agent.epsilon", epsilon, double),
      {"agent.relabel",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         try {
           agent::RelabelRatios::parse(v);
         } catch (const InvalidParameter& e) {
           throw ConfigError(std::string(e.what()) + " for " + k);
         }
         c.relabel = v;
       },
       [](const ExperimentConfig& c) { return quote(c.relabel); }},
      GEAPS_NUM("agent.batch_size", batch_size, std::size_t),
      GEAPS_NUM("agent.updates_per_step", updates_per_step, int),
      GEAPS_NUM("agent.buffer_capacity", buffer_capacity, std::size_t),

      GEAPS_NUM("run.total_steps", total_steps, std::int64_t),
      GEAPS_NUM("run.eval_every", eval_every, std::int64_t),
      GEAPS_NUM("run.eval_episodes", eval_episodes, int),
      GEAPS_NUM("run.seed", seed, std::uint64_t),
  };
  return table;
}

#undef GEAPS_NUM

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.key);
  return out;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  std::string value = trim(raw);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
  }
  if (value.find('"') != std::string::npos) throw ConfigError("unbalanced quote in value for " + key);
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    }
    try {
      set_config_value(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  return out;
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  if (maze_file.empty()) {
    need(maze_width >= 2 && maze_height >= 2, "env.width and env.height must be at least 2");
    need(maze_loop_prob >= 0.0 && maze_loop_prob <= 1.0, "env.loop_prob must lie in [0, 1]");
  } else {
    need(std::filesystem::exists(maze_file), "env.maze_file not found: " + maze_file);
  }
  need(horizon >= 1, "env.horizon must be positive");
  need(density == "kde" || density == "histogram", "subgoal.density must be kde or histogram");
  need(bandwidth > 0.0, "subgoal.bandwidth must be positive");
  need(density_samples >= 1, "subgoal.density_samples must be positive");
  need(omega_kl_samples >= 1, "subgoal.omega_kl_samples must be positive");
  need(goid_min >= 0.0 && goid_min <= goid_max && goid_max <= 1.0, "subgoal.goid_min/max must satisfy 0 <= min <= max <= 1");
  need(goid_window >= 1, "subgoal.goid_window must be positive");
  need(goid_discovery >= 0.0 && goid_discovery <= 1.0, "subgoal.goid_discovery must lie in [0, 1]");
  need(skill_horizon >= 1 && skill_horizon < horizon, "explore.skill_horizon must lie in [1, env.horizon)");
  need(skills_file.empty() || std::filesystem::exists(skills_file), "explore.skills not found: " + skills_file);
  need(pretrain_iterations >= 1, "explore.pretrain_iterations must be positive");
  need(lr >= 0.0 && lr <= 1.0, "agent.lr must lie in [0, 1]");
  need(gamma > 0.0 && gamma < 1.0, "agent.gamma must lie in (0, 1)");
  need(epsilon >= 0.0 && epsilon <= 1.0, "agent.epsilon must lie in [0, 1]");
  try {
    agent::RelabelRatios::parse(relabel);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  need(batch_size >= 1, "agent.batch_size must be positive");
  need(updates_per_step >= 0, "agent.updates_per_step must be non-negative");
  need(buffer_capacity >= static_cast<std::size_t>(horizon), "agent.buffer_capacity must hold one episode");
  need(total_steps > 0, "run.total_steps must be positive");
  need(eval_every > 0, "run.eval_every must be positive");
  need(eval_episodes >= 1, "run.eval_episodes must be positive");
}

}  // namespace geaps::runner
