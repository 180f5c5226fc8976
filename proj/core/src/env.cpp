#include "geaps/env.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace geaps::env {

Cell neighbor(Cell c, Move m) {
  switch (m) {
    case Move::Up:
      return {c.x, c.y + 1};
    case Move::Right:
      return {c.x + 1, c.y};
    case Move::Down:
      return {c.x, c.y - 1};
    case Move::Left:
      return {c.x - 1, c.y};
  }
  return c;
}

Vec2 unit_vector(Move m) {
  const Cell n = neighbor({0, 0}, m);
  return to_vec(n);
}

MazeSpec MazeSpec::open(int width, int height, Cell start) {
  MazeSpec m;
  m.width = std::max(1, width);
  m.height = std::max(1, height);
  m.east_walls.assign(static_cast<std::size_t>((m.width - 1) * m.height), 0);
  m.north_walls.assign(static_cast<std::size_t>(m.width * (m.height - 1)), 0);
  m.start_cell = start;
  m.desired_region = {{m.width - 1 - start.x, m.height - 1 - start.y}};
  return m;
}

bool MazeSpec::blocked(Cell c, Move m) const {
  const Cell n = neighbor(c, m);
  if (!in_bounds(c) || !in_bounds(n)) return true;
  switch (m) {
    case Move::Right:
      return east_walls[static_cast<std::size_t>(c.y * (width - 1) + c.x)] != 0;
    case Move::Left:
      return east_walls[static_cast<std::size_t>(n.y * (width - 1) + n.x)] != 0;
    case Move::Up:
      return north_walls[static_cast<std::size_t>(c.y * width + c.x)] != 0;
    case Move::Down:
      return north_walls[static_cast<std::size_t>(n.y * width + n.x)] != 0;
  }
  return true;
}

void MazeSpec::set_wall(Cell c, Move m, bool wall) {
  const Cell n = neighbor(c, m);
  if (!in_bounds(c) || !in_bounds(n)) return;
  const std::uint8_t v = wall ? 1 : 0;
  switch (m) {
    case Move::Right:
      east_walls[static_cast<std::size_t>(c.y * (width - 1) + c.x)] = v;
      break;
    case Move::Left:
      east_walls[static_cast<std::size_t>(n.y * (width - 1) + n.x)] = v;
      break;
    case Move::Up:
      north_walls[static_cast<std::size_t>(c.y * width + c.x)] = v;
      break;
    case Move::Down:
      north_walls[static_cast<std::size_t>(n.y * width + n.x)] = v;
      break;
  }
}

std::size_t MazeSpec::interior_wall_count() const {
  return static_cast<std::size_t>(std::count(east_walls.begin(), east_walls.end(), 1) +
                                  std::count(north_walls.begin(), north_walls.end(), 1));
}

void GAMDPSpec::validate() const {
  if (horizon <= 0) throw InvalidParameter("horizon must be positive");
  if (!(discount > 0.0 && discount <= 1.0)) throw InvalidParameter("discount must lie in (0, 1]");
  if (!(max_displacement > 0.0)) throw InvalidParameter("max_displacement must be positive");
}

namespace {

MazeSpec carve(Rng& rng, int width, int height, Cell root, double loop_prob) {
  MazeSpec m = MazeSpec::open(width, height, root);
  std::fill(m.east_walls.begin(), m.east_walls.end(), 1);
  std::fill(m.north_walls.begin(), m.north_walls.end(), 1);

  std::vector<std::uint8_t> visited(static_cast<std::size_t>(m.num_cells()), 0);
  std::vector<Cell> stack{root};
  visited[static_cast<std::size_t>(m.cell_index(root))] = 1;
  while (!stack.empty()) {
    const Cell cur = stack.back();
    std::array<Move, kNumMoves> options{};
    std::size_t n_options = 0;
    for (Move mv : kAllMoves) {
      const Cell nb = neighbor(cur, mv);
      if (m.in_bounds(nb) && !visited[static_cast<std::size_t>(m.cell_index(nb))]) {
        options[n_options++] = mv;
      }
    }
    if (n_options == 0) {
      stack.pop_back();
      continue;
    }
    const Move mv = options[rng.uniform_index(n_options)];
    const Cell nb = neighbor(cur, mv);
    m.set_wall(cur, mv, false);
    visited[static_cast<std::size_t>(m.cell_index(nb))] = 1;
    stack.push_back(nb);
  }

  if (loop_prob > 0.0) {
    for (auto& w : m.east_walls) {
      if (w && rng.bernoulli(loop_prob)) w = 0;
    }
    for (auto& w : m.north_walls) {
      if (w && rng.bernoulli(loop_prob)) w = 0;
    }
  }
  return m;
}

}  // namespace

MazeSpec generate_maze(std::uint64_t seed, int width, int height, double loop_prob) {
  width = std::max(1, width);
  height = std::max(1, height);
  loop_prob = std::clamp(loop_prob, 0.0, 1.0);
  Rng rng(seed);
  MazeSpec m = carve(rng, width, height, {0, 0}, loop_prob);
  m.start_cell = {0, 0};
  m.desired_region = {{width - 1, height - 1}};
  return m;
}

std::vector<MazeSpec> generate_pretrain_suite(std::uint64_t seed, int count, int size) {
  if (size < 3) throw InvalidParameter("pre-training mazes need size >= 3");
  if (count < 0) throw InvalidParameter("suite count must be non-negative");
  Rng rng(seed);
  const Cell centre{size / 2, size / 2};
  std::vector<MazeSpec> suite;
  suite.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(suite.size()) < count) {
    // Wall density varies per maze: from near-perfect mazes to fully open.
    const double loop_prob = rng.uniform(0.25, 1.0);
    MazeSpec m = carve(rng, size, size, centre, loop_prob);
    m.start_cell = centre;
    m.desired_region = {{size - 1, size - 1}};
    if (std::find(suite.begin(), suite.end(), m) == suite.end()) suite.push_back(std::move(m));
  }
  return suite;
}

EnvState reset(const GAMDPSpec& spec) { return state_at(spec, spec.maze.start_cell, 0); }

EnvState state_at(const GAMDPSpec& spec, Cell c, int step_index) {
  return {goal_of_cell(spec.maze, c), step_index};
}

EnvState step(const EnvState& state, Move action, const GAMDPSpec& spec) {
  if (state.step_index >= spec.horizon) throw EpisodeExhausted("step past the episode horizon");
  if (spec.maze.continuous) {
    return step_continuous(state, spec.max_displacement * unit_vector(action), spec);
  }
  const Cell c = cell_of(state.position);
  EnvState next = state;
  if (!spec.maze.blocked(c, action)) next.position = to_vec(neighbor(c, action));
  next.step_index += 1;
  return next;
}

EnvState step_continuous(const EnvState& state, Vec2 displacement, const GAMDPSpec& spec) {
  if (state.step_index >= spec.horizon) throw EpisodeExhausted("step past the episode horizon");
  const double len = displacement.norm();
  if (len > spec.max_displacement && len > 0.0) {
    displacement = (spec.max_displacement / len) * displacement;
  }
  const MazeSpec& maze = spec.maze;
  Vec2 p = state.position;

  // x axis
  {
    const Cell c = cell_of(p);
    double nx = p.x + displacement.x;
    if (nx >= c.x + 1.0 && maze.blocked(c, Move::Right)) {
      nx = std::nextafter(c.x + 1.0, static_cast<double>(c.x));
    } else if (nx < c.x && maze.blocked(c, Move::Left)) {
      nx = c.x;
    }
    p.x = nx;
  }
  // y axis, from the cell reached along x
  {
    const Cell c = cell_of(p);
    double ny = p.y + displacement.y;
    if (ny >= c.y + 1.0 && maze.blocked(c, Move::Up)) {
      ny = std::nextafter(c.y + 1.0, static_cast<double>(c.y));
    } else if (ny < c.y && maze.blocked(c, Move::Down)) {
      ny = c.y;
    }
    p.y = ny;
  }
  EnvState next = state;
  next.position = p;
  next.step_index += 1;
  return next;
}

AgentObs agent_obs(const EnvState& state, const GAMDPSpec& spec) {
  const Cell c = cell_of(state.position);
  AgentObs obs;
  for (Move m : kAllMoves) {
    if (spec.maze.blocked(c, m)) obs.wall_mask |= static_cast<std::uint8_t>(1u << static_cast<int>(m));
  }
  if (spec.maze.continuous) {
    obs.offset = {state.position.x - c.x, state.position.y - c.y};
  }
  return obs;
}

bool goal_reached(const MazeSpec& maze, Goal achieved, Goal goal) {
  if (maze.continuous) return (achieved - goal).norm() <= 0.5;
  return cell_of(achieved) == cell_of(goal);
}

Goal goal_of_cell(const MazeSpec& maze, Cell c) {
  if (maze.continuous) return {c.x + 0.5, c.y + 0.5};
  return to_vec(c);
}

std::vector<int> distances_from(const MazeSpec& maze, Cell from) {
  std::vector<int> dist(static_cast<std::size_t>(maze.num_cells()), -1);
  if (!maze.in_bounds(from)) return dist;
  std::deque<Cell> queue{from};
  dist[static_cast<std::size_t>(maze.cell_index(from))] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (Move m : kAllMoves) {
      if (maze.blocked(c, m)) continue;
      const Cell n = neighbor(c, m);
      auto& d = dist[static_cast<std::size_t>(maze.cell_index(n))];
      if (d < 0) {
        d = dist[static_cast<std::size_t>(maze.cell_index(c))] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

// --- text format -------------------------------------------------------------

std::string to_text(const MazeSpec& maze) {
  const int cols = 2 * maze.width + 1;
  const int rows = 2 * maze.height + 1;
  std::vector<std::string> grid(static_cast<std::size_t>(rows), std::string(static_cast<std::size_t>(cols), '#'));
  auto at = [&](int row, int col) -> char& {
    return grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
  };
  for (int y = 0; y < maze.height; ++y) {
    const int row = rows - 2 - 2 * y;
    for (int x = 0; x < maze.width; ++x) {
      const Cell c{x, y};
      const bool is_start = c == maze.start_cell;
      const bool is_goal = std::find(maze.desired_region.begin(), maze.desired_region.end(), c) !=
                           maze.desired_region.end();
      at(row, 2 * x + 1) = is_start && is_goal ? 'B' : is_start ? 'S' : is_goal ? 'G' : ' ';
      if (x + 1 < maze.width && !maze.blocked(c, Move::Right)) at(row, 2 * x + 2) = ' ';
      if (y + 1 < maze.height && !maze.blocked(c, Move::Up)) at(row - 1, 2 * x + 1) = ' ';
    }
  }
  std::ostringstream out;
  out << "maze " << maze.width << ' ' << maze.height << ' '
      << (maze.continuous ? "continuous" : "discrete") << '\n';
  for (const auto& line : grid) out << line << '\n';
  return out.str();
}

MazeSpec parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string header_word, kind;
  int width = 0, height = 0;
  std::string header;
  if (!std::getline(in, header)) throw InvalidParameter("maze text: missing header");
  std::istringstream hs(header);
  if (!(hs >> header_word >> width >> height >> kind) || header_word != "maze" || width < 1 ||
      height < 1 || (kind != "discrete" && kind != "continuous")) {
    throw InvalidParameter("maze text: malformed header '" + header + "'");
  }
  const int cols = 2 * width + 1;
  const int rows = 2 * height + 1;
  std::vector<std::string> grid;
  std::string line;
  while (static_cast<int>(grid.size()) < rows && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != cols) {
      throw InvalidParameter("maze text: row " + std::to_string(grid.size()) + " has width " +
                             std::to_string(line.size()) + ", expected " + std::to_string(cols));
    }
    grid.push_back(line);
  }
  if (static_cast<int>(grid.size()) != rows) throw InvalidParameter("maze text: too few rows");

  MazeSpec m = MazeSpec::open(width, height, {0, 0});
  m.continuous = kind == "continuous";
  m.desired_region.clear();
  bool have_start = false;
  for (int y = 0; y < height; ++y) {
    const int row = rows - 2 - 2 * y;
    for (int x = 0; x < width; ++x) {
      const Cell c{x, y};
      const char ch = grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(2 * x + 1)];
      if (ch == 'S' || ch == 'B') {
        if (have_start) throw InvalidParameter("maze text: more than one start cell");
        m.start_cell = c;
        have_start = true;
      }
      if (ch == 'G' || ch == 'B') m.desired_region.push_back(c);
      if (ch != ' ' && ch != 'S' && ch != 'G' && ch != 'B') {
        throw InvalidParameter(std::string("maze text: unexpected cell character '") + ch + "'");
      }
      if (x + 1 < width) {
        m.set_wall(c, Move::Right, grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(2 * x + 2)] == '#');
      }
      if (y + 1 < height) {
        m.set_wall(c, Move::Up, grid[static_cast<std::size_t>(row - 1)][static_cast<std::size_t>(2 * x + 1)] == '#');
      }
    }
  }
  if (!have_start) throw InvalidParameter("maze text: no start cell");
  if (m.desired_region.empty()) throw InvalidParameter("maze text: no desired region");
  return m;
}

}  // namespace geaps::env
