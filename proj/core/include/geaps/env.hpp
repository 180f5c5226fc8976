#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geaps/common.hpp"

namespace geaps::env {

/// Cardinal moves. +y is "up"; cell (0, 0) is the bottom-left corner.
enum class Move : std::uint8_t { Up = 0, Right = 1, Down = 2, Left = 3 };
inline constexpr int kNumMoves = 4;
inline constexpr std::array<Move, kNumMoves> kAllMoves{Move::Up, Move::Right, Move::Down,
                                                       Move::Left};

Cell neighbor(Cell c, Move m);
Vec2 unit_vector(Move m);

/// Maze layout. Walls live on the edges between cells; every cell is free.
/// The outer boundary is always closed.
struct MazeSpec {
  int width = 1;
  int height = 1;
  /// east_walls[y * (width - 1) + x]: wall between (x, y) and (x + 1, y).
  std::vector<std::uint8_t> east_walls;
  /// north_walls[y * width + x]: wall between (x, y) and (x, y + 1).
  std::vector<std::uint8_t> north_walls;
  Cell start_cell{};
  /// Support of the desired-goal distribution.
  std::vector<Cell> desired_region;
  bool continuous = false;

  static MazeSpec open(int width, int height, Cell start);

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
  }
  int num_cells() const { return width * height; }
  int cell_index(Cell c) const { return c.y * width + c.x; }
  Cell cell_at(int index) const { return {index % width, index / width}; }

  /// True when moving from `c` in direction `m` is blocked by a wall or the
  /// boundary.
  bool blocked(Cell c, Move m) const;
  /// Sets or clears an interior wall. Boundary edges are ignored.
  void set_wall(Cell c, Move m, bool wall);
  std::size_t interior_wall_count() const;

  friend bool operator==(const MazeSpec&, const MazeSpec&) = default;
};

struct GAMDPSpec {
  MazeSpec maze;
  int horizon = 50;
  double discount = 0.98;
  /// Largest displacement per step in the point maze, in cells.
  double max_displacement = 1.0;

  /// Throws InvalidParameter when horizon <= 0 or discount is outside (0, 1].
  void validate() const;
};

struct EnvState {
  Vec2 position{};
  int step_index = 0;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

/// Goal-independent local observation shared across mazes.
struct AgentObs {
  /// Bit i set when move i (Up, Right, Down, Left) is blocked.
  std::uint8_t wall_mask = 0;
  /// Position within the current cell, [0, 1)^2. Zero for grid mazes.
  Vec2 offset{};

  friend bool operator==(const AgentObs&, const AgentObs&) = default;
};

// --- generation --------------------------------------------------------------

/// Recursive-backtracker spanning tree from the bottom-left cell, then every
/// remaining interior wall is removed independently with probability
/// `loop_prob`. The desired region is the top-right cell.
MazeSpec generate_maze(std::uint64_t seed, int width, int height, double loop_prob);

/// `count` distinct size x size mazes whose start is the central cell.
/// Throws InvalidParameter when size < 3 or count < 0.
std::vector<MazeSpec> generate_pretrain_suite(std::uint64_t seed, int count, int size);

// --- dynamics ----------------------------------------------------------------

EnvState reset(const GAMDPSpec& spec);
EnvState state_at(const GAMDPSpec& spec, Cell c, int step_index = 0);

/// Grid step. In the point maze the move becomes a unit displacement scaled
/// by max_displacement. Throws EpisodeExhausted once step_index == horizon.
EnvState step(const EnvState& state, Move action, const GAMDPSpec& spec);

/// Point-maze step with a free 2-D displacement; its magnitude is clamped to
/// max_displacement and walls stop motion per axis (x first, then y).
EnvState step_continuous(const EnvState& state, Vec2 displacement, const GAMDPSpec& spec);

/// The goal-space projection: the position component of the state.
inline Goal achieved_goal(const EnvState& state) { return state.position; }

AgentObs agent_obs(const EnvState& state, const GAMDPSpec& spec);

/// Exact cell equality for grid mazes, Euclidean distance <= 0.5 for the
/// point maze.
bool goal_reached(const MazeSpec& maze, Goal achieved, Goal goal);

/// Goal at the position an agent occupies when standing in `c`.
Goal goal_of_cell(const MazeSpec& maze, Cell c);

/// BFS distances (in moves) from `from`; -1 for unreachable cells.
std::vector<int> distances_from(const MazeSpec& maze, Cell from);

// --- text format -------------------------------------------------------------

/// Plain-text layout: a header line `maze <w> <h> <discrete|continuous>`
/// followed by a (2h+1) x (2w+1) character grid, top row first. See README.
std::string to_text(const MazeSpec& maze);
MazeSpec parse_text(const std::string& text);

}  // namespace geaps::env
