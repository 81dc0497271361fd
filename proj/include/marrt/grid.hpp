#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

#include "marrt/rng.hpp"

namespace marrt {

struct Cell {
  int x = 0;  // column
  int y = 0;  // row
  auto operator<=>(const Cell&) const = default;
};

inline int manhattan(Cell a, Cell b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

inline int chebyshev(Cell a, Cell b) {
  const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx > dy ? dx : dy;
}

// Square 4-connected grid with a static obstacle set. Immutable once built.
class GridWorld {
 public:
  GridWorld() = default;
  GridWorld(int size, std::vector<Cell> obstacles, std::uint64_t seed = 0);

  int size() const { return size_; }
  std::uint64_t seed() const { return seed_; }
  // Sorted by (x, y).
  const std::vector<Cell>& obstacles() const { return obstacles_; }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < size_ && c.y < size_;
  }
  bool is_obstacle(Cell c) const { return blocked_[index(c)] != 0; }
  bool is_free(Cell c) const { return in_bounds(c) && !is_obstacle(c); }

  int index(Cell c) const { return c.y * size_ + c.x; }
  Cell cell(int idx) const { return {idx % size_, idx / size_}; }
  int cell_count() const { return size_ * size_; }

  // Row-major order.
  const std::vector<Cell>& free_cells() const { return free_; }

  // Geometry only; the generator seed is provenance, not content.
  bool operator==(const GridWorld& o) const {
    return size_ == o.size_ && obstacles_ == o.obstacles_;
  }

 private:
  int size_ = 0;
  std::vector<Cell> obstacles_;
  std::vector<std::uint8_t> blocked_;
  std::vector<Cell> free_;
  std::uint64_t seed_ = 0;
};

struct Instance {
  GridWorld world;
  std::vector<Cell> starts;
  std::vector<Cell> goals;
  std::uint64_t seed = 0;

  std::size_t agents() const { return starts.size(); }
  bool operator==(const Instance&) const = default;
};

// Stay first, then N, E, S, W (north is y - 1). Fixed order drives every
// argmin tie-break downstream.
std::vector<Cell> children(const GridWorld& world, Cell cell);

// Appends into `out` (cleared first); avoids allocation in hot loops.
void children_into(const GridWorld& world, Cell cell, std::vector<Cell>& out);

GridWorld generate_world(int size, double obstacle_ratio, std::uint64_t seed);

struct InstanceOptions {
  int attempt_cap = 10000;
};

Instance generate_instance(const GridWorld& world, int n_agents, std::uint64_t seed,
                           const InstanceOptions& opts = {});

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

// Exact move counts to `goal`, indexed by GridWorld::index. Obstacles and
// unreachable cells hold kUnreachable.
class DistanceField {
 public:
  DistanceField() = default;
  DistanceField(int size, std::vector<int> dist) : size_(size), dist_(std::move(dist)) {}

  int at(Cell c) const { return dist_[c.y * size_ + c.x]; }
  bool reachable(Cell c) const { return at(c) != kUnreachable; }
  const std::vector<int>& raw() const { return dist_; }

 private:
  int size_ = 0;
  std::vector<int> dist_;
};

DistanceField bfs_distance_field(const GridWorld& world, Cell goal);

// Structural checks only (bounds, obstacles, distinctness); throws
// InfeasibleInstance describing the first problem found.
void check_instance(const Instance& instance);

}  // namespace marrt
