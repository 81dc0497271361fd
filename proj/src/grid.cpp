#include "marrt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "marrt/errors.hpp"

namespace marrt {

namespace {

std::string cell_str(Cell c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

void require_free(const GridWorld& world, Cell c) {
  if (!world.in_bounds(c)) throw InvalidCell("cell out of bounds: " + cell_str(c));
  if (world.is_obstacle(c)) throw InvalidCell("cell is an obstacle: " + cell_str(c));
}

// Connected-component label per cell index; -1 for obstacles.
std::vector<int> component_labels(const GridWorld& world) {
  std::vector<int> label(world.cell_count(), -1);
  std::vector<Cell> nbrs;
  int next = 0;
  for (Cell c : world.free_cells()) {
    if (label[world.index(c)] >= 0) continue;
    std::deque<Cell> open{c};
    label[world.index(c)] = next;
    while (!open.empty()) {
      const Cell u = open.front();
      open.pop_front();
      children_into(world, u, nbrs);
      for (Cell v : nbrs) {
        int& l = label[world.index(v)];
        if (l < 0) {
          l = next;
          open.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

GridWorld::GridWorld(int size, std::vector<Cell> obstacles, std::uint64_t seed)
    : size_(size), obstacles_(std::move(obstacles)), seed_(seed) {
  if (size <= 0) throw std::invalid_argument("grid size must be positive");
  std::sort(obstacles_.begin(), obstacles_.end());
  obstacles_.erase(std::unique(obstacles_.begin(), obstacles_.end()), obstacles_.end());
  blocked_.assign(static_cast<std::size_t>(size) * size, 0);
  for (Cell c : obstacles_) {
    if (!in_bounds(c)) throw InvalidCell("obstacle out of bounds: " + cell_str(c));
    blocked_[index(c)] = 1;
  }
  free_.reserve(blocked_.size() - obstacles_.size());
  for (int i = 0; i < cell_count(); ++i)
    if (!blocked_[i]) free_.push_back(cell(i));
}

void children_into(const GridWorld& world, Cell cell, std::vector<Cell>& out) {
  require_free(world, cell);
  out.clear();
  out.push_back(cell);
  const Cell cand[4] = {{cell.x, cell.y - 1}, {cell.x + 1, cell.y},
                        {cell.x, cell.y + 1}, {cell.x - 1, cell.y}};
  for (Cell c : cand)
    if (world.is_free(c)) out.push_back(c);
}

std::vector<Cell> children(const GridWorld& world, Cell cell) {
  std::vector<Cell> out;
  children_into(world, cell, out);
  return out;
}

GridWorld generate_world(int size, double obstacle_ratio, std::uint64_t seed) {
  if (!(obstacle_ratio >= 0.0 && obstacle_ratio < 1.0))
    throw std::invalid_argument("obstacle ratio must lie in [0, 1)");
  if (size <= 0) throw std::invalid_argument("grid size must be positive");
  const int total = size * size;
  const auto count = static_cast<int>(std::llround(obstacle_ratio * total));

  // Partial Fisher-Yates over cell indices.
  std::vector<int> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  std::vector<Cell> obstacles;
  obstacles.reserve(count);
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_index(total - i));
    std::swap(idx[i], idx[j]);
    obstacles.push_back({idx[i] % size, idx[i] / size});
  }
  return GridWorld(size, std::move(obstacles), seed);
}

Instance generate_instance(const GridWorld& world, int n_agents, std::uint64_t seed,
                           const InstanceOptions& opts) {
  if (n_agents <= 0) throw std::invalid_argument("agent count must be positive");
  const auto& free = world.free_cells();
  if (free.size() < 2 * static_cast<std::size_t>(n_agents))
    throw InfeasibleInstance("world has fewer than 2n free cells");

  const std::vector<int> label = component_labels(world);
  Rng rng(seed);
  int draws = 0;
  auto draw = [&]() -> Cell {
    if (++draws > opts.attempt_cap)
      throw InfeasibleInstance("no valid instance within " +
                               std::to_string(opts.attempt_cap) + " draws");
    return free[rng.uniform_index(free.size())];
  };
  auto taken = [](const std::vector<Cell>& v, Cell c) {
    return std::find(v.begin(), v.end(), c) != v.end();
  };

  Instance inst;
  inst.world = world;
  inst.seed = seed;
  for (int i = 0; i < n_agents; ++i) {
    // The pair is redrawn together: a start stranded in a small pocket would
    // otherwise exhaust the draw cap.
    Cell s, g;
    do {
      s = draw();
      g = draw();
    } while (taken(inst.starts, s) || g == s || taken(inst.goals, g) ||
             label[world.index(g)] != label[world.index(s)]);
    inst.starts.push_back(s);
    inst.goals.push_back(g);
  }
  return inst;
}

DistanceField bfs_distance_field(const GridWorld& world, Cell goal) {
  require_free(world, goal);
  std::vector<int> dist(world.cell_count(), kUnreachable);
  std::deque<Cell> open{goal};
  dist[world.index(goal)] = 0;
  std::vector<Cell> nbrs;
  while (!open.empty()) {
    const Cell u = open.front();
    open.pop_front();
    const int du = dist[world.index(u)];
    children_into(world, u, nbrs);
    for (Cell v : nbrs) {
      int& dv = dist[world.index(v)];
      if (dv == kUnreachable) {
        dv = du + 1;
        open.push_back(v);
      }
    }
  }
  return DistanceField(world.size(), std::move(dist));
}

void check_instance(const Instance& inst) {
  const auto& w = inst.world;
  if (inst.starts.empty()) throw InfeasibleInstance("instance has no agents");
  if (inst.starts.size() != inst.goals.size())
    throw InfeasibleInstance("start and goal counts differ");
  auto check_list = [&](const std::vector<Cell>& cells, const char* what) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!w.is_free(cells[i]))
        throw InfeasibleInstance(std::string(what) + " " + cell_str(cells[i]) +
                                 " is out of bounds or blocked");
      for (std::size_t j = 0; j < i; ++j)
        if (cells[i] == cells[j])
          throw InfeasibleInstance(std::string(what) + "s are not pairwise distinct");
    }
  };
  check_list(inst.starts, "start");
  check_list(inst.goals, "goal");
}

}  // namespace marrt
