#include "marrt/greedy.hpp"

#include <algorithm>

#include "marrt/errors.hpp"

namespace marrt {

std::int64_t Heuristic::rank(Cell cell, Cell target) const {
  if (mode_ == HeuristicMode::euclidean) {
    const std::int64_t dx = cell.x - target.x;
    const std::int64_t dy = cell.y - target.y;
    return dx * dx + dy * dy;
  }
  const int key = world_->index(target);
  auto it = fields_.find(key);
  if (it == fields_.end()) it = fields_.emplace(key, bfs_distance_field(*world_, target)).first;
  return it->second.at(cell);
}

Cell heuristic_step(const GridWorld& world, Cell cell, Cell target, const Heuristic& h) {
  if (!world.is_free(cell)) throw InvalidCell("heuristic step from a blocked cell");
  if (cell == target) return cell;
  Cell best = cell;
  std::int64_t best_h = h.rank(cell, target);
  const Cell cand[4] = {{cell.x, cell.y - 1}, {cell.x + 1, cell.y},
                        {cell.x, cell.y + 1}, {cell.x - 1, cell.y}};
  for (Cell c : cand) {
    if (!world.is_free(c)) continue;
    const std::int64_t hc = h.rank(c, target);
    if (hc < best_h) {
      best_h = hc;
      best = c;
    }
  }
  return best;
}

Cell heuristic_step(const GridWorld& world, Cell cell, Cell target) {
  return heuristic_step(world, cell, target, Heuristic(world));
}

SteerResult greedy_connect(const GridWorld& world, const JointState& s, const JointState& d,
                           Cost c_max, const GreedyOptions& opts) {
  if (s.size() != d.size()) throw ArityError("greedy_connect: start and target arity differ");
  const JointState& goals = opts.cost_goals ? *opts.cost_goals : d;
  if (goals.size() != s.size()) throw ArityError("greedy_connect: cost goal arity differs");
  const Heuristic euclid(world);
  const Heuristic& h = opts.heuristic ? *opts.heuristic : euclid;

  const std::size_t n = s.size();
  SteerResult out;
  out.path = JointPath(s);
  std::vector<Cell> x(s.begin(), s.end());
  std::vector<Cell> next(n);
  Cost c = 0;
  while (!std::equal(x.begin(), x.end(), d.begin()) && c <= c_max) {
    Cost step_cost = 0;
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = heuristic_step(world, x[i], d[i], h);
      const bool stays = next[i] == x[i];
      moved |= !stays;
      if (!(stays && x[i] == goals[i])) ++step_cost;
    }
    // Each agent's walk depends only on its own cell and target, so a step
    // where nobody moves would repeat forever.
    if (!moved) break;
    if (!collision_free(x, next)) break;
    c += step_cost;
    x.swap(next);
    out.path.push(x);
  }
  out.cost = c;
  out.reached = JointState(std::move(x));
  out.reached_target = out.reached == d;
  return out;
}

Cost greedy_cost_lower_bound(std::span<const Cell> from, std::span<const Cell> to,
                             std::span<const Cell> cost_goals) {
  int longest = 0;
  for (std::size_t i = 0; i < from.size(); ++i) longest = std::max(longest, manhattan(from[i], to[i]));
  Cost lb = 0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    // Agents ending off their goal pay for every timestep of the walk.
    lb += to[i] == cost_goals[i] ? manhattan(from[i], to[i]) : longest;
  }
  return lb;
}

}  // namespace marrt
