#pragma once

#include <memory>
#include <unordered_map>

#include "marrt/grid.hpp"
#include "marrt/jointstate.hpp"

namespace marrt {

enum class HeuristicMode { euclidean, bfs };

// h(cell, target). Euclidean by default; the BFS mode memoizes one distance
// field per target cell, so an instance is not safe to share across threads.
class Heuristic {
 public:
  explicit Heuristic(const GridWorld& world, HeuristicMode mode = HeuristicMode::euclidean)
      : world_(&world), mode_(mode) {}

  HeuristicMode mode() const { return mode_; }

  // Orders like the true heuristic; Euclidean is compared squared.
  std::int64_t rank(Cell cell, Cell target) const;

 private:
  const GridWorld* world_;
  HeuristicMode mode_;
  mutable std::unordered_map<int, DistanceField> fields_;
};

// Child of `cell` minimizing h(., target); ties go to the earlier child in
// [stay, N, E, S, W].
Cell heuristic_step(const GridWorld& world, Cell cell, Cell target, const Heuristic& h);
Cell heuristic_step(const GridWorld& world, Cell cell, Cell target);

struct SteerResult {
  JointState reached;
  JointPath path;
  Cost cost = 0;
  bool reached_target = false;
};

struct GreedyOptions {
  const Heuristic* heuristic = nullptr;  // Euclidean when null
  // Agents staying on their own cell here accrue no cost. Defaults to the
  // steering target `d`.
  const JointState* cost_goals = nullptr;
};

// Synchronized greedy walk from s toward d: every timestep each agent takes
// its heuristic_step, then the joint move is collision-checked. Stops on
// arrival, on the first colliding step (returning the prefix before it), when
// no agent can move any more, or once the accumulated cost exceeds c_max.
SteerResult greedy_connect(const GridWorld& world, const JointState& s, const JointState& d,
                           Cost c_max, const GreedyOptions& opts = {});

// Lower bound on the cost of any greedy walk from `from` that exactly reaches
// `to`, priced against `cost_goals`.
Cost greedy_cost_lower_bound(std::span<const Cell> from, std::span<const Cell> to,
                             std::span<const Cell> cost_goals);

}  // namespace marrt
