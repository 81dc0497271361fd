#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "marrt/grid.hpp"

namespace marrt {

using Cost = std::int64_t;

// One cell per agent; a tree node's coordinate in the joint space.
class JointState {
 public:
  JointState() = default;
  explicit JointState(std::vector<Cell> cells) : cells_(std::move(cells)) {}
  JointState(std::initializer_list<Cell> cells) : cells_(cells) {}
  explicit JointState(std::span<const Cell> cells) : cells_(cells.begin(), cells.end()) {}

  std::size_t size() const { return cells_.size(); }
  const Cell& operator[](std::size_t i) const { return cells_[i]; }
  Cell& operator[](std::size_t i) { return cells_[i]; }
  auto begin() const { return cells_.begin(); }
  auto end() const { return cells_.end(); }
  std::span<const Cell> cells() const { return cells_; }
  const std::vector<Cell>& vec() const { return cells_; }

  bool operator==(const JointState&) const = default;

 private:
  std::vector<Cell> cells_;
};

struct JointStateHash {
  std::size_t operator()(const JointState& s) const noexcept;
};

// Synchronized per-agent cell sequences, stored step-major in one buffer.
// Step 0 is the origin.
class JointPath {
 public:
  JointPath() = default;
  explicit JointPath(const JointState& origin) : agents_(origin.size()) { push(origin.cells()); }

  std::size_t agents() const { return agents_; }
  std::size_t steps() const { return agents_ == 0 ? 0 : cells_.size() / agents_; }
  bool empty() const { return cells_.empty(); }
  // Number of timesteps (transitions).
  std::size_t duration() const { return steps() == 0 ? 0 : steps() - 1; }

  std::span<const Cell> at(std::size_t t) const {
    return {cells_.data() + t * agents_, agents_};
  }
  Cell cell(std::size_t t, std::size_t agent) const { return cells_[t * agents_ + agent]; }
  JointState state(std::size_t t) const { return JointState(at(t)); }
  std::span<const Cell> back() const { return at(steps() - 1); }

  void push(std::span<const Cell> s);
  // Appends `tail` minus its first step, which must equal back().
  void append(const JointPath& tail);

  // Per-agent cell sequence.
  std::vector<Cell> agent_path(std::size_t agent) const;

  const std::vector<Cell>& flat() const { return cells_; }
  bool operator==(const JointPath&) const = default;

 private:
  std::size_t agents_ = 0;
  std::vector<Cell> cells_;
};

// False on a vertex conflict in `to` or a pairwise swap between `from` and
// `to`. Moving into a cell vacated in the same step is allowed.
bool collision_free(std::span<const Cell> from, std::span<const Cell> to);
inline bool collision_free(const JointState& from, const JointState& to) {
  return collision_free(from.cells(), to.cells());
}

// Sum over agents of the timestep of each agent's final arrival at its goal;
// an agent that never ends on its goal contributes the full duration.
Cost path_cost(const JointPath& path, const JointState& goals);

// Euclidean norm over the concatenated 2n coordinates.
double joint_distance(std::span<const Cell> a, std::span<const Cell> b);
inline double joint_distance(const JointState& a, const JointState& b) {
  return joint_distance(a.cells(), b.cells());
}
double joint_distance_sq(std::span<const Cell> a, std::span<const Cell> b);

// True when all cells are pairwise distinct.
bool pairwise_distinct(std::span<const Cell> cells);

}  // namespace marrt
