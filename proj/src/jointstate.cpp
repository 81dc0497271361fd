#include "marrt/jointstate.hpp"

#include <cmath>
#include <string>

#include "marrt/errors.hpp"
#include "marrt/rng.hpp"

namespace marrt {

std::size_t JointStateHash::operator()(const JointState& s) const noexcept {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (Cell c : s)
    h = mix64(h ^ ((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x)) << 32) |
                   static_cast<std::uint32_t>(c.y)));
  return static_cast<std::size_t>(h);
}

void JointPath::push(std::span<const Cell> s) {
  if (agents_ == 0 && cells_.empty()) agents_ = s.size();
  if (s.size() != agents_)
    throw ArityError("joint path step has " + std::to_string(s.size()) + " agents, expected " +
                     std::to_string(agents_));
  cells_.insert(cells_.end(), s.begin(), s.end());
}

void JointPath::append(const JointPath& tail) {
  if (tail.empty()) return;
  if (empty()) {
    *this = tail;
    return;
  }
  if (tail.agents_ != agents_) throw ArityError("joint path arity mismatch on append");
  cells_.insert(cells_.end(), tail.cells_.begin() + static_cast<std::ptrdiff_t>(agents_),
                tail.cells_.end());
}

std::vector<Cell> JointPath::agent_path(std::size_t agent) const {
  std::vector<Cell> out;
  out.reserve(steps());
  for (std::size_t t = 0; t < steps(); ++t) out.push_back(cell(t, agent));
  return out;
}

bool collision_free(std::span<const Cell> from, std::span<const Cell> to) {
  if (from.size() != to.size())
    throw ArityError("collision check on states of different arity");
  const std::size_t n = to.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (to[i] == to[j]) return false;
      if (to[i] == from[j] && to[j] == from[i]) return false;
    }
  }
  return true;
}

Cost path_cost(const JointPath& path, const JointState& goals) {
  if (path.empty()) return 0;
  if (path.agents() != goals.size()) throw ArityError("goal arity does not match path");
  const std::size_t last = path.steps() - 1;
  Cost total = 0;
  for (std::size_t i = 0; i < path.agents(); ++i) {
    std::size_t t = last;
    if (path.cell(last, i) == goals[i]) {
      while (t > 0 && path.cell(t - 1, i) == goals[i]) --t;
    }
    total += static_cast<Cost>(t);
  }
  return total;
}

double joint_distance_sq(std::span<const Cell> a, std::span<const Cell> b) {
  if (a.size() != b.size()) throw ArityError("joint distance on states of different arity");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dx = a[i].x - b[i].x;
    const double dy = a[i].y - b[i].y;
    sum += dx * dx + dy * dy;
  }
  return sum;
}

double joint_distance(std::span<const Cell> a, std::span<const Cell> b) {
  return std::sqrt(joint_distance_sq(a, b));
}

bool pairwise_distinct(std::span<const Cell> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j)
      if (cells[i] == cells[j]) return false;
  return true;
}

}  // namespace marrt
