#include "marrt/validate.hpp"

#include <cstdlib>
#include <map>
#include <string>

namespace marrt {

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::empty_path: return "empty_path";
    case ViolationKind::arity: return "arity";
    case ViolationKind::wrong_start: return "wrong_start";
    case ViolationKind::wrong_goal: return "wrong_goal";
    case ViolationKind::out_of_bounds: return "out_of_bounds";
    case ViolationKind::obstacle: return "obstacle";
    case ViolationKind::illegal_move: return "illegal_move";
    case ViolationKind::vertex_conflict: return "vertex_conflict";
    case ViolationKind::swap_conflict: return "swap_conflict";
  }
  return "?";
}

bool Verdict::has(ViolationKind k) const {
  for (const auto& v : violations)
    if (v.kind == k) return true;
  return false;
}

Verdict validate_solution(const Instance& inst, const JointPath& sol) {
  Verdict out;
  auto add = [&](ViolationKind k, std::size_t t, std::size_t a, std::size_t b = 0) {
    out.violations.push_back({k, t, a, b,
                              std::string(to_string(k)) + " at step " + std::to_string(t) +
                                  ", agent " + std::to_string(a)});
  };
  const std::size_t n = inst.starts.size();
  if (sol.empty()) {
    add(ViolationKind::empty_path, 0, 0);
    return out;
  }
  if (sol.agents() != n || inst.goals.size() != n) {
    add(ViolationKind::arity, 0, 0);
    return out;
  }
  const int size = inst.world.size();
  std::map<std::pair<int, int>, bool> blocked;
  for (Cell c : inst.world.obstacles()) blocked[{c.x, c.y}] = true;

  const std::size_t T = sol.steps();
  for (std::size_t a = 0; a < n; ++a) {
    if (sol.cell(0, a) != inst.starts[a]) add(ViolationKind::wrong_start, 0, a);
    if (sol.cell(T - 1, a) != inst.goals[a]) add(ViolationKind::wrong_goal, T - 1, a);
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t a = 0; a < n; ++a) {
      const Cell c = sol.cell(t, a);
      if (c.x < 0 || c.y < 0 || c.x >= size || c.y >= size) {
        add(ViolationKind::out_of_bounds, t, a);
        continue;
      }
      if (blocked.count({c.x, c.y})) add(ViolationKind::obstacle, t, a);
      if (t > 0) {
        const Cell p = sol.cell(t - 1, a);
        if (std::abs(p.x - c.x) + std::abs(p.y - c.y) > 1) add(ViolationKind::illegal_move, t, a);
      }
      for (std::size_t b = a + 1; b < n; ++b) {
        const Cell o = sol.cell(t, b);
        if (o.x == c.x && o.y == c.y) add(ViolationKind::vertex_conflict, t, a, b);
        if (t > 0) {
          const Cell pa = sol.cell(t - 1, a), pb = sol.cell(t - 1, b);
          if (pa.x == o.x && pa.y == o.y && pb.x == c.x && pb.y == c.y && !(pa.x == c.x && pa.y == c.y))
            add(ViolationKind::swap_conflict, t, a, b);
        }
      }
    }
  }
  return out;
}

}  // namespace marrt
