#pragma once

#include <string>
#include <vector>

#include "marrt/grid.hpp"
#include "marrt/jointstate.hpp"

namespace marrt {

enum class ViolationKind {
  empty_path,
  arity,
  wrong_start,
  wrong_goal,
  out_of_bounds,
  obstacle,
  illegal_move,
  vertex_conflict,
  swap_conflict,
};

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::size_t step = 0;
  std::size_t agent = 0;
  std::size_t other = 0;
  std::string message;
};

struct Verdict {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  bool has(ViolationKind k) const;
};

// Stand-alone checker; shares no move or conflict logic with the planners.
Verdict validate_solution(const Instance& instance, const JointPath& solution);

}  // namespace marrt
