#pragma once

#include <cstdint>
#include <optional>

#include "marrt/grid.hpp"
#include "marrt/jointstate.hpp"

namespace marrt {

struct OracleLimits {
  // Cap on (free cells)^n, the joint position space size.
  std::uint64_t max_joint_states = 10'000'000;
};

struct OracleResult {
  std::optional<Cost> cost;
  std::optional<JointPath> path;
  std::uint64_t expanded = 0;
  bool limit_exceeded = false;
};

// Exact minimum sum-of-final-arrival cost by uniform-cost search over
// (positions, finished-flags). An unfinished agent pays 1 per timestep; an
// agent on its goal may finish for free and then holds that cell for good.
// Vertex and swap conflicts are forbidden.
OracleResult oracle_joint_optimal(const Instance& instance, const OracleLimits& limits = {});

}  // namespace marrt
