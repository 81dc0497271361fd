#pragma once

#include <string>
#include <vector>

#include "marrt/grid.hpp"
#include "marrt/oracle.hpp"
#include "marrt/planner.hpp"

namespace marrt {

// (returned / reference - 1) * 100. A zero reference is only defined for a
// zero return (-> 0); anything else throws UndefinedReference.
double suboptimality(Cost returned_cost, Cost reference_cost);

struct CurvePoint {
  std::size_t rank = 0;  // 1-based
  double time_s = 0.0;
  std::uint64_t first_iteration = 0;
  std::string instance_id;
};

// Solved records of `algorithm`, ascending by time to first solution (ties by
// instance id). The last rank over the instance count is the solve rate.
std::vector<CurvePoint> performance_curve(const std::vector<RunRecord>& records,
                                          Algorithm algorithm);

// Same, ordered by the iteration of the first solution; reproducible under
// iteration budgets.
std::vector<CurvePoint> performance_curve_by_iteration(const std::vector<RunRecord>& records,
                                                       Algorithm algorithm);

// Sum of single-agent BFS distances; kUnreachable if any goal is cut off.
Cost lower_bound_cost(const Instance& instance);

enum class ReferenceKind { oracle, lower_bound };
const char* to_string(ReferenceKind k);

struct Reference {
  Cost cost = 0;
  ReferenceKind kind = ReferenceKind::lower_bound;
};

// Exact oracle cost when within limits, else the BFS lower bound.
Reference reference_cost(const Instance& instance, const OracleLimits& limits = {});

}  // namespace marrt
