#include "marrt/metrics.hpp"

#include <algorithm>

#include "marrt/errors.hpp"

namespace marrt {

double suboptimality(Cost returned_cost, Cost reference_cost) {
  if (reference_cost == 0) {
    if (returned_cost == 0) return 0.0;
    throw UndefinedReference("suboptimality against a zero reference cost");
  }
  if (reference_cost < 0) throw UndefinedReference("negative reference cost");
  return (static_cast<double>(returned_cost) / static_cast<double>(reference_cost) - 1.0) * 100.0;
}

namespace {

std::vector<CurvePoint> solved_points(const std::vector<RunRecord>& records, Algorithm a) {
  std::vector<CurvePoint> pts;
  for (const auto& r : records) {
    if (r.algorithm != a || !r.first_cost) continue;
    pts.push_back({0, r.time_to_first_s.value_or(0.0), r.first_iteration.value_or(0),
                   r.instance_id});
  }
  return pts;
}

void rank(std::vector<CurvePoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i].rank = i + 1;
}

}  // namespace

std::vector<CurvePoint> performance_curve(const std::vector<RunRecord>& records,
                                          Algorithm algorithm) {
  auto pts = solved_points(records, algorithm);
  std::stable_sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) {
    if (a.time_s != b.time_s) return a.time_s < b.time_s;
    return a.instance_id < b.instance_id;
  });
  rank(pts);
  return pts;
}

std::vector<CurvePoint> performance_curve_by_iteration(const std::vector<RunRecord>& records,
                                                       Algorithm algorithm) {
  auto pts = solved_points(records, algorithm);
  std::stable_sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) {
    if (a.first_iteration != b.first_iteration) return a.first_iteration < b.first_iteration;
    return a.instance_id < b.instance_id;
  });
  rank(pts);
  return pts;
}

Cost lower_bound_cost(const Instance& inst) {
  Cost total = 0;
  for (std::size_t i = 0; i < inst.agents(); ++i) {
    const auto field = bfs_distance_field(inst.world, inst.goals[i]);
    const int d = field.at(inst.starts[i]);
    if (d == kUnreachable) return kUnreachable;
    total += d;
  }
  return total;
}

const char* to_string(ReferenceKind k) {
  return k == ReferenceKind::oracle ? "oracle" : "lower_bound";
}

Reference reference_cost(const Instance& instance, const OracleLimits& limits) {
  const auto o = oracle_joint_optimal(instance, limits);
  if (o.cost) return {*o.cost, ReferenceKind::oracle};
  return {lower_bound_cost(instance), ReferenceKind::lower_bound};
}

}  // namespace marrt
