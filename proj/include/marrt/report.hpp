#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "marrt/batch.hpp"
#include "marrt/oracle.hpp"
#include "marrt/planner.hpp"

namespace marrt {

struct ReportOptions {
  OracleLimits limits;
  bool svg = true;
};

// File name -> contents. CSVs use a header row and LF endings:
//   performance_curve.csv  algorithm,rank,first_iteration,time_to_first_s
//   suboptimality.csv      per record, first and best against the reference
//   cost_trace.csv         instance_id,algorithm,iteration,best_cost
//   node_count.csv         instance_id,algorithm,iteration,node_count
//   summary.csv            per algorithm aggregates
//   svg/<instance>__<algorithm>.svg
// Iteration-budgeted records leave time_to_first_s empty and rank by
// iteration, so their output is reproducible byte for byte.
std::map<std::string, std::string> build_report(
    const std::vector<RunRecord>& records, const std::map<std::string, Instance>& instances,
    const std::map<std::string, std::vector<JointPath>>& tree_edges, const ReportOptions& opts);

// Reads records.jsonl, timing.jsonl, instances/ and trees/ under records_dir.
void report(const std::filesystem::path& records_dir, const std::filesystem::path& out_dir,
            const ReportOptions& opts = {});

// World, tree edges (thin lines), best path (one polyline per agent), start
// circles and goal squares.
std::string render_svg(const Instance& instance, const JointPath* best,
                       const std::vector<JointPath>& tree_edges);

}  // namespace marrt
