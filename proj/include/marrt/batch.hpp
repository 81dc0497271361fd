#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "marrt/grid.hpp"
#include "marrt/planner.hpp"

namespace marrt {

struct ExperimentSpec {
  std::vector<int> grid_sizes;
  std::vector<int> agent_counts;
  int instances_per_cell = 1;
  double obstacle_ratio = 0.1;
  Budget budget;
  std::vector<Algorithm> algorithms{Algorithm::marrt_star, Algorithm::marrt_star_fn,
                                    Algorithm::is_marrt_star, Algorithm::is_marrt_star_fn};
  PlannerConfig planner;  // base config; algorithm, seed and budget are set per run
  std::uint64_t master_seed = 0;
  int workers = 1;
};

ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const ExperimentSpec& spec);

struct NamedInstance {
  std::string id;
  Instance instance;
};

// sizes x agent counts x instances_per_cell, in that nesting order. Every
// instance gets its own world; all seeds derive from master_seed.
std::vector<NamedInstance> build_instance_set(const ExperimentSpec& spec);

// Planner seed for one (instance, algorithm) pair.
std::uint64_t run_seed(const Instance& instance, Algorithm algorithm);

struct BatchOptions {
  int workers = 1;
  // When set: records.jsonl and timing.jsonl are appended as runs finish
  // (so an interrupted batch resumes) and rewritten in canonical order at
  // the end. Existing records for the same pairs are reused.
  std::filesystem::path out_dir;
  bool dump_trees = false;  // trees/<instance>__<algorithm>.jsonl
};

// Every (instance, algorithm) pair under `budget`, ordered instance-major.
// A run that throws yields a record with status "failed".
std::vector<RunRecord> run_batch(const std::vector<NamedInstance>& instances,
                                 const std::vector<Algorithm>& algorithms,
                                 const PlannerConfig& base, const Budget& budget,
                                 const BatchOptions& opts = {});

void write_instances(const std::vector<NamedInstance>& instances,
                     const std::filesystem::path& dir);
std::vector<NamedInstance> read_instances(const std::filesystem::path& dir);

}  // namespace marrt
