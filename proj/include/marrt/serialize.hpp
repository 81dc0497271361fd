#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "marrt/grid.hpp"
#include "marrt/jointstate.hpp"
#include "marrt/planner.hpp"
#include "marrt/tree.hpp"

namespace marrt {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// Instance file: size, obstacles, starts, goals, seed, format_version.
json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

// Solution file: steps, cost, instance_seed, format_version.
json solution_to_json(const JointPath& path, Cost cost, std::uint64_t instance_seed);
JointPath solution_steps_from_json(const json& steps);
json steps_to_json(const JointPath& path);

// Missing keys keep their defaults, so a partial object acts as overrides.
json config_to_json(const PlannerConfig& cfg);
PlannerConfig config_from_json(const json& j, PlannerConfig base = {});

// Deterministic fields only unless include_timing is set.
json record_to_json(const RunRecord& rec, bool include_timing);
RunRecord record_from_json(const json& j);
json timing_to_json(const RunRecord& rec);

// One JSON document per line: a node record per node (ascending id), then an
// edge record per non-root node.
std::string tree_dump(const Tree& tree);

// Sorted-key, compact JSON text plus LF.
std::string dump_line(const json& j);

json read_json_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);
std::vector<json> read_json_lines(const std::filesystem::path& p);

}  // namespace marrt
