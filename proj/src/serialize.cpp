#include "marrt/serialize.hpp"

#include <fstream>
#include <sstream>

#include "marrt/errors.hpp"

namespace marrt {

namespace {

json cell_json(Cell c) { return json::array({c.x, c.y}); }

Cell cell_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw FormatError("cell must be an array of two integers");
  return {j[0].get<int>(), j[1].get<int>()};
}

json cells_json(std::span<const Cell> cells) {
  json a = json::array();
  for (Cell c : cells) a.push_back(cell_json(c));
  return a;
}

std::vector<Cell> cells_from(const json& j) {
  if (!j.is_array()) throw FormatError("expected an array of cells");
  std::vector<Cell> out;
  for (const auto& c : j) out.push_back(cell_from(c));
  return out;
}

json trace_json(const std::vector<TracePoint>& t) {
  json a = json::array();
  for (const auto& p : t) a.push_back(json::array({p.iteration, p.value}));
  return a;
}

std::vector<TracePoint> trace_from(const json& j) {
  std::vector<TracePoint> out;
  for (const auto& p : j) out.push_back({p.at(0).get<std::uint64_t>(), p.at(1).get<std::int64_t>()});
  return out;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

void check_version(const json& j) {
  if (j.contains("format_version") && j.at("format_version").get<int>() != kFormatVersion)
    throw FormatError("unsupported format_version");
}

const char* heuristic_name(HeuristicMode m) {
  return m == HeuristicMode::euclidean ? "euclidean" : "bfs";
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json j;
  j["size"] = inst.world.size();
  j["obstacles"] = cells_json(inst.world.obstacles());
  j["starts"] = cells_json(inst.starts);
  j["goals"] = cells_json(inst.goals);
  j["seed"] = inst.seed;
  j["format_version"] = kFormatVersion;
  return j;
}

Instance instance_from_json(const json& j) {
  try {
    check_version(j);
    Instance inst;
    inst.world = GridWorld(j.at("size").get<int>(), cells_from(j.at("obstacles")));
    inst.starts = cells_from(j.at("starts"));
    inst.goals = cells_from(j.at("goals"));
    inst.seed = j.at("seed").get<std::uint64_t>();
    return inst;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed instance: ") + e.what());
  }
}

json steps_to_json(const JointPath& path) {
  json steps = json::array();
  for (std::size_t t = 0; t < path.steps(); ++t) steps.push_back(cells_json(path.at(t)));
  return steps;
}

JointPath solution_steps_from_json(const json& steps) {
  JointPath p;
  for (const auto& s : steps) {
    const auto cells = cells_from(s);
    p.push(cells);
  }
  return p;
}

json solution_to_json(const JointPath& path, Cost cost, std::uint64_t instance_seed) {
  json j;
  j["steps"] = steps_to_json(path);
  j["cost"] = cost;
  j["instance_seed"] = instance_seed;
  j["format_version"] = kFormatVersion;
  return j;
}

json config_to_json(const PlannerConfig& c) {
  json j;
  j["algorithm"] = to_string(c.algorithm);
  j["node_cap"] = opt(c.node_cap);
  j["goal_bias"] = c.goal_bias;
  j["c_max"] = opt(c.c_max);
  j["gamma"] = opt(c.gamma);
  j["eta"] = opt(c.eta);
  j["near_mode"] = c.near_mode == NearMode::radius ? "radius" : "k_nearest";
  j["informed_bias"] = c.informed_bias;
  j["informed_radius"] = c.informed_radius;
  j["phase1_fraction"] = c.phase1_fraction;
  j["heuristic_mode"] = heuristic_name(c.heuristic);
  j["seed"] = c.seed;
  j["budget"] = to_string(c.budget);
  j["stop_at_first_solution"] = c.stop_at_first_solution;
  j["trace_stride"] = c.trace_stride;
  j["format_version"] = kFormatVersion;
  return j;
}

PlannerConfig config_from_json(const json& j, PlannerConfig c) {
  try {
    check_version(j);
    if (j.contains("algorithm")) c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    if (j.contains("node_cap")) c.node_cap = opt_from<std::size_t>(j, "node_cap");
    if (j.contains("goal_bias")) c.goal_bias = j.at("goal_bias").get<double>();
    if (j.contains("c_max")) c.c_max = opt_from<Cost>(j, "c_max");
    if (j.contains("gamma")) c.gamma = opt_from<double>(j, "gamma");
    if (j.contains("eta")) c.eta = opt_from<double>(j, "eta");
    if (j.contains("near_mode")) {
      const auto m = j.at("near_mode").get<std::string>();
      if (m == "radius") c.near_mode = NearMode::radius;
      else if (m == "k_nearest") c.near_mode = NearMode::k_nearest;
      else throw FormatError("near_mode must be radius or k_nearest");
    }
    if (j.contains("informed_bias")) c.informed_bias = j.at("informed_bias").get<double>();
    if (j.contains("informed_radius")) c.informed_radius = j.at("informed_radius").get<int>();
    if (j.contains("phase1_fraction")) c.phase1_fraction = j.at("phase1_fraction").get<double>();
    if (j.contains("heuristic_mode")) {
      const auto m = j.at("heuristic_mode").get<std::string>();
      if (m == "euclidean") c.heuristic = HeuristicMode::euclidean;
      else if (m == "bfs") c.heuristic = HeuristicMode::bfs;
      else throw FormatError("heuristic_mode must be euclidean or bfs");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("budget")) c.budget = parse_budget(j.at("budget").get<std::string>());
    if (j.contains("stop_at_first_solution"))
      c.stop_at_first_solution = j.at("stop_at_first_solution").get<bool>();
    if (j.contains("trace_stride")) c.trace_stride = j.at("trace_stride").get<std::uint64_t>();
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed planner config: ") + e.what());
  }
}

json record_to_json(const RunRecord& r, bool include_timing) {
  json j;
  j["instance_id"] = r.instance_id;
  j["algorithm"] = to_string(r.algorithm);
  j["seed"] = r.seed;
  j["budget"] = to_string(r.budget);
  j["node_cap"] = opt(r.node_cap);
  j["status"] = r.status;
  if (!r.error.empty()) j["error"] = r.error;
  j["iterations_executed"] = r.iterations_executed;
  j["first_iteration"] = opt(r.first_iteration);
  j["first_cost"] = opt(r.first_cost);
  j["best_cost"] = opt(r.best_cost);
  j["solution"] = r.solution ? steps_to_json(*r.solution) : json(nullptr);
  j["cost_trace"] = trace_json(r.cost_trace);
  j["node_count_trace"] = trace_json(r.node_count_trace);
  j["max_node_count"] = r.max_node_count;
  if (include_timing) {
    j["time_to_first_s"] = opt(r.time_to_first_s);
    j["elapsed_s"] = r.elapsed_s;
  }
  return j;
}

json timing_to_json(const RunRecord& r) {
  json j;
  j["instance_id"] = r.instance_id;
  j["algorithm"] = to_string(r.algorithm);
  j["time_to_first_s"] = opt(r.time_to_first_s);
  j["elapsed_s"] = r.elapsed_s;
  j["budget"] = to_string(r.budget);
  j["reproducible"] = r.budget.kind == Budget::Kind::iterations;
  return j;
}

RunRecord record_from_json(const json& j) {
  try {
    RunRecord r;
    r.instance_id = j.at("instance_id").get<std::string>();
    r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.budget = parse_budget(j.at("budget").get<std::string>());
    r.node_cap = opt_from<std::size_t>(j, "node_cap");
    r.status = j.value("status", std::string("ok"));
    r.error = j.value("error", std::string());
    r.iterations_executed = j.at("iterations_executed").get<std::uint64_t>();
    r.first_iteration = opt_from<std::uint64_t>(j, "first_iteration");
    r.first_cost = opt_from<Cost>(j, "first_cost");
    r.best_cost = opt_from<Cost>(j, "best_cost");
    if (j.contains("solution") && !j.at("solution").is_null())
      r.solution = solution_steps_from_json(j.at("solution"));
    r.cost_trace = trace_from(j.at("cost_trace"));
    r.node_count_trace = trace_from(j.at("node_count_trace"));
    r.max_node_count = j.at("max_node_count").get<std::size_t>();
    r.time_to_first_s = opt_from<double>(j, "time_to_first_s");
    r.elapsed_s = j.value("elapsed_s", 0.0);
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed run record: ") + e.what());
  }
}

std::string tree_dump(const Tree& tree) {
  std::string out;
  const auto ids = tree.ids();
  for (NodeId id : ids) {
    const auto& n = tree.node(id);
    json j;
    j["type"] = "node";
    j["id"] = id;
    j["parent"] = n.parent == kNoNode ? json(nullptr) : json(n.parent);
    j["state"] = cells_json(n.state.cells());
    j["cost"] = n.cost;
    out += dump_line(j);
  }
  for (NodeId id : ids) {
    const auto& n = tree.node(id);
    if (n.parent == kNoNode) continue;
    json j;
    j["type"] = "edge";
    j["parent"] = n.parent;
    j["child"] = id;
    j["steps"] = steps_to_json(n.edge);
    out += dump_line(j);
  }
  return out;
}

std::string dump_line(const json& j) { return j.dump() + "\n"; }

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(p.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

std::vector<json> read_json_lines(const std::filesystem::path& p) {
  std::vector<json> out;
  std::ifstream in(p);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception&) {
      // a torn last line from an interrupted run
      break;
    }
  }
  return out;
}

}  // namespace marrt
