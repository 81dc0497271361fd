#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "marrt/greedy.hpp"
#include "marrt/grid.hpp"
#include "marrt/jointstate.hpp"
#include "marrt/rng.hpp"
#include "marrt/tree.hpp"

namespace marrt {

enum class Algorithm { marrt_star, marrt_star_fn, is_marrt_star, is_marrt_star_fn };

inline bool is_capped(Algorithm a) {
  return a == Algorithm::marrt_star_fn || a == Algorithm::is_marrt_star_fn;
}
inline bool is_informed(Algorithm a) {
  return a == Algorithm::is_marrt_star || a == Algorithm::is_marrt_star_fn;
}

// Canonical names: marrt_star, marrt_star_fn, is_marrt_star, is_marrt_star_fn.
// Also accepts the short CLI spellings marrt*, marrt*fn, ismarrt*, ismarrt*fn.
std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

struct Budget {
  enum class Kind { iterations, seconds };
  Kind kind = Kind::iterations;
  double value = 5000;

  static Budget iterations(std::uint64_t n) { return {Kind::iterations, static_cast<double>(n)}; }
  static Budget seconds(double s) { return {Kind::seconds, s}; }
  bool operator==(const Budget&) const = default;
};

// "5s", "2.5s", "5000it" or a bare iteration count.
Budget parse_budget(const std::string& s);
std::string to_string(const Budget& b);

inline constexpr std::size_t kDefaultNodeCap = 200;

struct PlannerConfig {
  Algorithm algorithm = Algorithm::marrt_star;
  std::optional<std::size_t> node_cap;  // capped algorithms default to 200
  double goal_bias = 0.1;
  std::optional<Cost> c_max;            // default 2 * n * size
  std::optional<double> gamma;          // default 2 * size * sqrt(n)
  std::optional<double> eta;            // default size
  NearMode near_mode = NearMode::radius;
  double informed_bias = 0.8;
  int informed_radius = 2;
  double phase1_fraction = 0.2;
  HeuristicMode heuristic = HeuristicMode::euclidean;
  std::uint64_t seed = 0;
  Budget budget;
  // Ends the run at the first solution (solve-rate studies only).
  bool stop_at_first_solution = false;
  // Node-count trace sampling period in iterations.
  std::uint64_t trace_stride = 1;

  bool operator==(const PlannerConfig&) const = default;
};

// Throws std::invalid_argument on out-of-range fields.
void validate(const PlannerConfig& cfg);

struct TracePoint {
  std::uint64_t iteration = 0;
  std::int64_t value = 0;
  bool operator==(const TracePoint&) const = default;
};

struct RunRecord {
  std::string instance_id;
  Algorithm algorithm = Algorithm::marrt_star;
  std::uint64_t seed = 0;
  Budget budget;
  std::optional<std::size_t> node_cap;
  std::string status = "ok";  // "ok" or "failed"
  std::string error;
  std::uint64_t iterations_executed = 0;
  std::optional<std::uint64_t> first_iteration;
  std::optional<Cost> first_cost;
  std::optional<Cost> best_cost;
  std::optional<JointPath> solution;
  std::vector<TracePoint> cost_trace;        // (iteration, best cost) on every improvement
  std::vector<TracePoint> node_count_trace;  // (iteration, nodes) every trace_stride
  std::size_t max_node_count = 0;
  // Wall-clock fields; not reproducible.
  std::optional<double> time_to_first_s;
  double elapsed_s = 0.0;

  bool solved() const { return first_cost.has_value(); }
};

struct IterationEvent {
  std::uint64_t iteration = 0;
  int phase = 2;  // 1 = single-agent seeding of the informed variants
  std::optional<Cost> best_cost;
  std::size_t node_count = 0;
};

using Observer = std::function<void(const IterationEvent&)>;
// Receives the joint tree once the run ends.
using TreeSink = std::function<void(const Tree&)>;

// Uniform joint state over ordered tuples of pairwise-distinct free cells,
// or `goal` with probability p.
JointState sample(const GridWorld& world, std::size_t n, const JointState& goal, double p,
                  Rng& rng);

// Goal with probability p; else with probability beta each agent gets a free
// cell within Chebyshev `radius` of a random waypoint on its guide path
// (100 tries for distinctness, then uniform); else uniform as in sample().
JointState biased_sample(const std::vector<std::vector<Cell>>& guide_paths, double beta,
                         int radius, const GridWorld& world, const JointState& goal, double p,
                         Rng& rng);

struct TreeSettings {
  std::optional<std::size_t> node_cap;
  Cost c_max = 0;
  NearParams near;
  HeuristicMode heuristic = HeuristicMode::euclidean;
};

TreeSettings tree_settings(const PlannerConfig& cfg, int world_size, std::size_t agents);

// One anytime tree search. Each iterate() samples, extends and, when an
// insertion overflows the cap, force-removes a leaf or rolls the iteration
// back. best_cost() is the path_cost of the cheapest solution seen so far.
class JointPlanner {
 public:
  using Sampler = std::function<JointState(Rng&)>;

  JointPlanner(const GridWorld& world, JointState start, JointState goal, TreeSettings settings,
               std::uint64_t seed, Sampler sampler);

  struct Step {
    ExtendResult extend;
    RemovalOutcome removal;
    bool improved = false;
  };
  Step iterate();

  const Tree& tree() const { return tree_; }
  std::uint64_t iterations() const { return iterations_; }
  std::optional<Cost> best_cost() const { return best_cost_; }
  const std::optional<JointPath>& best_path() const { return best_path_; }
  const TreeSettings& settings() const { return settings_; }

 private:
  bool refresh_best();

  const GridWorld* world_;
  TreeSettings settings_;
  std::unique_ptr<Heuristic> heuristic_;
  Tree tree_;
  ExtendConfig ext_;
  Rng sample_rng_;
  Rng removal_rng_;
  Sampler sampler_;
  std::uint64_t iterations_ = 0;
  std::optional<Cost> best_tree_cost_;
  std::optional<Cost> best_cost_;
  std::optional<JointPath> best_path_;
};

// Runs the configured algorithm until its budget expires. Informed algorithms
// dispatch to plan_informed. Throws InfeasibleInstance on malformed input.
RunRecord plan(const Instance& instance, const PlannerConfig& cfg, const Observer& observer = {},
               const TreeSink& on_final_tree = {});

struct SingleAgentResult {
  std::optional<std::vector<Cell>> path;
  std::optional<Cost> cost;
  std::uint64_t iterations = 0;
};

// G-RRT*: the one-agent specialization of the joint planner.
SingleAgentResult plan_single_agent_grrt_star(const GridWorld& world, Cell s, Cell d,
                                              const PlannerConfig& cfg, const Budget& budget);

// Seeds per-agent G-RRT* guide paths, then runs the joint search with
// biased_sample. One clock covers both phases.
RunRecord plan_informed(const Instance& instance, const PlannerConfig& cfg,
                        const Observer& observer = {}, const TreeSink& on_final_tree = {});

}  // namespace marrt
