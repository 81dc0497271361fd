#include "marrt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "marrt/errors.hpp"

namespace marrt {

namespace {

using SteadyClock = std::chrono::steady_clock;

double seconds_since(SteadyClock::time_point t0) {
  return std::chrono::duration<double>(SteadyClock::now() - t0).count();
}

// Remaining-budget test. `used` counts iterations across all phases.
struct BudgetGate {
  Budget budget;
  SteadyClock::time_point t0 = SteadyClock::now();

  bool open(std::uint64_t used) const {
    if (budget.kind == Budget::Kind::iterations)
      return used < static_cast<std::uint64_t>(budget.value);
    return seconds_since(t0) < budget.value;
  }
  double elapsed() const { return seconds_since(t0); }
};

class Recorder {
 public:
  Recorder(RunRecord& rec, const PlannerConfig& cfg, const BudgetGate& gate,
           const Observer& observer)
      : rec_(rec), stride_(std::max<std::uint64_t>(1, cfg.trace_stride)), gate_(gate),
        observer_(observer) {}

  void phase_one(std::uint64_t it, std::size_t nodes) {
    if (observer_) observer_({it, 1, rec_.best_cost, nodes});
  }

  void joint(std::uint64_t it, const JointPlanner& jp) {
    const auto best = jp.best_cost();
    if (best && (!rec_.best_cost || *best < *rec_.best_cost)) {
      if (!rec_.first_cost) {
        rec_.first_cost = best;
        rec_.first_iteration = it;
        rec_.time_to_first_s = gate_.elapsed();
      }
      rec_.best_cost = best;
      rec_.solution = jp.best_path();
      rec_.cost_trace.push_back({it, *best});
    }
    const std::size_t nodes = jp.tree().size();
    rec_.max_node_count = std::max(rec_.max_node_count, nodes);
    last_nodes_ = {it, static_cast<std::int64_t>(nodes)};
    if (rec_.node_count_trace.empty() || it % stride_ == 0)
      rec_.node_count_trace.push_back(last_nodes_);
    if (observer_) observer_({it, 2, rec_.best_cost, nodes});
  }

  void finish(std::uint64_t used) {
    rec_.iterations_executed = used;
    if (!rec_.node_count_trace.empty() && rec_.node_count_trace.back() != last_nodes_)
      rec_.node_count_trace.push_back(last_nodes_);
    rec_.elapsed_s = gate_.elapsed();
  }

 private:
  RunRecord& rec_;
  std::uint64_t stride_;
  const BudgetGate& gate_;
  const Observer& observer_;
  TracePoint last_nodes_;
};

RunRecord blank_record(const PlannerConfig& cfg) {
  RunRecord rec;
  rec.algorithm = cfg.algorithm;
  rec.seed = cfg.seed;
  rec.budget = cfg.budget;
  if (is_capped(cfg.algorithm)) rec.node_cap = cfg.node_cap.value_or(kDefaultNodeCap);
  return rec;
}

std::vector<Cell> box_cells(const GridWorld& world, Cell center, int radius) {
  std::vector<Cell> out;
  for (int y = center.y - radius; y <= center.y + radius; ++y)
    for (int x = center.x - radius; x <= center.x + radius; ++x)
      if (world.is_free({x, y})) out.push_back({x, y});
  return out;
}

enum Stream : std::uint64_t { kSampling = 1, kRemoval = 2, kPhaseOne = 3, kPhaseTwo = 4 };

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::marrt_star: return "marrt_star";
    case Algorithm::marrt_star_fn: return "marrt_star_fn";
    case Algorithm::is_marrt_star: return "is_marrt_star";
    case Algorithm::is_marrt_star_fn: return "is_marrt_star_fn";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "marrt_star" || s == "marrt*") return Algorithm::marrt_star;
  if (s == "marrt_star_fn" || s == "marrt*fn") return Algorithm::marrt_star_fn;
  if (s == "is_marrt_star" || s == "ismarrt*") return Algorithm::is_marrt_star;
  if (s == "is_marrt_star_fn" || s == "ismarrt*fn") return Algorithm::is_marrt_star_fn;
  throw std::invalid_argument("unknown algorithm: " + s);
}

Budget parse_budget(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty budget");
  try {
    std::size_t pos = 0;
    if (s.size() > 2 && s.ends_with("it")) {
      const auto n = std::stoull(s.substr(0, s.size() - 2), &pos);
      if (pos == s.size() - 2) return Budget::iterations(n);
    } else if (s.ends_with("s")) {
      const double v = std::stod(s.substr(0, s.size() - 1), &pos);
      if (pos == s.size() - 1 && v > 0) return Budget::seconds(v);
    } else {
      const auto n = std::stoull(s, &pos);
      if (pos == s.size()) return Budget::iterations(n);
    }
  } catch (const std::logic_error&) {
  }
  throw std::invalid_argument("bad budget '" + s + "' (expected e.g. 5s or 5000it)");
}

std::string to_string(const Budget& b) {
  if (b.kind == Budget::Kind::iterations)
    return std::to_string(static_cast<std::uint64_t>(b.value)) + "it";
  std::string v = std::to_string(b.value);
  v.erase(v.find_last_not_of('0') + 1);
  if (v.back() == '.') v.pop_back();
  return v + "s";
}

void validate(const PlannerConfig& cfg) {
  if (!(cfg.goal_bias >= 0.0 && cfg.goal_bias <= 1.0))
    throw std::invalid_argument("goal_bias must lie in [0, 1]");
  if (!(cfg.informed_bias >= 0.0 && cfg.informed_bias <= 1.0))
    throw std::invalid_argument("informed_bias must lie in [0, 1]");
  if (!(cfg.phase1_fraction > 0.0 && cfg.phase1_fraction < 1.0))
    throw std::invalid_argument("phase1_fraction must lie in (0, 1)");
  if (cfg.node_cap && *cfg.node_cap < 1) throw std::invalid_argument("node_cap must be >= 1");
  if (cfg.informed_radius < 0) throw std::invalid_argument("informed_radius must be >= 0");
  if (cfg.c_max && *cfg.c_max < 0) throw std::invalid_argument("c_max must be >= 0");
  if (cfg.budget.value <= 0) throw std::invalid_argument("budget must be positive");
}

JointState sample(const GridWorld& world, std::size_t n, const JointState& goal, double p,
                  Rng& rng) {
  const auto& free = world.free_cells();
  if (free.size() < n) throw InfeasibleInstance("fewer free cells than agents");
  if (rng.chance(p)) return goal;
  std::vector<Cell> cells;
  cells.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Cell c;
    do {
      c = free[rng.uniform_index(free.size())];
    } while (std::find(cells.begin(), cells.end(), c) != cells.end());
    cells.push_back(c);
  }
  return JointState(std::move(cells));
}

JointState biased_sample(const std::vector<std::vector<Cell>>& guide_paths, double beta,
                         int radius, const GridWorld& world, const JointState& goal, double p,
                         Rng& rng) {
  const std::size_t n = goal.size();
  if (guide_paths.size() != n) throw ArityError("one guide path per agent required");
  if (rng.chance(p)) return goal;
  if (rng.chance(beta)) {
    std::vector<Cell> cells(n);
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto& g = guide_paths[i];
        const Cell wp = g[rng.uniform_index(g.size())];
        const auto box = box_cells(world, wp, radius);
        cells[i] = box[rng.uniform_index(box.size())];
      }
      if (pairwise_distinct(cells)) return JointState(cells);
    }
  }
  return sample(world, n, goal, 0.0, rng);
}

TreeSettings tree_settings(const PlannerConfig& cfg, int world_size, std::size_t agents) {
  TreeSettings s;
  if (is_capped(cfg.algorithm)) s.node_cap = cfg.node_cap.value_or(kDefaultNodeCap);
  s.c_max = cfg.c_max.value_or(static_cast<Cost>(2 * agents * world_size));
  s.near = default_near_params(world_size, agents);
  if (cfg.gamma) s.near.gamma = *cfg.gamma;
  if (cfg.eta) s.near.eta = *cfg.eta;
  s.near.mode = cfg.near_mode;
  s.heuristic = cfg.heuristic;
  return s;
}

JointPlanner::JointPlanner(const GridWorld& world, JointState start, JointState goal,
                           TreeSettings settings, std::uint64_t seed, Sampler sampler)
    : world_(&world),
      settings_(settings),
      heuristic_(std::make_unique<Heuristic>(world, settings.heuristic)),
      tree_(world, std::move(start), std::move(goal), settings.node_cap),
      sample_rng_(Rng(seed).split(kSampling)),
      removal_rng_(Rng(seed).split(kRemoval)),
      sampler_(std::move(sampler)) {
  ext_.c_max = settings_.c_max;
  ext_.near = settings_.near;
  ext_.heuristic = heuristic_.get();
  refresh_best();
}

JointPlanner::Step JointPlanner::iterate() {
  Step step;
  tree_.mark_snapshot();
  const JointState x_rand = sampler_(sample_rng_);
  step.extend = extend(tree_, x_rand, ext_);
  step.removal = step.extend.removal;
  const auto cap = tree_.node_cap();
  if (step.extend.inserted && cap && tree_.size() > *cap) {
    step.removal = forced_removal(tree_, step.extend.new_node, removal_rng_);
    if (step.removal.kind == RemovalKind::restored) restore(tree_);
  }
  ++iterations_;
  step.improved = refresh_best();
  return step;
}

bool JointPlanner::refresh_best() {
  const auto& goals = tree_.goal_nodes();
  if (goals.empty()) return false;
  Cost tree_cost = tree_.node(*goals.begin()).cost;
  for (NodeId id : goals) tree_cost = std::min(tree_cost, tree_.node(id).cost);
  if (best_tree_cost_ && tree_cost >= *best_tree_cost_) return false;
  best_tree_cost_ = tree_cost;
  auto sol = best_solution(tree_);
  const Cost c = path_cost(sol->path, tree_.goal());
  if (best_cost_ && c >= *best_cost_) return false;
  best_cost_ = c;
  best_path_ = std::move(sol->path);
  return true;
}

RunRecord plan(const Instance& instance, const PlannerConfig& cfg, const Observer& observer,
               const TreeSink& on_final_tree) {
  validate(cfg);
  check_instance(instance);
  if (is_informed(cfg.algorithm)) return plan_informed(instance, cfg, observer, on_final_tree);

  const GridWorld& world = instance.world;
  const std::size_t n = instance.agents();
  const JointState start(instance.starts);
  const JointState goal(instance.goals);

  RunRecord rec = blank_record(cfg);
  BudgetGate gate{cfg.budget};
  Recorder recorder(rec, cfg, gate, observer);

  JointPlanner jp(world, start, goal, tree_settings(cfg, world.size(), n), cfg.seed,
                  [&world, n, &goal, p = cfg.goal_bias](Rng& rng) {
                    return sample(world, n, goal, p, rng);
                  });
  recorder.joint(0, jp);
  std::uint64_t used = 0;
  while (gate.open(used) && !(cfg.stop_at_first_solution && rec.solved())) {
    jp.iterate();
    ++used;
    recorder.joint(used, jp);
  }
  recorder.finish(used);
  if (on_final_tree) on_final_tree(jp.tree());
  return rec;
}

SingleAgentResult plan_single_agent_grrt_star(const GridWorld& world, Cell s, Cell d,
                                              const PlannerConfig& cfg, const Budget& budget) {
  validate(cfg);
  if (!world.is_free(s) || !world.is_free(d)) throw InvalidCell("G-RRT* endpoint not free");
  const JointState goal{d};
  JointPlanner jp(world, JointState{s}, goal, tree_settings(cfg, world.size(), 1), cfg.seed,
                  [&world, &goal, p = cfg.goal_bias](Rng& rng) {
                    return sample(world, 1, goal, p, rng);
                  });
  BudgetGate gate{budget};
  while (gate.open(jp.iterations())) jp.iterate();
  SingleAgentResult out;
  out.iterations = jp.iterations();
  if (jp.best_path()) {
    out.path = jp.best_path()->agent_path(0);
    out.cost = jp.best_cost();
  }
  return out;
}

RunRecord plan_informed(const Instance& instance, const PlannerConfig& cfg,
                        const Observer& observer, const TreeSink& on_final_tree) {
  validate(cfg);
  check_instance(instance);
  const GridWorld& world = instance.world;
  const std::size_t n = instance.agents();
  const JointState goal(instance.goals);

  RunRecord rec = blank_record(cfg);
  BudgetGate gate{cfg.budget};
  Recorder recorder(rec, cfg, gate, observer);

  // Phase 1: one G-RRT* per agent, each on an even share of the seeding budget.
  PlannerConfig single_cfg = cfg;
  single_cfg.c_max.reset();
  single_cfg.gamma.reset();
  single_cfg.eta.reset();
  const TreeSettings single = tree_settings(single_cfg, world.size(), 1);
  std::vector<JointState> single_goals;
  for (Cell g : instance.goals) single_goals.push_back(JointState{g});
  std::vector<std::unique_ptr<JointPlanner>> seeds;
  for (std::size_t i = 0; i < n; ++i) {
    const JointState& gi = single_goals[i];
    seeds.push_back(std::make_unique<JointPlanner>(
        world, JointState{instance.starts[i]}, gi, single,
        derive_seed(cfg.seed, kPhaseOne, i), [&world, &gi, p = cfg.goal_bias](Rng& rng) {
          return sample(world, 1, gi, p, rng);
        }));
  }

  std::uint64_t used = 0;
  const double share = cfg.phase1_fraction * cfg.budget.value / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& jp = *seeds[i];
    if (cfg.budget.kind == Budget::Kind::iterations) {
      const auto quota = static_cast<std::uint64_t>(share);
      while (jp.iterations() < quota && gate.open(used)) {
        jp.iterate();
        recorder.phase_one(++used, jp.tree().size());
      }
    } else {
      const double until = share * static_cast<double>(i + 1);
      while (gate.elapsed() < until && gate.open(used)) {
        jp.iterate();
        recorder.phase_one(++used, jp.tree().size());
      }
    }
  }
  // Agents still without a path keep searching on the remaining budget.
  for (auto& jp : seeds) {
    while (!jp->best_path() && gate.open(used)) {
      jp->iterate();
      recorder.phase_one(++used, jp->tree().size());
    }
  }
  const bool seeded = std::all_of(seeds.begin(), seeds.end(),
                                  [](const auto& jp) { return jp->best_path().has_value(); });
  if (!seeded) {
    recorder.finish(used);
    return rec;
  }

  std::vector<std::vector<Cell>> guides;
  for (const auto& jp : seeds) guides.push_back(jp->best_path()->agent_path(0));
  seeds.clear();

  // Phase 2: joint search with path-biased sampling.
  JointPlanner jp(world, JointState(instance.starts), goal, tree_settings(cfg, world.size(), n),
                  derive_seed(cfg.seed, kPhaseTwo),
                  [&world, &goal, &guides, &cfg](Rng& rng) {
                    return biased_sample(guides, cfg.informed_bias, cfg.informed_radius, world,
                                         goal, cfg.goal_bias, rng);
                  });
  recorder.joint(used, jp);
  while (gate.open(used) && !(cfg.stop_at_first_solution && rec.solved())) {
    jp.iterate();
    ++used;
    recorder.joint(used, jp);
  }
  recorder.finish(used);
  if (on_final_tree) on_final_tree(jp.tree());
  return rec;
}

}  // namespace marrt
