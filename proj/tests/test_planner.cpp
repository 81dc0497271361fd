#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "marrt/errors.hpp"
#include "marrt/metrics.hpp"
#include "marrt/planner.hpp"
#include "marrt/serialize.hpp"
#include "marrt/validate.hpp"
#include "properties.hpp"

using namespace marrt;

namespace {

PlannerConfig config(Algorithm a, std::uint64_t iterations, std::uint64_t seed = 1) {
  PlannerConfig cfg;
  cfg.algorithm = a;
  cfg.budget = Budget::iterations(iterations);
  cfg.seed = seed;
  return cfg;
}

const Algorithm kAll[] = {Algorithm::marrt_star, Algorithm::marrt_star_fn, Algorithm::is_marrt_star,
                          Algorithm::is_marrt_star_fn};

void check_record(const Instance& inst, const RunRecord& r) {
  for (std::size_t k = 1; k < r.cost_trace.size(); ++k) {
    CHECK(r.cost_trace[k].iteration > r.cost_trace[k - 1].iteration);
    CHECK(r.cost_trace[k].value < r.cost_trace[k - 1].value);
  }
  if (!r.solved()) return;
  REQUIRE(r.solution);
  CHECK(validate_solution(inst, *r.solution).valid());
  CHECK(path_cost(*r.solution, JointState(inst.goals)) == *r.best_cost);
  CHECK(*r.best_cost >= lower_bound_cost(inst));
  CHECK(*r.best_cost <= *r.first_cost);
  CHECK(r.cost_trace.front().value == *r.first_cost);
  CHECK(r.cost_trace.back().value == *r.best_cost);
}

}  // namespace

TEST_CASE("algorithm and budget spellings") {
  CHECK(parse_algorithm("marrt*") == Algorithm::marrt_star);
  CHECK(parse_algorithm("marrt*fn") == Algorithm::marrt_star_fn);
  CHECK(parse_algorithm("ismarrt*") == Algorithm::is_marrt_star);
  CHECK(parse_algorithm("ismarrt*fn") == Algorithm::is_marrt_star_fn);
  for (Algorithm a : kAll) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_THROWS(parse_algorithm("rrt"));

  CHECK(parse_budget("5s") == Budget::seconds(5));
  CHECK(parse_budget("2.5s") == Budget::seconds(2.5));
  CHECK(parse_budget("5000it") == Budget::iterations(5000));
  CHECK(parse_budget("300") == Budget::iterations(300));
  CHECK(to_string(Budget::iterations(5000)) == "5000it");
  CHECK(parse_budget(to_string(Budget::seconds(1.25))) == Budget::seconds(1.25));
  CHECK_THROWS(parse_budget("fast"));
  CHECK_THROWS(parse_budget("-3s"));
}

TEST_CASE("config validation") {
  PlannerConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.goal_bias = 1.5;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = {};
  cfg.informed_bias = -0.1;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = {};
  cfg.node_cap = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = {};
  cfg.informed_radius = -1;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("tree settings defaults") {
  PlannerConfig cfg;
  auto s = tree_settings(cfg, 10, 3);
  CHECK(s.c_max == 2 * 3 * 10);
  CHECK(s.near.eta == 10.0);
  CHECK(s.near.gamma == doctest::Approx(2 * 10 * std::sqrt(3.0)));
  CHECK_FALSE(s.node_cap.has_value());
  cfg.algorithm = Algorithm::marrt_star_fn;
  CHECK(tree_settings(cfg, 10, 3).node_cap == kDefaultNodeCap);
  cfg.node_cap = 77;
  CHECK(tree_settings(cfg, 10, 3).node_cap == 77u);
  // unbounded variants ignore a configured cap
  cfg.algorithm = Algorithm::is_marrt_star;
  CHECK_FALSE(tree_settings(cfg, 10, 3).node_cap.has_value());
}

TEST_CASE("sample: p = 1 always returns the goal") {
  const GridWorld w = generate_world(10, 0.1, 3);
  const JointState goal{{0, 0}, {9, 9}};
  const auto g = w.is_free({0, 0}) && w.is_free({9, 9});
  REQUIRE(g);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(sample(w, 2, goal, 1.0, rng) == goal);
}

TEST_CASE("sample: p = 0 is uniform over ordered distinct free pairs") {
  const GridWorld w = generate_world(10, 0.1, 3);
  const auto& free = w.free_cells();
  const double F = static_cast<double>(free.size());
  const double pairs = F * (F - 1);  // oracle: ordered pairs of distinct free cells
  const JointState goal{free[0], free[1]};
  Rng rng(99);
  const int draws = 10000;
  std::map<std::pair<Cell, Cell>, int> hits;
  std::map<Cell, int> first, second;
  for (int i = 0; i < draws; ++i) {
    const auto s = sample(w, 2, goal, 0.0, rng);
    REQUIRE(w.is_free(s[0]));
    REQUIRE(w.is_free(s[1]));
    REQUIRE(s[0] != s[1]);
    ++hits[{s[0], s[1]}];
    ++first[s[0]];
    ++second[s[1]];
  }
  // a handful of fixed states
  const double p = 1.0 / pairs;
  const double mean = draws * p, sd = std::sqrt(draws * p * (1 - p));
  for (int k = 0; k < 20; ++k) {
    const std::pair<Cell, Cell> key{free[k], free[free.size() - 1 - k]};
    const double c = hits.count(key) ? hits[key] : 0;
    CHECK(std::fabs(c - mean) <= 5 * sd);
  }
  // every per-agent marginal
  const double pm = 1.0 / F;
  const double mm = draws * pm, sm = std::sqrt(draws * pm * (1 - pm));
  for (Cell c : free) {
    CHECK(std::fabs(first[c] - mm) <= 5 * sm);
    CHECK(std::fabs(second[c] - mm) <= 5 * sm);
  }
}

TEST_CASE("sample rejects worlds with too few free cells") {
  std::vector<Cell> obs;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if (x || y) obs.push_back({x, y});
  const GridWorld w(3, obs);
  Rng rng(1);
  CHECK_THROWS_AS(sample(w, 2, JointState{{0, 0}, {0, 0}}, 0.0, rng), InfeasibleInstance);
}

TEST_CASE("biased_sample with beta = 0 is sample") {
  const GridWorld w = generate_world(10, 0.1, 5);
  const std::vector<std::vector<Cell>> guides{{{1, 1}, {1, 2}}, {{5, 5}}};
  const JointState goal{w.free_cells()[0], w.free_cells()[1]};
  Rng a(4), b(4);
  for (int i = 0; i < 2000; ++i)
    CHECK(biased_sample(guides, 0.0, 2, w, goal, 0.1, a) == sample(w, 2, goal, 0.1, b));
}

TEST_CASE("biased_sample with radius 0 stays on the guides") {
  const GridWorld w(10, {});
  std::vector<Cell> g0, g1;
  for (int x = 0; x < 10; ++x) g0.push_back({x, 0});
  for (int y = 0; y < 10; ++y) g1.push_back({9, y});
  g1.erase(g1.begin());  // (9,0) would collide with the end of g0
  const std::vector<std::vector<Cell>> guides{g0, g1};
  Rng rng(2);
  for (int i = 0; i < 5000; ++i) {
    const auto s = biased_sample(guides, 1.0, 0, w, JointState{{0, 9}, {1, 9}}, 0.0, rng);
    CHECK(std::find(g0.begin(), g0.end(), s[0]) != g0.end());
    CHECK(std::find(g1.begin(), g1.end(), s[1]) != g1.end());
  }
}

TEST_CASE("biased_sample with radius 2 stays within Chebyshev 2 of its guide") {
  const GridWorld w = generate_world(20, 0.1, 8);
  std::vector<std::vector<Cell>> guides(3);
  for (int x = 0; x < 20; ++x) {
    if (w.is_free({x, 2})) guides[0].push_back({x, 2});
    if (w.is_free({x, 10})) guides[1].push_back({x, 10});
    if (w.is_free({x, 17})) guides[2].push_back({x, 17});
  }
  Rng rng(6);
  for (int i = 0; i < 10000; ++i) {
    const auto s = biased_sample(guides, 1.0, 2, w, JointState{{0, 0}, {0, 1}, {0, 3}}, 0.0, rng);
    REQUIRE(pairwise_distinct(s.cells()));
    for (std::size_t a = 0; a < 3; ++a) {
      REQUIRE(w.is_free(s[a]));
      int best = 1 << 30;
      for (Cell c : guides[a]) best = std::min(best, chebyshev(c, s[a]));
      CHECK(best <= 2);
    }
  }
}

TEST_CASE("plan: start equal to goal is solved at iteration 0") {
  const GridWorld w(5, {});
  const Instance inst{w, {{2, 2}}, {{2, 2}}, 0};
  for (Algorithm a : kAll) {
    const auto r = plan(inst, config(a, 50));
    REQUIRE(r.solved());
    CHECK(*r.first_cost == 0);
    CHECK(*r.best_cost == 0);
    if (!is_informed(a)) CHECK(*r.first_iteration == 0);
  }
}

TEST_CASE("plan: single agent converges to the BFS length") {
  const GridWorld w(10, {});
  Rng rng(77);
  int optimal = 0;
  for (int run = 0; run < 50; ++run) {
    Cell s = w.free_cells()[rng.uniform_index(100)], d = s;
    while (d == s) d = w.free_cells()[rng.uniform_index(100)];
    const Instance inst{w, {s}, {d}, static_cast<std::uint64_t>(run)};
    const auto r = plan(inst, config(Algorithm::marrt_star, 2000, 1000 + run));
    REQUIRE(r.solved());
    const Cost bfs = bfs_distance_field(w, d).at(s);
    CHECK(*r.best_cost >= bfs);
    optimal += *r.best_cost == bfs;
  }
  CHECK(optimal >= 48);  // 95% of 50, rounded up
}

TEST_CASE("plan: capped runs never hold more than M nodes") {
  const GridWorld w = generate_world(10, 0.1, 12);
  const Instance inst = generate_instance(w, 3, 4);
  auto cfg = config(Algorithm::marrt_star_fn, 10000);
  cfg.node_cap = 200;
  std::size_t peak = 0;
  bool over = false;
  const auto r = plan(inst, cfg, [&](const IterationEvent& e) {
    peak = std::max(peak, e.node_count);
    over = over || e.node_count > 200;
  });
  CHECK_FALSE(over);
  CHECK(peak == 200);
  CHECK(r.max_node_count <= 200);
  check_record(inst, r);
}

TEST_CASE("plan: uncapped node count is non-decreasing") {
  const GridWorld w = generate_world(10, 0.1, 12);
  const Instance inst = generate_instance(w, 2, 9);
  std::size_t last = 0;
  bool shrank = false;
  plan(inst, config(Algorithm::marrt_star, 3000), [&](const IterationEvent& e) {
    shrank = shrank || e.node_count < last;
    last = e.node_count;
  });
  CHECK_FALSE(shrank);
  CHECK(last > 1);
}

TEST_CASE("plan: every algorithm returns valid, monotone results") {
  Rng rng(5);
  for (int k = 0; k < 6; ++k) {
    const GridWorld w = generate_world(8 + 2 * k, 0.1, rng.next_u64());
    const Instance inst = generate_instance(w, 1 + k % 4, rng.next_u64());
    for (Algorithm a : kAll) {
      auto cfg = config(a, 3000, rng.next_u64());
      cfg.node_cap = 150;
      const auto r = plan(inst, cfg);
      CHECK(r.iterations_executed == 3000);
      check_record(inst, r);
    }
  }
}

TEST_CASE("plan is deterministic under iteration budgets") {
  const GridWorld w = generate_world(12, 0.1, 3);
  const Instance inst = generate_instance(w, 3, 3);
  for (Algorithm a : kAll) {
    auto cfg = config(a, 1500, 42);
    cfg.node_cap = 100;
    const auto x = record_to_json(plan(inst, cfg), false);
    const auto y = record_to_json(plan(inst, cfg), false);
    CHECK(x == y);
  }
}

TEST_CASE("plan: wall-clock budgets and early stop") {
  const GridWorld w = generate_world(10, 0.1, 3);
  const Instance inst = generate_instance(w, 2, 3);
  PlannerConfig cfg;
  cfg.budget = Budget::seconds(0.2);
  const auto r = plan(inst, cfg);
  CHECK(r.elapsed_s >= 0.2);
  CHECK(r.elapsed_s < 1.0);
  if (r.solved()) CHECK(*r.time_to_first_s <= r.elapsed_s);

  cfg.budget = Budget::iterations(5000);
  cfg.stop_at_first_solution = true;
  const auto s = plan(inst, cfg);
  REQUIRE(s.solved());
  CHECK(s.iterations_executed == *s.first_iteration);
}

TEST_CASE("plan rejects malformed instances") {
  const GridWorld w(5, {});
  CHECK_THROWS_AS(plan(Instance{w, {{0, 0}, {0, 0}}, {{1, 1}, {2, 2}}, 0}, config(Algorithm::marrt_star, 10)),
                  InfeasibleInstance);
  CHECK_THROWS_AS(plan(Instance{w, {{0, 0}}, {{1, 1}, {2, 2}}, 0}, config(Algorithm::marrt_star, 10)),
                  InfeasibleInstance);
}

TEST_CASE("G-RRT* single-agent planner") {
  const GridWorld w(10, {});
  PlannerConfig cfg;
  cfg.seed = 3;
  auto r = plan_single_agent_grrt_star(w, {4, 4}, {4, 4}, cfg, Budget::iterations(10));
  REQUIRE(r.cost);
  CHECK(*r.cost == 0);

  r = plan_single_agent_grrt_star(w, {0, 0}, {9, 9}, cfg, Budget::iterations(3000));
  REQUIRE(r.cost);
  CHECK(*r.cost == 18);
  CHECK(r.path->front() == Cell{0, 0});
  CHECK(r.path->back() == Cell{9, 9});

  const GridWorld walled(10, {{8, 9}, {9, 8}});
  r = plan_single_agent_grrt_star(walled, {0, 0}, {9, 9}, cfg, Budget::iterations(500));
  CHECK_FALSE(r.cost.has_value());
  CHECK_FALSE(r.path.has_value());
}

TEST_CASE("informed planning: one agent, unreachable agent, cap saturation") {
  const GridWorld w = generate_world(10, 0.1, 21);
  const Instance one = generate_instance(w, 1, 2);
  auto r = plan_informed(one, config(Algorithm::is_marrt_star_fn, 2000));
  REQUIRE(r.solved());
  check_record(one, r);

  const GridWorld walled(10, {{8, 9}, {9, 8}});
  const Instance cut{walled, {{0, 0}, {5, 5}}, {{9, 9}, {1, 1}}, 0};
  r = plan_informed(cut, config(Algorithm::is_marrt_star_fn, 1000));
  CHECK_FALSE(r.solved());
  CHECK(r.iterations_executed == 1000);

  const GridWorld big = generate_world(30, 0.1, 8);
  const Instance three = generate_instance(big, 3, 8);
  auto cfg = config(Algorithm::is_marrt_star_fn, 5000);
  cfg.node_cap = 1000;
  r = plan(three, cfg);
  for (const auto& p : r.node_count_trace) CHECK(p.value <= 1000);
  CHECK(r.max_node_count <= 1000);
  check_record(three, r);
}

TEST_CASE("informed runs report phase-one progress") {
  const GridWorld w = generate_world(10, 0.1, 2);
  const Instance inst = generate_instance(w, 2, 2);
  int phase1 = 0, phase2 = 0;
  std::uint64_t last = 0;
  bool ordered = true;
  plan(inst, config(Algorithm::is_marrt_star, 1000), [&](const IterationEvent& e) {
    (e.phase == 1 ? phase1 : phase2)++;
    ordered = ordered && e.iteration >= last;
    last = e.iteration;
  });
  CHECK(phase1 >= 200);
  CHECK(phase2 > 0);
  CHECK(ordered);
}
