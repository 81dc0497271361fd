// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.
//
//   acceptance [work_dir]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "marrt/batch.hpp"
#include "marrt/metrics.hpp"
#include "marrt/oracle.hpp"
#include "marrt/report.hpp"
#include "marrt/serialize.hpp"
#include "marrt/validate.hpp"
#include "properties.hpp"

using namespace marrt;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const std::vector<Algorithm> kAll{Algorithm::marrt_star, Algorithm::marrt_star_fn,
                                  Algorithm::is_marrt_star, Algorithm::is_marrt_star_fn};

int workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct Batch {
  std::string name;
  std::vector<NamedInstance> instances;
  std::vector<Algorithm> algorithms;
  PlannerConfig planner;
  Budget budget;
  std::vector<RunRecord> records;
  double seconds = 0;

  void run(const fs::path& dir) {
    fs::remove_all(dir);
    write_instances(instances, dir / "instances");
    BatchOptions opts;
    opts.workers = workers();
    opts.out_dir = dir;
    const auto t0 = Clock::now();
    records = run_batch(instances, algorithms, planner, budget, opts);
    seconds = since(t0);
  }

  std::map<std::string, const Instance*> by_id() const {
    std::map<std::string, const Instance*> m;
    for (const auto& ni : instances) m[ni.id] = &ni.instance;
    return m;
  }
};

ExperimentSpec spec(int size, int agents, int count, std::uint64_t seed) {
  ExperimentSpec s;
  s.grid_sizes = {size};
  s.agent_counts = {agents};
  s.instances_per_cell = count;
  s.obstacle_ratio = 0.1;
  s.master_seed = seed;
  return s;
}

// 60 instances: 30 on 10x10 then 30 on 30x30, agent counts cycling 1..4.
std::vector<NamedInstance> mixed_set(std::uint64_t master) {
  std::vector<NamedInstance> out;
  for (int k = 0; k < 60; ++k) {
    const int size = k < 30 ? 10 : 30;
    const int n = 1 + k % 4;
    const std::uint64_t ws = derive_seed(master, static_cast<std::uint64_t>(k)) >> 11;
    const GridWorld w = generate_world(size, 0.1, ws);
    char id[32];
    std::snprintf(id, sizeof id, "mixed_g%03d_a%02d_%02d", size, n, k);
    out.push_back({id, generate_instance(w, n, derive_seed(ws, 1) >> 11)});
  }
  return out;
}

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Line> results;

void report_line(int id, const std::string& name, bool pass, const std::string& detail) {
  results.push_back({id, name, pass, detail});
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << name << " | " << detail
            << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "marrt_acceptance";
  fs::create_directories(work);
  std::cout << "work dir " << work.string() << ", " << workers() << " worker(s)" << std::endl;

  // Saturation batch: 20 instances, 3 agents, 30x30, M = 1000, 5000 iterations.
  Batch sat;
  sat.name = "saturation";
  sat.instances = build_instance_set(spec(30, 3, 20, 20240601));
  sat.algorithms = kAll;
  sat.planner.node_cap = 1000;
  sat.planner.trace_stride = 1;
  sat.budget = Budget::iterations(5000);
  sat.run(work / "saturation");
  std::cout << "saturation batch: " << fmt("%.1f s", sat.seconds) << std::endl;

  // Oracle batches: 30 instances, 2 agents, 5x5.
  Batch long_run;
  long_run.name = "oracle_50k";
  long_run.instances = build_instance_set(spec(5, 2, 30, 777));
  long_run.algorithms = {Algorithm::marrt_star};
  long_run.budget = Budget::iterations(50000);
  long_run.run(work / "oracle_50k");

  Batch equal;
  equal.name = "oracle_20k";
  equal.instances = long_run.instances;
  equal.algorithms = kAll;
  equal.planner.node_cap = 200;
  equal.budget = Budget::iterations(20000);
  equal.run(work / "oracle_20k");
  std::cout << "oracle batches: " << fmt("%.1f s", long_run.seconds) << " + "
            << fmt("%.1f s", equal.seconds) << std::endl;

  auto t0 = Clock::now();
  std::map<std::string, Cost> oracle;
  for (const auto& ni : long_run.instances) {
    const auto o = oracle_joint_optimal(ni.instance);
    if (o.cost) oracle[ni.id] = *o.cost;
  }
  const double oracle_s = since(t0);

  // Wall-clock batch: 60 instances, 5 s each, stopping at the first solution.
  Batch timed;
  timed.name = "informed_5s";
  timed.instances = mixed_set(4242);
  timed.algorithms = kAll;
  timed.planner.stop_at_first_solution = true;
  timed.budget = Budget::seconds(5);
  timed.run(work / "informed_5s");
  std::cout << "wall-clock batch: " << fmt("%.1f s", timed.seconds) << std::endl;

  // 1. node-cap saturation
  {
    int capped_ok = 0, capped = 0, grew = 0, uncapped = 0, monotone = 0;
    std::size_t peak = 0;
    for (const auto& r : sat.records) {
      if (r.algorithm == Algorithm::marrt_star_fn) {
        ++capped;
        bool ok = r.max_node_count <= 1000 && r.node_count_trace.size() == 5001;
        for (const auto& p : r.node_count_trace) ok = ok && p.value <= 1000;
        capped_ok += ok;
        peak = std::max(peak, r.max_node_count);
      } else if (r.algorithm == Algorithm::marrt_star) {
        ++uncapped;
        bool nd = r.node_count_trace.size() == 5001;
        for (std::size_t k = 1; k < r.node_count_trace.size(); ++k)
          nd = nd && r.node_count_trace[k].value >= r.node_count_trace[k - 1].value;
        monotone += nd;
        grew += r.max_node_count > 1000;
      }
    }
    const bool pass = capped == 20 && capped_ok == 20 && uncapped == 20 && monotone == 20 && grew * 10 >= 9 * uncapped;
    report_line(1, "node-cap saturation", pass,
                "MA-RRT*FN within M=1000 at every iteration on " + std::to_string(capped_ok) + "/20 (peak " +
                    std::to_string(peak) + "); MA-RRT* non-decreasing on " + std::to_string(monotone) +
                    "/20, above 1000 nodes on " + std::to_string(grew) + "/20 (need >= 18); batch " +
                    fmt("%.0f s", sat.seconds));
  }

  // 2. anytime monotonicity
  {
    int bad = 0, solved = 0;
    for (const auto& r : sat.records) {
      solved += r.solved();
      for (std::size_t k = 1; k < r.cost_trace.size(); ++k)
        if (r.cost_trace[k].value > r.cost_trace[k - 1].value ||
            r.cost_trace[k].iteration <= r.cost_trace[k - 1].iteration)
          ++bad;
      if (r.solved() && (r.cost_trace.empty() || r.cost_trace.back().value != *r.best_cost)) ++bad;
    }
    report_line(2, "anytime monotonicity", bad == 0 && sat.records.size() == 80,
                std::to_string(sat.records.size()) + " runs (" + std::to_string(solved) +
                    " solved), " + std::to_string(bad) + " trace violations");
  }

  // 3. validity
  {
    int checked = 0, invalid = 0, failed = 0;
    for (const Batch* b : {&sat, &long_run, &equal, &timed}) {
      const auto ids = b->by_id();
      for (const auto& r : b->records) {
        failed += r.status != "ok";
        if (!r.solution) continue;
        ++checked;
        const Instance& inst = *ids.at(r.instance_id);
        const bool ok = validate_solution(inst, *r.solution).valid() &&
                        path_cost(*r.solution, JointState(inst.goals)) == *r.best_cost;
        invalid += !ok;
      }
    }
    report_line(3, "solution validity", invalid == 0 && failed == 0 && checked > 0,
                std::to_string(checked) + " solutions checked, " + std::to_string(invalid) + " invalid, " +
                    std::to_string(failed) + " failed runs");
  }

  // 4. oracle floor and convergence
  {
    int below = 0, compared = 0, within = 0;
    for (const Batch* b : {&long_run, &equal})
      for (const auto& r : b->records) {
        auto o = oracle.find(r.instance_id);
        if (o == oracle.end() || !r.solved()) continue;
        ++compared;
        below += *r.first_cost < o->second || *r.best_cost < o->second;
      }
    for (const auto& r : long_run.records) {
      auto o = oracle.find(r.instance_id);
      if (o != oracle.end() && r.solved() && suboptimality(*r.best_cost, o->second) <= 5.0) ++within;
    }
    const bool pass = oracle.size() == 30 && below == 0 && within * 10 >= 8 * 30;
    report_line(4, "oracle floor and convergence", pass,
                std::to_string(oracle.size()) + "/30 oracle costs; " + std::to_string(below) + " of " +
                    std::to_string(compared) + " solutions below the oracle; MA-RRT* at 50k iterations within 5% on " +
                    std::to_string(within) + "/30 (need >= 24); " +
                    fmt("%.0f s", long_run.seconds + oracle_s));
  }

  // 5. capped vs uncapped quality at 20k iterations
  {
    double sum_u = 0, sum_c = 0;
    int n_u = 0, n_c = 0;
    for (const auto& r : equal.records) {
      auto o = oracle.find(r.instance_id);
      if (o == oracle.end() || !r.solved()) continue;
      const double s = suboptimality(*r.best_cost, o->second);
      if (r.algorithm == Algorithm::marrt_star) sum_u += s, ++n_u;
      if (r.algorithm == Algorithm::marrt_star_fn) sum_c += s, ++n_c;
    }
    const double mu = n_u ? sum_u / n_u : 0, mc = n_c ? sum_c / n_c : 0;
    const bool pass = n_u == 30 && n_c == 30 && std::fabs(mc - mu) <= 10.0;
    report_line(5, "capped vs uncapped quality", pass,
                "mean best suboptimality MA-RRT* " + fmt("%.2f%%", mu) + " (" + std::to_string(n_u) +
                    "/30 solved), MA-RRT*FN M=200 " + fmt("%.2f%%", mc) + " (" + std::to_string(n_c) +
                    "/30 solved), gap " + fmt("%.2f pp", std::fabs(mc - mu)) + " (limit 10); " +
                    fmt("%.0f s", equal.seconds));
  }

  // 6. informed ordering under 5 s
  {
    std::map<Algorithm, int> solved;
    for (const auto& r : timed.records) solved[r.algorithm] += r.solved();
    const bool pass = solved[Algorithm::is_marrt_star_fn] >= solved[Algorithm::marrt_star_fn] &&
                      solved[Algorithm::is_marrt_star] >= solved[Algorithm::marrt_star];
    std::string d;
    for (Algorithm a : kAll) d += to_string(a) + " " + std::to_string(solved[a]) + "/60, ";
    report_line(6, "informed solve-count ordering", pass, d + fmt("%.0f s", timed.seconds));
  }

  // 7. determinism of the iteration-budgeted batches
  {
    t0 = Clock::now();
    std::vector<std::string> diffs;
    for (Batch* b : {&sat, &long_run, &equal}) {
      Batch again = *b;
      const fs::path d1 = work / b->name, d2 = work / (b->name + "_rerun");
      again.run(d2);
      report(d1, d1 / "report");
      report(d2, d2 / "report");
      if (slurp(d1 / "records.jsonl") != slurp(d2 / "records.jsonl")) diffs.push_back(b->name + "/records.jsonl");
      for (const auto& e : fs::recursive_directory_iterator(d1 / "report")) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), d1);
        if (slurp(e.path()) != slurp(d2 / rel)) diffs.push_back(b->name + "/" + rel.string());
      }
    }
    report_line(7, "determinism", diffs.empty(),
                diffs.empty() ? "records.jsonl and report files byte-identical for 3 reruns; " + fmt("%.0f s", since(t0))
                              : "differs: " + diffs.front());
  }

  // 8. property suites
  {
    t0 = Clock::now();
    std::vector<std::pair<std::string, std::string>> suites{
        {"metric axioms", props::metric_axioms(101, 100000)},
        {"collision symmetry and faults", props::collision_symmetry(102, 100000)},
        {"tree audit (10^4 ops)", props::tree_audit(103, 10000, 40, 2, 7)},
        {"tree audit 3 agents (10^4 ops)", props::tree_audit(104, 10000, 60, 3, 6)},
        {"greedy prefix monotonicity", props::greedy_prefix_monotone(105, 20000)},
        {"eq1 arithmetic", props::eq1_arithmetic(106, 1000000)},
    };
    std::string failures;
    for (const auto& [name, msg] : suites)
      if (!msg.empty()) failures += name + ": " + msg + "; ";
    const double s = since(t0);
    report_line(8, "property suites", failures.empty() && s <= 120.0,
                failures.empty() ? std::to_string(suites.size()) + " suites clean in " + fmt("%.1f s", s)
                                 : failures);
  }

  int failed = 0;
  for (const auto& l : results) failed += !l.pass;
  std::cout << (failed ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED") << " (" << results.size() - failed << "/"
            << results.size() << ")" << std::endl;
  return failed ? 1 : 0;
}
