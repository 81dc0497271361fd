// marrt: instance generation, planning, batch benchmarking, oracle and reports.
//
// Exit codes: 0 success, 1 invalid input, 2 budget expired without a solution
// (plan only), 3 internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "marrt/batch.hpp"
#include "marrt/errors.hpp"
#include "marrt/oracle.hpp"
#include "marrt/planner.hpp"
#include "marrt/report.hpp"
#include "marrt/serialize.hpp"
#include "marrt/validate.hpp"

namespace fs = std::filesystem;
using namespace marrt;

namespace {

enum Exit { kOk = 0, kInvalidInput = 1, kNoSolution = 2, kInternal = 3 };

// "1..10", "10,30" or a mix such as "1..3,8".
std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty()) throw std::invalid_argument("empty entry in list '" + s + "'");
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stoi(tok));
    } else {
      const int lo = std::stoi(tok.substr(0, dots));
      const int hi = std::stoi(tok.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("descending range '" + tok + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct GenArgs {
  std::string sizes = "10";
  std::string agents = "1";
  int per_cell = 1;
  double ratio = 0.1;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  ExperimentSpec spec;
  spec.grid_sizes = parse_int_list(a.sizes);
  spec.agent_counts = parse_int_list(a.agents);
  spec.instances_per_cell = a.per_cell;
  spec.obstacle_ratio = a.ratio;
  spec.master_seed = a.seed;
  const auto set = build_instance_set(spec);
  write_instances(set, a.out);
  std::cout << "wrote " << set.size() << " instances to " << a.out << "\n";
  return kOk;
}

struct PlanArgs {
  std::string instance, algo = "marrt*fn", budget = "5s", out, config, solution, tree_dump;
  std::optional<std::size_t> cap;
  std::optional<double> goal_bias;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trace_stride;
};

int run_plan(const PlanArgs& a) {
  const Instance inst = instance_from_json(read_json_file(a.instance));
  PlannerConfig cfg;
  if (!a.config.empty()) cfg = config_from_json(read_json_file(a.config));
  cfg.algorithm = parse_algorithm(a.algo);
  cfg.budget = parse_budget(a.budget);
  if (a.cap) cfg.node_cap = *a.cap;
  if (a.goal_bias) cfg.goal_bias = *a.goal_bias;
  if (a.seed) cfg.seed = *a.seed;
  if (a.trace_stride) cfg.trace_stride = *a.trace_stride;

  TreeSink sink;
  if (!a.tree_dump.empty())
    sink = [&](const Tree& t) { write_text_file(a.tree_dump, tree_dump(t)); };
  RunRecord rec = plan(inst, cfg, {}, sink);
  rec.instance_id = fs::path(a.instance).stem().string();

  const std::string line = dump_line(record_to_json(rec, true));
  if (a.out.empty()) std::cout << line;
  else write_text_file(a.out, line);
  if (!a.solution.empty() && rec.solution)
    write_text_file(a.solution, solution_to_json(*rec.solution, *rec.best_cost, inst.seed).dump(1) + "\n");
  if (!rec.solved()) {
    std::cerr << "no solution within " << to_string(cfg.budget) << "\n";
    return kNoSolution;
  }
  std::cerr << to_string(rec.algorithm) << ": first cost " << *rec.first_cost << ", best cost "
            << *rec.best_cost << " after " << rec.iterations_executed << " iterations\n";
  return kOk;
}

int run_bench(const std::string& spec_file, std::optional<int> workers, const std::string& out,
              bool dump_trees) {
  const ExperimentSpec spec = spec_from_json(read_json_file(spec_file));
  const auto set = build_instance_set(spec);
  const fs::path dir(out);
  write_instances(set, dir / "instances");
  write_text_file(dir / "spec.json", spec_to_json(spec).dump(1) + "\n");
  BatchOptions opts;
  opts.workers = workers.value_or(spec.workers);
  opts.out_dir = dir;
  opts.dump_trees = dump_trees;
  const auto records = run_batch(set, spec.algorithms, spec.planner, spec.budget, opts);
  std::size_t solved = 0, failed = 0;
  for (const auto& r : records) {
    solved += r.solved();
    failed += r.status != "ok";
  }
  std::cout << records.size() << " runs, " << solved << " solved, " << failed << " failed\n";
  return kOk;
}

int run_oracle(const std::string& instance_file, const std::string& out, std::uint64_t max_states) {
  const Instance inst = instance_from_json(read_json_file(instance_file));
  check_instance(inst);
  OracleLimits limits;
  limits.max_joint_states = max_states;
  const auto r = oracle_joint_optimal(inst, limits);
  json j;
  j["status"] = r.cost ? "solved" : (r.limit_exceeded ? "limit_exceeded" : "unsolvable");
  j["cost"] = r.cost ? json(*r.cost) : json(nullptr);
  j["steps"] = r.path ? steps_to_json(*r.path) : json(nullptr);
  j["expanded"] = r.expanded;
  j["instance_seed"] = inst.seed;
  j["format_version"] = kFormatVersion;
  const std::string text = j.dump(1) + "\n";
  if (out.empty()) std::cout << text;
  else write_text_file(out, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memory-bounded multi-agent RRT* planners and benchmark harness"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random instance set");
  g->add_option("--sizes", gen.sizes, "grid sizes, e.g. 10,30 or 10..12")->required();
  g->add_option("--agents", gen.agents, "agent counts, e.g. 1..10")->required();
  g->add_option("--per-cell", gen.per_cell, "instances per (size, agents) pair");
  g->add_option("--obstacle-ratio", gen.ratio, "fraction of cells blocked")->check(CLI::Range(0.0, 0.999));
  g->add_option("--seed", gen.seed, "master seed");
  g->add_option("--out", gen.out, "output directory")->required();

  PlanArgs pa;
  auto* p = app.add_subcommand("plan", "run one planner on one instance");
  p->add_option("--instance", pa.instance, "instance JSON file")->required()->check(CLI::ExistingFile);
  p->add_option("--algo", pa.algo, "marrt*, marrt*fn, ismarrt* or ismarrt*fn");
  p->add_option("--budget", pa.budget, "e.g. 5s or 5000it");
  p->add_option("--cap", pa.cap, "node cap M for the capped variants");
  p->add_option("--goal-bias", pa.goal_bias, "goal sampling probability p");
  p->add_option("--seed", pa.seed, "planner seed");
  p->add_option("--trace-stride", pa.trace_stride, "node-count trace period");
  p->add_option("--config", pa.config, "planner config JSON (flags override it)")->check(CLI::ExistingFile);
  p->add_option("--out", pa.out, "run record output (stdout when omitted)");
  p->add_option("--solution", pa.solution, "write the best solution file here");
  p->add_option("--tree-dump", pa.tree_dump, "write the final tree as JSON lines here");

  std::string spec_file, bench_out;
  std::optional<int> workers;
  bool dump_trees = false;
  auto* b = app.add_subcommand("bench", "run an experiment spec");
  b->add_option("--spec", spec_file, "experiment spec JSON")->required()->check(CLI::ExistingFile);
  b->add_option("--workers", workers, "parallel planner runs");
  b->add_option("--out", bench_out, "output directory")->required();
  b->add_flag("--dump-trees", dump_trees, "keep each run's final tree for SVG export");

  std::string oracle_instance, oracle_out;
  std::uint64_t max_states = OracleLimits{}.max_joint_states;
  auto* o = app.add_subcommand("oracle", "exact joint-space optimum for small instances");
  o->add_option("--instance", oracle_instance, "instance JSON file")->required()->check(CLI::ExistingFile);
  o->add_option("--out", oracle_out, "output file (stdout when omitted)");
  o->add_option("--max-states", max_states, "joint position space limit");

  std::string rec_dir, report_out;
  bool no_svg = false;
  auto* r = app.add_subcommand("report", "CSV and SVG reports from a bench directory");
  r->add_option("--records", rec_dir, "bench output directory")->required()->check(CLI::ExistingDirectory);
  r->add_option("--out", report_out, "report directory")->required();
  r->add_flag("--no-svg", no_svg, "skip SVG renderings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*g) return run_gen(gen);
    if (*p) return run_plan(pa);
    if (*b) return run_bench(spec_file, workers, bench_out, dump_trees);
    if (*o) return run_oracle(oracle_instance, oracle_out, max_states);
    if (*r) {
      ReportOptions opts;
      opts.svg = !no_svg;
      report(rec_dir, report_out, opts);
      return kOk;
    }
  } catch (const FormatError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const InfeasibleInstance& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
