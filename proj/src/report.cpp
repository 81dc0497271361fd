#include "marrt/report.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "marrt/metrics.hpp"
#include "marrt/serialize.hpp"

namespace marrt {

namespace {

constexpr int kPx = 20;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

template <class T>
std::string opt_str(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) return fmt(*v);
  else return std::to_string(*v);
}

const char* agent_color(std::size_t i) {
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
  return palette[i % 10];
}

int center(int v) { return v * kPx + kPx / 2; }

}  // namespace

std::string render_svg(const Instance& inst, const JointPath* best,
                       const std::vector<JointPath>& tree_edges) {
  const int s = inst.world.size();
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << s * kPx << "\" height=\""
    << s * kPx << "\" viewBox=\"0 0 " << s * kPx << " " << s * kPx << "\">\n";
  o << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << s * kPx << "\" height=\""
    << s * kPx << "\" fill=\"white\" stroke=\"#cccccc\"/>\n";
  for (Cell c : inst.world.obstacles())
    o << "<rect class=\"obstacle\" x=\"" << c.x * kPx << "\" y=\"" << c.y * kPx
      << "\" width=\"" << kPx << "\" height=\"" << kPx << "\" fill=\"black\"/>\n";

  // unique per-agent segments of the tree
  std::set<std::tuple<int, int, int, int>> segs;
  for (const auto& e : tree_edges)
    for (std::size_t t = 1; t < e.steps(); ++t)
      for (std::size_t a = 0; a < e.agents(); ++a) {
        const Cell p = e.cell(t - 1, a), q = e.cell(t, a);
        if (p == q) continue;
        segs.insert(p < q ? std::tuple{p.x, p.y, q.x, q.y} : std::tuple{q.x, q.y, p.x, p.y});
      }
  for (const auto& [x1, y1, x2, y2] : segs)
    o << "<line class=\"tree\" x1=\"" << center(x1) << "\" y1=\"" << center(y1) << "\" x2=\""
      << center(x2) << "\" y2=\"" << center(y2) << "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";

  if (best) {
    for (std::size_t a = 0; a < best->agents(); ++a) {
      o << "<polyline class=\"path\" data-agent=\"" << a << "\" fill=\"none\" stroke=\""
        << agent_color(a) << "\" stroke-width=\"4\" points=\"";
      for (std::size_t t = 0; t < best->steps(); ++t) {
        const Cell c = best->cell(t, a);
        o << (t ? " " : "") << center(c.x) << "," << center(c.y);
      }
      o << "\"/>\n";
    }
  }
  for (std::size_t a = 0; a < inst.agents(); ++a) {
    const Cell st = inst.starts[a], g = inst.goals[a];
    o << "<circle class=\"start\" data-agent=\"" << a << "\" cx=\"" << center(st.x)
      << "\" cy=\"" << center(st.y) << "\" r=\"" << kPx / 3 << "\" fill=\"" << agent_color(a)
      << "\"/>\n";
    o << "<rect class=\"goal\" data-agent=\"" << a << "\" x=\"" << g.x * kPx + kPx / 4
      << "\" y=\"" << g.y * kPx + kPx / 4 << "\" width=\"" << kPx / 2 << "\" height=\""
      << kPx / 2 << "\" fill=\"none\" stroke=\"" << agent_color(a) << "\" stroke-width=\"2\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::map<std::string, std::string> build_report(
    const std::vector<RunRecord>& records, const std::map<std::string, Instance>& instances,
    const std::map<std::string, std::vector<JointPath>>& tree_edges, const ReportOptions& opts) {
  std::map<std::string, std::string> files;

  std::vector<Algorithm> algos;
  for (const auto& r : records)
    if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end())
      algos.push_back(r.algorithm);
  std::sort(algos.begin(), algos.end());

  std::string curve = "algorithm,rank,first_iteration,time_to_first_s\n";
  for (Algorithm a : algos) {
    bool wall_clock = false;
    for (const auto& r : records)
      if (r.algorithm == a && r.budget.kind == Budget::Kind::seconds) wall_clock = true;
    const auto pts = wall_clock ? performance_curve(records, a)
                                : performance_curve_by_iteration(records, a);
    for (const auto& p : pts)
      curve += to_string(a) + "," + std::to_string(p.rank) + "," +
               std::to_string(p.first_iteration) + "," + (wall_clock ? fmt(p.time_s) : "") + "\n";
  }
  files["performance_curve.csv"] = curve;

  std::map<std::string, Reference> refs;
  std::string sub =
      "instance_id,algorithm,solved,first_cost,best_cost,reference_cost,reference_kind,"
      "first_suboptimality,best_suboptimality\n";
  struct Agg {
    std::size_t n = 0, solved = 0, sub_n = 0;
    double first_sum = 0, best_sum = 0;
  };
  std::map<Algorithm, Agg> agg;
  for (const auto& r : records) {
    auto& g = agg[r.algorithm];
    ++g.n;
    std::string ref_cost, ref_kind, fs, bs;
    auto inst = instances.find(r.instance_id);
    if (inst != instances.end()) {
      auto it = refs.find(r.instance_id);
      if (it == refs.end()) it = refs.emplace(r.instance_id, reference_cost(inst->second, opts.limits)).first;
      const Reference& ref = it->second;
      if (ref.cost != kUnreachable) {
        ref_cost = std::to_string(ref.cost);
        ref_kind = to_string(ref.kind);
        if (r.first_cost && r.best_cost && (ref.cost > 0 || *r.best_cost == 0)) {
          const double f = suboptimality(*r.first_cost, ref.cost);
          const double b = suboptimality(*r.best_cost, ref.cost);
          fs = fmt(f);
          bs = fmt(b);
          ++g.sub_n;
          g.first_sum += f;
          g.best_sum += b;
        }
      }
    }
    if (r.solved()) ++g.solved;
    sub += r.instance_id + "," + to_string(r.algorithm) + "," + (r.solved() ? "1" : "0") + "," +
           opt_str(r.first_cost) + "," + opt_str(r.best_cost) + "," + ref_cost + "," + ref_kind +
           "," + fs + "," + bs + "\n";
  }
  files["suboptimality.csv"] = sub;

  std::string summary =
      "algorithm,instances,solved,solve_rate,mean_first_suboptimality,mean_best_suboptimality\n";
  for (const auto& [a, g] : agg) {
    summary += to_string(a) + "," + std::to_string(g.n) + "," + std::to_string(g.solved) + "," +
               fmt(g.n ? static_cast<double>(g.solved) / g.n : 0.0) + "," +
               (g.sub_n ? fmt(g.first_sum / g.sub_n) : "") + "," +
               (g.sub_n ? fmt(g.best_sum / g.sub_n) : "") + "\n";
  }
  files["summary.csv"] = summary;

  std::string costs = "instance_id,algorithm,iteration,best_cost\n";
  std::string nodes = "instance_id,algorithm,iteration,node_count\n";
  for (const auto& r : records) {
    for (const auto& p : r.cost_trace)
      costs += r.instance_id + "," + to_string(r.algorithm) + "," + std::to_string(p.iteration) +
               "," + std::to_string(p.value) + "\n";
    for (const auto& p : r.node_count_trace)
      nodes += r.instance_id + "," + to_string(r.algorithm) + "," + std::to_string(p.iteration) +
               "," + std::to_string(p.value) + "\n";
  }
  files["cost_trace.csv"] = costs;
  files["node_count.csv"] = nodes;

  if (opts.svg) {
    static const std::vector<JointPath> no_edges;
    for (const auto& r : records) {
      auto inst = instances.find(r.instance_id);
      if (inst == instances.end()) continue;
      const std::string key = r.instance_id + "__" + to_string(r.algorithm);
      auto te = tree_edges.find(key);
      files["svg/" + key + ".svg"] =
          render_svg(inst->second, r.solution ? &*r.solution : nullptr,
                     te == tree_edges.end() ? no_edges : te->second);
    }
  }
  return files;
}

void report(const std::filesystem::path& records_dir, const std::filesystem::path& out_dir,
            const ReportOptions& opts) {
  std::vector<RunRecord> records;
  for (const auto& j : read_json_lines(records_dir / "records.jsonl"))
    records.push_back(record_from_json(j));
  std::map<std::string, json> timing;
  for (const auto& j : read_json_lines(records_dir / "timing.jsonl"))
    timing[j.at("instance_id").get<std::string>() + "|" + j.at("algorithm").get<std::string>()] = j;
  for (auto& r : records) {
    auto it = timing.find(r.instance_id + "|" + to_string(r.algorithm));
    if (it != timing.end() && !it->second.at("time_to_first_s").is_null())
      r.time_to_first_s = it->second.at("time_to_first_s").get<double>();
  }

  std::map<std::string, Instance> instances;
  for (auto& ni : read_instances(records_dir / "instances")) instances[ni.id] = std::move(ni.instance);

  std::map<std::string, std::vector<JointPath>> edges;
  const auto trees = records_dir / "trees";
  if (std::filesystem::is_directory(trees)) {
    for (const auto& e : std::filesystem::directory_iterator(trees)) {
      if (e.path().extension() != ".jsonl") continue;
      auto& list = edges[e.path().stem().string()];
      for (const auto& j : read_json_lines(e.path()))
        if (j.value("type", "") == "edge") list.push_back(solution_steps_from_json(j.at("steps")));
    }
  }

  std::filesystem::create_directories(out_dir);
  for (const auto& [name, text] : build_report(records, instances, edges, opts))
    write_text_file(out_dir / name, text);
}

}  // namespace marrt
