#include "marrt/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "marrt/errors.hpp"
#include "marrt/serialize.hpp"

namespace marrt {

namespace {

constexpr std::uint64_t kSeedMask = (1ULL << 53) - 1;  // exact in any JSON reader

std::string instance_id(int size, int agents, int index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "g%03d_a%02d_i%04d", size, agents, index);
  return buf;
}

std::string pair_key(const std::string& id, Algorithm a) { return id + "|" + to_string(a); }

}  // namespace

ExperimentSpec spec_from_json(const json& j) {
  try {
    ExperimentSpec s;
    s.grid_sizes = j.at("grid_sizes").get<std::vector<int>>();
    s.agent_counts = j.at("agent_counts").get<std::vector<int>>();
    s.instances_per_cell = j.at("instances_per_cell").get<int>();
    s.obstacle_ratio = j.value("obstacle_ratio", 0.1);
    s.budget = parse_budget(j.at("budget").get<std::string>());
    if (j.contains("algorithms")) {
      s.algorithms.clear();
      for (const auto& a : j.at("algorithms")) s.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    if (j.contains("planner")) s.planner = config_from_json(j.at("planner"));
    s.master_seed = j.value("master_seed", std::uint64_t{0});
    s.workers = j.value("workers", 1);
    if (s.instances_per_cell < 1 || s.grid_sizes.empty() || s.agent_counts.empty())
      throw std::invalid_argument("experiment spec defines an empty instance set");
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed experiment spec: ") + e.what());
  }
}

json spec_to_json(const ExperimentSpec& s) {
  json j;
  j["grid_sizes"] = s.grid_sizes;
  j["agent_counts"] = s.agent_counts;
  j["instances_per_cell"] = s.instances_per_cell;
  j["obstacle_ratio"] = s.obstacle_ratio;
  j["budget"] = to_string(s.budget);
  json algos = json::array();
  for (auto a : s.algorithms) algos.push_back(to_string(a));
  j["algorithms"] = algos;
  j["planner"] = config_to_json(s.planner);
  j["master_seed"] = s.master_seed;
  j["workers"] = s.workers;
  j["format_version"] = kFormatVersion;
  return j;
}

std::vector<NamedInstance> build_instance_set(const ExperimentSpec& spec) {
  std::vector<NamedInstance> out;
  for (int size : spec.grid_sizes) {
    for (int n : spec.agent_counts) {
      for (int k = 0; k < spec.instances_per_cell; ++k) {
        const std::uint64_t world_seed =
            derive_seed(spec.master_seed, static_cast<std::uint64_t>(size),
                        static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)) &
            kSeedMask;
        const std::uint64_t inst_seed = derive_seed(world_seed, 1) & kSeedMask;
        const GridWorld world = generate_world(size, spec.obstacle_ratio, world_seed);
        out.push_back({instance_id(size, n, k), generate_instance(world, n, inst_seed)});
      }
    }
  }
  return out;
}

std::uint64_t run_seed(const Instance& instance, Algorithm algorithm) {
  return derive_seed(instance.seed, 7, static_cast<std::uint64_t>(algorithm) + 1) & kSeedMask;
}

void write_instances(const std::vector<NamedInstance>& instances,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& ni : instances)
    write_text_file(dir / (ni.id + ".json"), instance_to_json(ni.instance).dump(1) + "\n");
}

std::vector<NamedInstance> read_instances(const std::filesystem::path& dir) {
  std::vector<NamedInstance> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    out.push_back({e.path().stem().string(), instance_from_json(read_json_file(e.path()))});
  }
  std::sort(out.begin(), out.end(),
            [](const NamedInstance& a, const NamedInstance& b) { return a.id < b.id; });
  return out;
}

std::vector<RunRecord> run_batch(const std::vector<NamedInstance>& instances,
                                 const std::vector<Algorithm>& algorithms,
                                 const PlannerConfig& base, const Budget& budget,
                                 const BatchOptions& opts) {
  struct Job {
    std::size_t slot;
    const NamedInstance* inst;
    Algorithm algo;
  };
  const std::size_t total = instances.size() * algorithms.size();
  std::vector<RunRecord> results(total);
  std::vector<char> done(total, 0);

  const bool persist = !opts.out_dir.empty();
  const auto records_path = opts.out_dir / "records.jsonl";
  const auto timing_path = opts.out_dir / "timing.jsonl";
  std::map<std::string, RunRecord> previous;
  std::map<std::string, json> previous_timing;
  if (persist) {
    std::filesystem::create_directories(opts.out_dir);
    for (const auto& j : read_json_lines(records_path)) {
      RunRecord r = record_from_json(j);
      if (r.status == "ok") previous[pair_key(r.instance_id, r.algorithm)] = std::move(r);
    }
    for (const auto& j : read_json_lines(timing_path))
      previous_timing[j.at("instance_id").get<std::string>() + "|" +
                      j.at("algorithm").get<std::string>()] = j;
  }

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      const std::size_t slot = i * algorithms.size() + a;
      auto it = previous.find(pair_key(instances[i].id, algorithms[a]));
      if (it != previous.end()) {
        results[slot] = it->second;
        auto t = previous_timing.find(it->first);
        if (t != previous_timing.end()) {
          if (!t->second.at("time_to_first_s").is_null())
            results[slot].time_to_first_s = t->second.at("time_to_first_s").get<double>();
          results[slot].elapsed_s = t->second.value("elapsed_s", 0.0);
        }
        done[slot] = 1;
        continue;
      }
      jobs.push_back({slot, &instances[i], algorithms[a]});
    }
  }

  std::mutex sink;
  std::ofstream rec_out, time_out;
  if (persist) {
    // Start from the reusable records only, dropping any torn tail.
    rec_out.open(records_path, std::ios::trunc | std::ios::binary);
    time_out.open(timing_path, std::ios::trunc | std::ios::binary);
    for (std::size_t slot = 0; slot < total; ++slot) {
      if (!done[slot]) continue;
      const RunRecord& r = results[slot];
      rec_out << dump_line(record_to_json(r, false));
      time_out << dump_line(timing_to_json(r));
    }
    rec_out.flush();
    time_out.flush();
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job& job = jobs[k];
      PlannerConfig cfg = base;
      cfg.algorithm = job.algo;
      cfg.budget = budget;
      cfg.seed = run_seed(job.inst->instance, job.algo);
      RunRecord rec;
      std::string dump;
      try {
        TreeSink keep_tree;
        if (opts.dump_trees) keep_tree = [&dump](const Tree& t) { dump = tree_dump(t); };
        rec = plan(job.inst->instance, cfg, {}, keep_tree);
      } catch (const std::exception& e) {
        rec = RunRecord{};
        rec.algorithm = job.algo;
        rec.seed = cfg.seed;
        rec.budget = budget;
        rec.status = "failed";
        rec.error = e.what();
      }
      rec.instance_id = job.inst->id;
      std::lock_guard<std::mutex> lock(sink);
      if (persist) {
        rec_out << dump_line(record_to_json(rec, false)) << std::flush;
        time_out << dump_line(timing_to_json(rec)) << std::flush;
        if (opts.dump_trees && !dump.empty())
          write_text_file(opts.out_dir / "trees" / (rec.instance_id + "__" + to_string(rec.algorithm) + ".jsonl"),
                          dump);
      }
      results[job.slot] = std::move(rec);
      done[job.slot] = 1;
    }
  };

  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (persist) {
    rec_out.close();
    time_out.close();
    std::string recs, times;
    for (const auto& r : results) {
      recs += dump_line(record_to_json(r, false));
      times += dump_line(timing_to_json(r));
    }
    write_text_file(records_path, recs);
    write_text_file(timing_path, times);
  }
  return results;
}

}  // namespace marrt
