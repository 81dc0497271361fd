#include "marrt/oracle.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_map>

namespace marrt {

namespace {

struct Codec {
  std::uint64_t free_count;
  std::size_t n;

  std::uint64_t encode(const std::vector<int>& pos, std::uint32_t mask) const {
    std::uint64_t k = 0;
    for (std::size_t i = n; i-- > 0;) k = k * free_count + static_cast<std::uint64_t>(pos[i]);
    return (k << n) | mask;
  }
  void decode(std::uint64_t key, std::vector<int>& pos, std::uint32_t& mask) const {
    mask = static_cast<std::uint32_t>(key & ((1ULL << n) - 1));
    key >>= n;
    pos.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pos[i] = static_cast<int>(key % free_count);
      key /= free_count;
    }
  }
};

}  // namespace

OracleResult oracle_joint_optimal(const Instance& inst, const OracleLimits& limits) {
  OracleResult out;
  const GridWorld& w = inst.world;
  const std::size_t n = inst.agents();
  const auto& free = w.free_cells();
  const std::uint64_t F = free.size();

  std::uint64_t space = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (space > limits.max_joint_states / std::max<std::uint64_t>(F, 1)) {
      out.limit_exceeded = true;
      return out;
    }
    space *= F;
  }
  if (space > limits.max_joint_states || n > 16) {
    out.limit_exceeded = true;
    return out;
  }

  std::vector<int> free_index(w.cell_count(), -1);
  for (std::size_t i = 0; i < free.size(); ++i) free_index[w.index(free[i])] = static_cast<int>(i);
  // adjacency: stay first, then the 4-neighbours
  std::vector<std::vector<int>> moves(F);
  for (std::size_t i = 0; i < F; ++i) {
    const Cell c = free[i];
    moves[i].push_back(static_cast<int>(i));
    const Cell nb[4] = {{c.x, c.y - 1}, {c.x + 1, c.y}, {c.x, c.y + 1}, {c.x - 1, c.y}};
    for (Cell d : nb)
      if (w.is_free(d)) moves[i].push_back(free_index[w.index(d)]);
  }
  std::vector<int> start(n), goal(n);
  for (std::size_t i = 0; i < n; ++i) {
    start[i] = free_index[w.index(inst.starts[i])];
    goal[i] = free_index[w.index(inst.goals[i])];
  }

  const Codec codec{F, n};
  const std::uint32_t all = static_cast<std::uint32_t>((1ULL << n) - 1);
  using Item = std::pair<Cost, std::uint64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  std::unordered_map<std::uint64_t, Cost> dist;
  std::unordered_map<std::uint64_t, std::uint64_t> parent;

  const std::uint64_t s_key = codec.encode(start, 0);
  dist[s_key] = 0;
  open.push({0, s_key});

  std::vector<int> pos, nxt(n);
  std::uint32_t mask = 0;
  std::optional<std::uint64_t> goal_key;
  while (!open.empty()) {
    auto [d, key] = open.top();
    open.pop();
    if (dist[key] < d) continue;
    codec.decode(key, pos, mask);
    if (mask == all) {
      out.cost = d;
      goal_key = key;
      break;
    }
    ++out.expanded;

    // Enumerate per-agent options depth-first with incremental conflict checks.
    std::function<void(std::size_t, std::uint32_t, Cost)> rec = [&](std::size_t i,
                                                                     std::uint32_t nmask,
                                                                     Cost c) {
      if (i == n) {
        const std::uint64_t k = codec.encode(nxt, nmask);
        const Cost nd = d + c;
        auto it = dist.find(k);
        if (it == dist.end() || nd < it->second) {
          dist[k] = nd;
          parent[k] = key;
          open.push({nd, k});
        }
        return;
      }
      auto try_cell = [&](int cell, std::uint32_t m, Cost step) {
        for (std::size_t j = 0; j < i; ++j) {
          if (nxt[j] == cell) return;                          // vertex
          if (nxt[j] == pos[i] && cell == pos[j]) return;      // swap
        }
        nxt[i] = cell;
        rec(i + 1, m, c + step);
      };
      const std::uint32_t bit = 1u << i;
      if (mask & bit) {
        try_cell(pos[i], nmask | bit, 0);
        return;
      }
      if (pos[i] == goal[i]) try_cell(pos[i], nmask | bit, 0);
      for (int m : moves[pos[i]]) try_cell(m, nmask, 1);
    };
    rec(0, 0, 0);
  }

  if (goal_key) {
    std::vector<std::uint64_t> chain{*goal_key};
    while (chain.back() != s_key) chain.push_back(parent.at(chain.back()));
    JointPath path;
    std::vector<Cell> cells(n);
    std::vector<Cell> prev;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      codec.decode(*it, pos, mask);
      for (std::size_t i = 0; i < n; ++i) cells[i] = free[pos[i]];
      // all-wait steps only carry finish flags; they are not timesteps
      if (!prev.empty() && prev == cells) continue;
      path.push(cells);
      prev = cells;
    }
    out.path = std::move(path);
  }
  return out;
}

}  // namespace marrt
