#include "marrt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "marrt/errors.hpp"

namespace marrt {

Tree::Tree(const GridWorld& world, JointState root, JointState goal,
           std::optional<std::size_t> node_cap)
    : world_(&world), goal_(std::move(goal)), cap_(node_cap) {
  if (root.size() != goal_.size()) throw ArityError("tree root and goal arity differ");
  if (cap_ && *cap_ == 0) throw std::invalid_argument("node cap must be at least 1");
  TreeNode r;
  r.id = next_id_++;
  r.state = std::move(root);
  root_ = r.id;
  insert_raw(std::move(r));
}

const TreeNode& Tree::node(NodeId id) const {
  auto it = slot_.find(id);
  if (it == slot_.end()) throw StateError("no node with id " + std::to_string(id));
  return nodes_[it->second];
}

TreeNode& Tree::mut(NodeId id) {
  auto it = slot_.find(id);
  if (it == slot_.end()) throw StateError("no node with id " + std::to_string(id));
  return nodes_[it->second];
}

std::optional<NodeId> Tree::find(const JointState& state) const {
  auto it = by_state_.find(state);
  if (it == by_state_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> Tree::ids() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.id);
  std::sort(out.begin(), out.end());
  return out;
}

void Tree::link_child(NodeId parent, NodeId child) {
  auto& ch = mut(parent).children;
  ch.insert(std::lower_bound(ch.begin(), ch.end(), child), child);
}

void Tree::unlink_child(NodeId parent, NodeId child) {
  auto& ch = mut(parent).children;
  auto it = std::lower_bound(ch.begin(), ch.end(), child);
  if (it != ch.end() && *it == child) ch.erase(it);
}

void Tree::shift_subtree(NodeId id, Cost delta) {
  if (delta == 0) return;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    TreeNode& n = mut(stack.back());
    stack.pop_back();
    n.cost += delta;
    stack.insert(stack.end(), n.children.begin(), n.children.end());
  }
}

void Tree::insert_raw(TreeNode node) {
  const NodeId id = node.id;
  by_state_.try_emplace(node.state, id);
  if (node.state == goal_) goals_.insert(id);
  slot_[id] = nodes_.size();
  nodes_.push_back(std::move(node));
}

void Tree::erase_raw(NodeId id) {
  const std::size_t s = slot_.at(id);
  {
    auto it = by_state_.find(nodes_[s].state);
    if (it != by_state_.end() && it->second == id) by_state_.erase(it);
  }
  goals_.erase(id);
  if (s + 1 != nodes_.size()) {
    nodes_[s] = std::move(nodes_.back());
    slot_[nodes_[s].id] = s;
  }
  nodes_.pop_back();
  slot_.erase(id);
}

NodeId Tree::add_node(JointState state, NodeId parent, JointPath edge, Cost edge_cost) {
  if (state.size() != goal_.size()) throw ArityError("node arity differs from tree arity");
  const Cost parent_cost = node(parent).cost;
  TreeNode n;
  n.id = next_id_++;
  n.state = std::move(state);
  n.parent = parent;
  n.cost = parent_cost + edge_cost;
  n.edge_cost = edge_cost;
  n.edge = std::move(edge);
  const NodeId id = n.id;
  insert_raw(std::move(n));
  link_child(parent, id);
  journal_.push_back({Entry::Kind::added, id, kNoNode, {}, 0, {}});
  return id;
}

void Tree::reparent(NodeId id, NodeId new_parent, JointPath edge, Cost edge_cost) {
  if (id == root_) throw StateError("cannot reparent the root");
  TreeNode& n = mut(id);
  const NodeId old_parent = n.parent;
  Entry e{Entry::Kind::reparented, id, old_parent, std::move(n.edge), n.edge_cost, {}};
  const Cost new_cost = node(new_parent).cost + edge_cost;
  {
    TreeNode& m = mut(id);
    m.parent = new_parent;
    m.edge = std::move(edge);
    m.edge_cost = edge_cost;
    const Cost delta = new_cost - m.cost;
    unlink_child(old_parent, id);
    link_child(new_parent, id);
    shift_subtree(id, delta);
  }
  journal_.push_back(std::move(e));
}

void Tree::remove_node(NodeId id) {
  if (id == root_) throw StateError("cannot remove the root");
  const TreeNode& n = node(id);
  if (!n.children.empty()) throw StateError("cannot remove a node with children");
  Entry e{Entry::Kind::removed, id, kNoNode, {}, 0, n};
  unlink_child(n.parent, id);
  erase_raw(id);
  journal_.push_back(std::move(e));
}

void Tree::mark_snapshot() { journal_.clear(); }

void Tree::restore_snapshot() {
  for (auto it = journal_.rbegin(); it != journal_.rend(); ++it) {
    switch (it->kind) {
      case Entry::Kind::added: {
        const NodeId parent = node(it->id).parent;
        unlink_child(parent, it->id);
        erase_raw(it->id);
        break;
      }
      case Entry::Kind::reparented: {
        TreeNode& n = mut(it->id);
        const NodeId cur_parent = n.parent;
        const Cost old_cost = node(it->old_parent).cost + it->old_edge_cost;
        const Cost delta = old_cost - n.cost;
        n.parent = it->old_parent;
        n.edge = std::move(it->old_edge);
        n.edge_cost = it->old_edge_cost;
        unlink_child(cur_parent, it->id);
        link_child(it->old_parent, it->id);
        shift_subtree(it->id, delta);
        break;
      }
      case Entry::Kind::removed: {
        const NodeId parent = it->removed.parent;
        insert_raw(std::move(it->removed));
        link_child(parent, it->id);
        break;
      }
    }
  }
  journal_.clear();
}

bool Tree::operator==(const Tree& o) const {
  if (root_ != o.root_ || goal_ != o.goal_ || cap_ != o.cap_ || size() != o.size() ||
      goals_ != o.goals_)
    return false;
  for (const auto& n : nodes_) {
    if (!o.contains(n.id) || !(o.node(n.id) == n)) return false;
  }
  return true;
}

NearParams default_near_params(int size, std::size_t agents) {
  NearParams p;
  p.gamma = 2.0 * size * std::sqrt(static_cast<double>(agents));
  p.eta = size;
  return p;
}

double near_radius(const NearParams& p, std::size_t k, std::size_t agents) {
  if (k <= 1) return p.eta;
  const double kk = static_cast<double>(k);
  const double r = p.gamma * std::pow(std::log(kk) / kk, 1.0 / (2.0 * agents));
  return std::min(r, p.eta);
}

NodeId nearest(const Tree& tree, const JointState& x) {
  if (tree.size() == 0) throw StateError("nearest on an empty tree");
  NodeId best = kNoNode;
  double best_d = 0.0;
  for (const auto& n : tree.nodes()) {
    const double d = joint_distance_sq(n.state.cells(), x.cells());
    if (best == kNoNode || d < best_d || (d == best_d && n.id < best)) {
      best = n.id;
      best_d = d;
    }
  }
  return best;
}

std::vector<NodeId> near_set(const Tree& tree, const JointState& x, const NearParams& p) {
  std::vector<NodeId> out;
  if (tree.size() == 0) return out;
  if (p.mode == NearMode::radius) {
    const double r = near_radius(p, tree.size(), tree.agents());
    const double r2 = r * r;
    for (const auto& n : tree.nodes())
      if (joint_distance_sq(n.state.cells(), x.cells()) <= r2) out.push_back(n.id);
    std::sort(out.begin(), out.end());
    return out;
  }
  const auto k = static_cast<std::size_t>(
      std::ceil(p.k_factor * std::log(static_cast<double>(tree.size()) + 1.0)));
  std::vector<std::pair<double, NodeId>> by_dist;
  by_dist.reserve(tree.size());
  for (const auto& n : tree.nodes())
    by_dist.emplace_back(joint_distance_sq(n.state.cells(), x.cells()), n.id);
  const std::size_t take = std::min(k, by_dist.size());
  std::partial_sort(by_dist.begin(), by_dist.begin() + static_cast<std::ptrdiff_t>(take),
                    by_dist.end());
  for (std::size_t i = 0; i < take; ++i) out.push_back(by_dist[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

ExtendResult extend(Tree& tree, const JointState& x_rand, const ExtendConfig& cfg) {
  ExtendResult result;
  const GridWorld& world = tree.world();
  const JointState& goal = tree.goal();
  const GreedyOptions gopt{cfg.heuristic, &goal};

  const NodeId nearest_id = nearest(tree, x_rand);
  SteerResult steer = greedy_connect(world, tree.node(nearest_id).state, x_rand, cfg.c_max, gopt);
  // Also covers the no-progress case, where the walk ends on the nearest node.
  if (tree.find(steer.reached)) return result;

  const JointState x_new = steer.reached;
  const std::vector<NodeId> near = near_set(tree, x_new, cfg.near);

  NodeId parent = nearest_id;
  Cost best_cost = tree.node(nearest_id).cost + steer.cost;
  JointPath best_edge = std::move(steer.path);
  Cost best_edge_cost = steer.cost;
  for (NodeId id : near) {
    if (id == nearest_id) continue;
    const TreeNode& cand = tree.node(id);
    // A connection at or above the incumbent can never win the strict test.
    if (cand.cost + greedy_cost_lower_bound(cand.state.cells(), x_new.cells(), goal.cells()) >=
        best_cost)
      continue;
    SteerResult r = greedy_connect(world, cand.state, x_new, cfg.c_max, gopt);
    if (!r.reached_target) continue;
    if (cand.cost + r.cost < best_cost) {
      parent = id;
      best_cost = cand.cost + r.cost;
      best_edge = std::move(r.path);
      best_edge_cost = r.cost;
    }
  }

  const NodeId new_id = tree.add_node(x_new, parent, std::move(best_edge), best_edge_cost);
  result.inserted = true;
  result.new_node = new_id;

  const auto cap = tree.node_cap();
  for (NodeId id : near) {
    if (id == parent || !tree.contains(id)) continue;
    const TreeNode& nd = tree.node(id);
    if (best_cost + greedy_cost_lower_bound(x_new.cells(), nd.state.cells(), goal.cells()) >=
        nd.cost)
      continue;
    SteerResult r = greedy_connect(world, x_new, nd.state, cfg.c_max, gopt);
    if (!r.reached_target || best_cost + r.cost >= nd.cost) continue;
    const NodeId old_parent = nd.parent;
    tree.reparent(id, new_id, std::move(r.path), r.cost);
    ++result.rewired;
    if (cap && tree.size() > *cap && old_parent != tree.root() &&
        !tree.is_goal_node(old_parent) && tree.node(old_parent).children.empty()) {
      tree.remove_node(old_parent);
      result.removal = {RemovalKind::removed_on_rewire, old_parent};
    }
  }
  return result;
}

RemovalOutcome forced_removal(Tree& tree, NodeId x_new, Rng& rng) {
  std::vector<NodeId> eligible;
  for (const auto& n : tree.nodes()) {
    if (n.children.empty() && n.id != x_new && n.id != tree.root() && !tree.is_goal_node(n.id))
      eligible.push_back(n.id);
  }
  if (eligible.empty()) return {RemovalKind::restored, std::nullopt};
  std::sort(eligible.begin(), eligible.end());
  const NodeId victim = eligible[rng.uniform_index(eligible.size())];
  tree.remove_node(victim);
  return {RemovalKind::force_removed, victim};
}

void restore(Tree& tree) { tree.restore_snapshot(); }

std::optional<TreeSolution> best_solution(const Tree& tree) {
  const auto& goals = tree.goal_nodes();
  if (goals.empty()) return std::nullopt;
  NodeId best = kNoNode;
  Cost best_cost = 0;
  for (NodeId id : goals) {  // ascending, so ties keep the smallest id
    const Cost c = tree.node(id).cost;
    if (best == kNoNode || c < best_cost) {
      best = id;
      best_cost = c;
    }
  }
  std::vector<NodeId> chain;
  for (NodeId id = best; id != kNoNode; id = tree.node(id).parent) chain.push_back(id);
  TreeSolution sol;
  sol.node = best;
  sol.tree_cost = best_cost;
  sol.path = JointPath(tree.node(tree.root()).state);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) sol.path.append(tree.node(*it).edge);
  return sol;
}

Cost step_cost(const JointPath& path, const JointState& goals) {
  Cost c = 0;
  for (std::size_t t = 1; t < path.steps(); ++t)
    for (std::size_t i = 0; i < path.agents(); ++i)
      if (!(path.cell(t, i) == path.cell(t - 1, i) && path.cell(t, i) == goals[i])) ++c;
  return c;
}

std::vector<std::string> audit(const Tree& tree) {
  std::vector<std::string> v;
  auto say = [&](NodeId id, const std::string& what) {
    v.push_back("node " + std::to_string(id) + ": " + what);
  };
  if (!tree.contains(tree.root())) {
    v.push_back("root missing");
    return v;
  }
  if (tree.node(tree.root()).cost != 0) say(tree.root(), "root cost is not 0");
  if (auto cap = tree.node_cap(); cap && tree.size() > *cap)
    v.push_back("node count " + std::to_string(tree.size()) + " exceeds cap");

  std::unordered_map<NodeId, std::size_t> recount;
  for (const auto& n : tree.nodes()) {
    if (n.id == tree.root()) {
      if (n.parent != kNoNode) say(n.id, "root has a parent");
      continue;
    }
    if (!tree.contains(n.parent)) {
      say(n.id, "parent missing");
      continue;
    }
    ++recount[n.parent];
    const TreeNode& p = tree.node(n.parent);
    if (n.edge.empty() || n.edge.agents() != n.state.size()) {
      say(n.id, "edge path empty or of wrong arity");
      continue;
    }
    if (n.edge.state(0) != p.state) say(n.id, "edge does not start at parent state");
    if (n.edge.state(n.edge.steps() - 1) != n.state) say(n.id, "edge does not end at node state");
    for (std::size_t t = 1; t < n.edge.steps(); ++t) {
      if (!collision_free(n.edge.at(t - 1), n.edge.at(t))) say(n.id, "edge has a colliding step");
      for (std::size_t i = 0; i < n.edge.agents(); ++i)
        if (manhattan(n.edge.cell(t - 1, i), n.edge.cell(t, i)) > 1)
          say(n.id, "edge has an illegal move");
    }
    const Cost ec = step_cost(n.edge, tree.goal());
    if (ec != n.edge_cost) say(n.id, "stored edge cost differs from recomputed");

    // walk to the root, summing recomputed edge costs
    Cost sum = 0;
    std::size_t hops = 0;
    NodeId cur = n.id;
    while (cur != tree.root() && hops <= tree.size()) {
      const TreeNode& c = tree.node(cur);
      sum += step_cost(c.edge, tree.goal());
      cur = c.parent;
      ++hops;
      if (!tree.contains(cur)) break;
    }
    if (hops > tree.size()) say(n.id, "parent chain has a cycle");
    else if (sum != n.cost) say(n.id, "cost_from_root differs from chain sum");
  }
  for (const auto& n : tree.nodes()) {
    const std::size_t expect = recount.count(n.id) ? recount.at(n.id) : 0;
    if (n.children.size() != expect) say(n.id, "child list does not match parent links");
    if (!std::is_sorted(n.children.begin(), n.children.end())) say(n.id, "child list unsorted");
    if ((n.state == tree.goal()) != tree.is_goal_node(n.id))
      say(n.id, "goal-node registration mismatch");
  }
  return v;
}

}  // namespace marrt
