#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "marrt/greedy.hpp"
#include "marrt/grid.hpp"
#include "marrt/jointstate.hpp"
#include "marrt/rng.hpp"

namespace marrt {

using NodeId = std::uint64_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct TreeNode {
  NodeId id = kNoNode;
  JointState state;
  NodeId parent = kNoNode;  // kNoNode for the root
  Cost cost = 0;            // cost from root
  Cost edge_cost = 0;
  JointPath edge;  // parent state -> state; empty for the root
  std::vector<NodeId> children;  // sorted ascending

  std::size_t child_count() const { return children.size(); }
  bool operator==(const TreeNode&) const = default;
};

// Joint-space RRT* tree with an optional node cap. Every mutation is recorded
// in a per-iteration journal so the iteration can be undone exactly.
class Tree {
 public:
  Tree(const GridWorld& world, JointState root, JointState goal,
       std::optional<std::size_t> node_cap = std::nullopt);

  const GridWorld& world() const { return *world_; }
  const JointState& goal() const { return goal_; }
  NodeId root() const { return root_; }
  std::optional<std::size_t> node_cap() const { return cap_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t agents() const { return goal_.size(); }

  bool contains(NodeId id) const { return slot_.count(id) != 0; }
  const TreeNode& node(NodeId id) const;
  std::optional<NodeId> find(const JointState& state) const;
  bool is_goal_node(NodeId id) const { return goals_.count(id) != 0; }
  const std::set<NodeId>& goal_nodes() const { return goals_; }

  // Unordered view of the live nodes.
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<NodeId> ids() const;  // ascending

  NodeId add_node(JointState state, NodeId parent, JointPath edge, Cost edge_cost);
  // Moves `id` under `new_parent` and shifts the subtree's costs by the delta.
  void reparent(NodeId id, NodeId new_parent, JointPath edge, Cost edge_cost);
  // Only childless, non-root nodes can be removed.
  void remove_node(NodeId id);

  // Starts a new undo journal (the iteration snapshot).
  void mark_snapshot();
  // Reverts every mutation since mark_snapshot().
  void restore_snapshot();
  std::size_t journal_size() const { return journal_.size(); }

  // Structural equality; the id allocator is not part of the tree's content.
  bool operator==(const Tree& other) const;

 private:
  struct Entry {
    enum class Kind { added, reparented, removed } kind;
    NodeId id = kNoNode;
    NodeId old_parent = kNoNode;
    JointPath old_edge;
    Cost old_edge_cost = 0;
    TreeNode removed;
  };

  TreeNode& mut(NodeId id);
  void link_child(NodeId parent, NodeId child);
  void unlink_child(NodeId parent, NodeId child);
  void shift_subtree(NodeId id, Cost delta);
  void insert_raw(TreeNode node);
  void erase_raw(NodeId id);

  const GridWorld* world_;
  JointState goal_;
  std::optional<std::size_t> cap_;
  NodeId root_ = kNoNode;
  NodeId next_id_ = 0;
  std::vector<TreeNode> nodes_;
  std::unordered_map<NodeId, std::size_t> slot_;
  std::unordered_map<JointState, NodeId, JointStateHash> by_state_;
  std::set<NodeId> goals_;
  std::vector<Entry> journal_;
};

enum class NearMode { radius, k_nearest };

struct NearParams {
  double gamma = 0.0;
  double eta = 0.0;
  NearMode mode = NearMode::radius;
  double k_factor = 2.0 * 2.718281828459045;
};

// gamma = 2 * size * sqrt(n), eta = size.
NearParams default_near_params(int size, std::size_t agents);

// min(gamma * (ln k / k)^(1 / 2n), eta); eta when k <= 1.
double near_radius(const NearParams& p, std::size_t k, std::size_t agents);

// Closest node by joint_distance, ties to the smallest id.
NodeId nearest(const Tree& tree, const JointState& x);

// Ascending ids of the nodes within near_radius of x (or the k nearest).
std::vector<NodeId> near_set(const Tree& tree, const JointState& x, const NearParams& p);

struct ExtendConfig {
  Cost c_max = 0;
  NearParams near;
  const Heuristic* heuristic = nullptr;
};

enum class RemovalKind { none, removed_on_rewire, force_removed, restored };

struct RemovalOutcome {
  RemovalKind kind = RemovalKind::none;
  std::optional<NodeId> victim;
};

struct ExtendResult {
  bool inserted = false;
  NodeId new_node = kNoNode;
  std::size_t rewired = 0;
  RemovalOutcome removal;
};

// One EXTEND step: steer from the nearest node toward x_rand, choose the
// cheapest exactly-connecting parent among the near set, then rewire. When the
// insertion leaves the tree above its cap, a rewired node's old parent that is
// left childless is removed (never the root or a goal node).
ExtendResult extend(Tree& tree, const JointState& x_rand, const ExtendConfig& cfg);

// Removes a uniformly chosen childless node other than x_new, the root and the
// goal nodes. Returns kind == restored (and deletes nothing) when none exists.
RemovalOutcome forced_removal(Tree& tree, NodeId x_new, Rng& rng);

// Undo back to the last snapshot.
void restore(Tree& tree);

struct TreeSolution {
  NodeId node = kNoNode;
  Cost tree_cost = 0;
  JointPath path;
};

// Cheapest goal node (ties to the smallest id) and its root-to-goal path.
std::optional<TreeSolution> best_solution(const Tree& tree);

// Per-step edge pricing: +1 per agent per timestep unless the agent stays on
// its cell in `goals`.
Cost step_cost(const JointPath& path, const JointState& goals);

// Full invariant audit; returns human-readable violations (empty when sound).
std::vector<std::string> audit(const Tree& tree);

}  // namespace marrt
