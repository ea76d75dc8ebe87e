#include "fuzztree/fault_tree.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace fuzztree {

namespace {

void push_diag(std::vector<Diagnostic>& out, NodeId node, std::string rule, std::string msg) {
  out.push_back(Diagnostic{node, std::move(rule), std::move(msg)});
}

std::string node_label(const FaultTree& t, NodeId v) {
  if (v < t.names.size() && !t.names[v].empty()) return "\"" + t.names[v] + "\"";
  return "#" + std::to_string(v);
}

}  // namespace

std::vector<Diagnostic> validate(const FaultTree& t) {
  std::vector<Diagnostic> diags;
  const std::size_t n = t.node_count();
  if (n == 0) {
    push_diag(diags, kNoNode, "empty", "fault tree has no nodes");
    return diags;
  }
  if (t.children.size() != n) {
    push_diag(diags, kNoNode, "shape", "children adjacency size differs from node count");
    return diags;
  }
  if (!t.names.empty() && t.names.size() != n) {
    push_diag(diags, kNoNode, "shape", "name table size differs from node count");
    return diags;
  }
  if (t.root >= n) {
    push_diag(diags, t.root, "shape", "root id out of range");
    return diags;
  }
  for (NodeId v = 0; v < n; ++v) {
    std::unordered_set<NodeId> seen;
    for (NodeId c : t.children[v]) {
      if (c >= n) {
        push_diag(diags, v, "shape", "child id out of range at node " + node_label(t, v));
        return diags;
      }
      if (!seen.insert(c).second) {
        push_diag(diags, v, "duplicate-edge",
                  "node " + node_label(t, v) + " lists child " + node_label(t, c) + " twice");
      }
    }
  }

  for (NodeId v = 0; v < n; ++v) {
    const bool leaf = t.children[v].empty();
    if (t.kinds[v] == NodeKind::BasicEvent && !leaf) {
      push_diag(diags, v, "be-with-children", "basic event " + node_label(t, v) + " has children");
    }
    if (t.kinds[v] != NodeKind::BasicEvent && leaf) {
      push_diag(diags, v, "gate-without-children", "gate " + node_label(t, v) + " has no children");
    }
  }

  // Cycle detection over the whole graph (iterative DFS, three colours).
  {
    std::vector<std::uint8_t> colour(n, 0);  // 0 white, 1 grey, 2 black
    std::vector<std::pair<NodeId, std::size_t>> stack;
    for (NodeId start = 0; start < n; ++start) {
      if (colour[start] != 0) continue;
      stack.emplace_back(start, 0);
      colour[start] = 1;
      while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next < t.children[v].size()) {
          const NodeId c = t.children[v][next++];
          if (colour[c] == 1) {
            push_diag(diags, c, "cycle", "cycle through node " + node_label(t, c));
            return diags;  // further structural checks are meaningless
          }
          if (colour[c] == 0) {
            colour[c] = 1;
            stack.emplace_back(c, 0);
          }
        } else {
          colour[v] = 2;
          stack.pop_back();
        }
      }
    }
  }

  // Reachability from the declared root.
  {
    std::vector<std::uint8_t> reach(n, 0);
    std::vector<NodeId> stack{t.root};
    reach[t.root] = 1;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId c : t.children[v]) {
        if (!reach[c]) {
          reach[c] = 1;
          stack.push_back(c);
        }
      }
    }
    std::vector<std::uint32_t> parents(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      for (NodeId c : t.children[v]) ++parents[c];
    }
    for (NodeId v = 0; v < n; ++v) {
      if (reach[v]) continue;
      if (parents[v] == 0) {
        push_diag(diags, v, "multiple-roots",
                  "node " + node_label(t, v) + " has no parent and is not the root");
      } else {
        push_diag(diags, v, "unreachable",
                  "node " + node_label(t, v) + " is not reachable from the root");
      }
    }
  }
  return diags;
}

void require_valid(const FaultTree& t) {
  const auto diags = validate(t);
  if (diags.empty()) return;
  std::string msg = "invalid fault tree:";
  for (const auto& d : diags) msg += "\n  [" + d.rule + "] " + d.message;
  throw Error(msg);
}

bool is_tree_structured(const FaultTree& t) {
  std::vector<std::uint32_t> parents(t.node_count(), 0);
  for (NodeId v = 0; v < t.node_count(); ++v) {
    for (NodeId c : t.children[v]) ++parents[c];
  }
  for (NodeId v = 0; v < t.node_count(); ++v) {
    if (v == t.root ? parents[v] != 0 : parents[v] != 1) return false;
  }
  return true;
}

std::vector<NodeId> basic_event_ids(const FaultTree& t) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < t.node_count(); ++v) {
    if (t.kinds[v] == NodeKind::BasicEvent) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> be_slot_by_node(const FaultTree& t) {
  std::vector<NodeId> slot(t.node_count(), kNoNode);
  NodeId next = 0;
  for (NodeId v = 0; v < t.node_count(); ++v) {
    if (t.kinds[v] == NodeKind::BasicEvent) slot[v] = next++;
  }
  return slot;
}

std::vector<NodeId> topological_order(const FaultTree& t) {
  std::vector<NodeId> order;
  order.reserve(t.node_count());
  std::vector<std::uint8_t> done(t.node_count(), 0);
  std::vector<std::pair<NodeId, std::size_t>> stack;
  stack.emplace_back(t.root, 0);
  done[t.root] = 1;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < t.children[v].size()) {
      const NodeId c = t.children[v][next++];
      if (!done[c]) {
        done[c] = 1;
        stack.emplace_back(c, 0);
      }
    } else {
      order.push_back(v);
      stack.pop_back();
    }
  }
  return order;
}

bool structure_eval(const FaultTree& t, const StatusVector& b) {
  const auto slots = be_slot_by_node(t);
  NodeId be_count = 0;
  for (NodeId s : slots) be_count += (s != kNoNode);
  if (b.size() != be_count) throw Error("status vector length differs from basic event count");

  std::vector<std::uint8_t> value(t.node_count(), 0);
  for (NodeId v : topological_order(t)) {
    if (t.kinds[v] == NodeKind::BasicEvent) {
      value[v] = b[slots[v]];
    } else if (t.kinds[v] == NodeKind::And) {
      std::uint8_t acc = 1;
      for (NodeId c : t.children[v]) acc &= value[c];
      value[v] = acc;
    } else {
      std::uint8_t acc = 0;
      for (NodeId c : t.children[v]) acc |= value[c];
      value[v] = acc;
    }
  }
  return value[t.root] != 0;
}

namespace {

// Shared enumeration core: evaluates S_T for every status vector with
// preallocated buffers and hands each cut set to the sink.
template <typename Sink>
void for_each_cut_set(const FaultTree& t, std::size_t n, Sink&& sink) {
  const auto slots = be_slot_by_node(t);
  const auto order = topological_order(t);
  std::vector<std::uint8_t> value(t.node_count(), 0);
  StatusVector b(n, 0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < n; ++i) b[i] = (mask >> i) & 1u;
    for (NodeId v : order) {
      if (t.kinds[v] == NodeKind::BasicEvent) {
        value[v] = b[slots[v]];
      } else if (t.kinds[v] == NodeKind::And) {
        std::uint8_t acc = 1;
        for (NodeId c : t.children[v]) acc &= value[c];
        value[v] = acc;
      } else {
        std::uint8_t acc = 0;
        for (NodeId c : t.children[v]) acc |= value[c];
        value[v] = acc;
      }
    }
    if (value[t.root]) sink(b);
  }
}

}  // namespace

std::vector<StatusVector> cut_sets(const FaultTree& t, std::size_t be_cap) {
  const std::size_t n = basic_event_ids(t).size();
  if (n > be_cap) {
    throw Error("cut set enumeration over " + std::to_string(n) +
                " basic events exceeds the cap of " + std::to_string(be_cap));
  }
  std::vector<StatusVector> out;
  for_each_cut_set(t, n, [&](const StatusVector& b) { out.push_back(b); });
  return out;
}

double unreliability_bruteforce(const FaultTree& t, std::span<const double> p,
                                std::size_t be_cap) {
  const std::size_t n = basic_event_ids(t).size();
  if (n > be_cap) {
    throw Error("brute-force unreliability over " + std::to_string(n) +
                " basic events exceeds the cap of " + std::to_string(be_cap));
  }
  if (p.size() != n) throw Error("probability vector length differs from basic event count");
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error("probability out of [0, 1]");
  }
  double sum = 0.0;
  for_each_cut_set(t, n, [&](const StatusVector& b) {
    double mass = 1.0;
    for (std::size_t i = 0; i < n; ++i) mass *= b[i] ? p[i] : 1.0 - p[i];
    sum += mass;
  });
  return sum;
}

}  // namespace fuzztree
