#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fuzztree/fuzzy.hpp"

namespace fuzztree {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class NodeKind : std::uint8_t { BasicEvent, And, Or };

/// Rooted DAG with AND/OR gates at internal nodes and basic events at the
/// leaves. Node identity is a dense integer index; display names live in a
/// side table. Instances are treated as immutable once validated; all
/// functions below are pure.
struct FaultTree {
  std::vector<NodeKind> kinds;
  std::vector<std::vector<NodeId>> children;
  NodeId root = 0;
  std::vector<std::string> names;  // empty, or one entry per node

  std::size_t node_count() const { return kinds.size(); }
  bool is_gate(NodeId v) const { return kinds[v] != NodeKind::BasicEvent; }
};

/// One failed validation rule, anchored at the offending node.
struct Diagnostic {
  NodeId node = kNoNode;
  std::string rule;  // stable identifier, e.g. "cycle", "be-with-children"
  std::string message;
};

/// Checks all structural invariants; an empty list means the tree is valid.
/// Rules: shape (array sizes, ids in range), "duplicate-edge", "be-with-children",
/// "gate-without-children", "cycle", "multiple-roots", "unreachable".
std::vector<Diagnostic> validate(const FaultTree& t);

inline bool is_valid(const FaultTree& t) { return validate(t).empty(); }

/// Throws Error listing the diagnostics unless the tree validates.
void require_valid(const FaultTree& t);

/// True iff every non-root node has exactly one parent.
bool is_tree_structured(const FaultTree& t);

/// Node ids of the basic events in ascending id order. Position in this list
/// is the "slot" that indexes StatusVector / ProbVector entries.
std::vector<NodeId> basic_event_ids(const FaultTree& t);

/// Inverse of basic_event_ids: slot per node, kNoNode for gates.
std::vector<NodeId> be_slot_by_node(const FaultTree& t);

/// Nodes ordered children-before-parents, restricted to nodes reachable from
/// the root. Deterministic for a given tree.
std::vector<NodeId> topological_order(const FaultTree& t);

using StatusVector = std::vector<std::uint8_t>;  // 1 = failed, indexed by BE slot
using ProbVector = std::vector<double>;          // failure probability per BE slot

/// Structure function S_T(root, b): single memoized pass over the DAG.
bool structure_eval(const FaultTree& t, const StatusVector& b);

/// All status vectors b with S_T(b) = 1, by exhaustive enumeration of the
/// 2^|BE| candidates. Refuses above the cap.
std::vector<StatusVector> cut_sets(const FaultTree& t, std::size_t be_cap = 20);

/// Exact unreliability: the cut-set sum of independent Bernoulli masses.
/// This is the verification oracle for every engine; costs 2^|BE| evaluations.
double unreliability_bruteforce(const FaultTree& t, std::span<const double> p,
                                std::size_t be_cap = 20);

}  // namespace fuzztree
