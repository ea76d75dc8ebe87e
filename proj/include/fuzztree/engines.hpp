#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fuzztree/fault_tree.hpp"
#include "fuzztree/fuzzy.hpp"

namespace fuzztree {

enum class EngineChoice { BottomUp, Bdd, BruteForce };

std::string to_string(EngineChoice e);
std::optional<EngineChoice> engine_from_string(std::string_view s);

struct EngineOptions {
  // BDD-only knobs.
  std::optional<std::vector<NodeId>> variable_order;  // BE slots, outermost first
  std::optional<std::size_t> node_budget;             // abort the build beyond this many nodes
  bool modularize = false;                            // solve independent subtrees separately
  // Brute-force cap.
  std::size_t bruteforce_cap = 20;
};

/// Linear bottom-up unreliability for tree-structured FTs (one post-order
/// pass; OR folds 1 - prod(1 - p), AND folds prod p). Rejects DAG inputs.
double bottom_up_crisp(const FaultTree& t, std::span<const double> p);

/// Fuzzy bottom-up pass: the same recursion with every gate operation
/// replaced by its Zadeh extension, computed level-wise at cut endpoints.
/// All entries must share one alpha grid; rejects DAG inputs.
AlphaFuzzy bottom_up_fuzzy(const FaultTree& t, std::span<const AlphaFuzzy> fp);

// ---------------------------------------------------------------------------
// ROBDD engine
// ---------------------------------------------------------------------------

/// Reduced ordered BDD for the structure function of a fault tree, built
/// bottom-up over the FT DAG with Shannon-expansion apply, hash-consing and a
/// memoized apply cache. Nodes store the order level; the manager keeps the
/// level -> BE slot permutation. Node indices are topologically ordered
/// (children precede parents), which evaluation relies on.
class Bdd {
 public:
  using Ref = std::uint32_t;
  static constexpr Ref kFalse = 0;
  static constexpr Ref kTrue = 1;

  struct Node {
    std::uint32_t level;  // position in the variable order
    Ref low, high;
  };

  /// Builds the ROBDD of S_T under the given variable order (a permutation of
  /// BE slots; defaults to first-DFS-visit order from the root). Throws when
  /// the optional node budget is exceeded.
  Bdd(const FaultTree& t, std::span<const NodeId> order = {},
      std::optional<std::size_t> node_budget = std::nullopt);

  Ref root() const { return root_; }
  std::size_t internal_node_count() const { return nodes_.size() - 2; }
  std::span<const NodeId> order() const { return order_; }  // level -> BE slot
  std::size_t var_count() const { return order_.size(); }

  /// Pr[f = 1] with independent Bernoulli inputs: one pass over the node
  /// array, Pr(n) = p_var * Pr(high) + (1 - p_var) * Pr(low).
  double unreliability(std::span<const double> p) const;
  double unreliability(std::span<const double> p, std::vector<double>& scratch) const;

  /// Boolean evaluation, for semantic checks against structure_eval.
  bool evaluate(const StatusVector& b) const;

 private:
  Ref mk(std::uint32_t level, Ref low, Ref high);
  Ref apply(bool conjunction, Ref a, Ref b);

  struct NodeKey {
    std::uint32_t level;
    Ref low, high;
    bool operator==(const NodeKey&) const = default;
  };
  struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const;
  };
  struct PairHash {
    std::size_t operator()(const std::pair<Ref, Ref>& k) const;
  };

  std::vector<Node> nodes_;
  std::vector<NodeId> order_;
  Ref root_ = kFalse;
  std::optional<std::size_t> node_budget_;
  std::unordered_map<NodeKey, Ref, NodeKeyHash> unique_;
  std::unordered_map<std::pair<Ref, Ref>, Ref, PairHash> and_cache_, or_cache_;
};

/// First-DFS-visit order of basic events from the root: the default variable
/// order for BDD builds.
std::vector<NodeId> dfs_variable_order(const FaultTree& t);

inline Bdd bdd_build(const FaultTree& t, std::span<const NodeId> order = {},
                     std::optional<std::size_t> node_budget = std::nullopt) {
  return Bdd(t, order, node_budget);
}

inline double bdd_unreliability(const Bdd& bdd, std::span<const double> p) {
  return bdd.unreliability(p);
}

// ---------------------------------------------------------------------------
// Uniform crisp-engine interface (used by the fuzzy lifting)
// ---------------------------------------------------------------------------

/// A prepared unreliability evaluator. Preparation (topological order, BDD
/// build, cut-set enumeration) happens once in the factory; evaluate() is
/// const and safe to call concurrently from multiple threads.
class CrispEngine {
 public:
  virtual ~CrispEngine() = default;
  virtual double evaluate(std::span<const double> p) const = 0;
  virtual EngineChoice kind() const = 0;
};

std::unique_ptr<CrispEngine> make_engine(const FaultTree& t, EngineChoice choice,
                                         const EngineOptions& opts = {});

}  // namespace fuzztree
