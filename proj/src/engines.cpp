#include "fuzztree/engines.hpp"

#include <algorithm>
#include <cmath>

namespace fuzztree {

std::string to_string(EngineChoice e) {
  switch (e) {
    case EngineChoice::BottomUp: return "bottomup";
    case EngineChoice::Bdd: return "bdd";
    case EngineChoice::BruteForce: return "bruteforce";
  }
  return "?";
}

std::optional<EngineChoice> engine_from_string(std::string_view s) {
  if (s == "bottomup") return EngineChoice::BottomUp;
  if (s == "bdd") return EngineChoice::Bdd;
  if (s == "bruteforce") return EngineChoice::BruteForce;
  return std::nullopt;
}

namespace {

void check_probs(std::span<const double> p, std::size_t expected) {
  if (p.size() != expected) throw Error("probability vector length differs from basic event count");
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error("probability out of [0, 1]");
  }
}

void require_tree(const FaultTree& t) {
  if (!is_tree_structured(t)) {
    throw Error("bottom-up engine requires a tree-structured fault tree (input is DAG-structured)");
  }
}

}  // namespace

double bottom_up_crisp(const FaultTree& t, std::span<const double> p) {
  require_tree(t);
  const auto slots = be_slot_by_node(t);
  std::size_t be_count = 0;
  for (NodeId s : slots) be_count += (s != kNoNode);
  check_probs(p, be_count);

  std::vector<double> value(t.node_count(), 0.0);
  for (NodeId v : topological_order(t)) {
    switch (t.kinds[v]) {
      case NodeKind::BasicEvent:
        value[v] = p[slots[v]];
        break;
      case NodeKind::And: {
        double acc = 1.0;
        for (NodeId c : t.children[v]) acc *= value[c];
        value[v] = acc;
        break;
      }
      case NodeKind::Or: {
        double acc = 1.0;
        for (NodeId c : t.children[v]) acc *= 1.0 - value[c];
        value[v] = 1.0 - acc;
        break;
      }
    }
  }
  return value[t.root];
}

AlphaFuzzy bottom_up_fuzzy(const FaultTree& t, std::span<const AlphaFuzzy> fp) {
  require_tree(t);
  const auto slots = be_slot_by_node(t);
  std::size_t be_count = 0;
  for (NodeId s : slots) be_count += (s != kNoNode);
  if (fp.size() != be_count) throw Error("fuzzy probability vector length differs from basic event count");
  if (fp.empty()) throw Error("fault tree without basic events");
  const int n_cuts = fp.front().n_cuts();
  for (const AlphaFuzzy& f : fp) {
    if (f.n_cuts() != n_cuts) throw Error("fuzzy probabilities on different alpha grids");
    if (!f.in_unit_interval()) throw Error("fuzzy probability endpoints out of [0, 1]");
  }

  // Per-node cut endpoints in one arena, N values per node per side. Each gate
  // is the endpoint evaluation of its Zadeh-extended probability law, which is
  // nondecreasing in every child, so lower cuts combine lower cuts and upper
  // cuts combine upper cuts.
  const std::size_t n = static_cast<std::size_t>(n_cuts);
  std::vector<double> lo(t.node_count() * n), hi(t.node_count() * n);
  for (NodeId v : topological_order(t)) {
    double* vlo = lo.data() + v * n;
    double* vhi = hi.data() + v * n;
    switch (t.kinds[v]) {
      case NodeKind::BasicEvent: {
        const AlphaFuzzy& f = fp[slots[v]];
        std::copy(f.lower().begin(), f.lower().end(), vlo);
        std::copy(f.upper().begin(), f.upper().end(), vhi);
        break;
      }
      case NodeKind::And: {
        std::fill(vlo, vlo + n, 1.0);
        std::fill(vhi, vhi + n, 1.0);
        for (NodeId c : t.children[v]) {
          const double* clo = lo.data() + c * n;
          const double* chi = hi.data() + c * n;
          for (std::size_t j = 0; j < n; ++j) {
            vlo[j] *= clo[j];
            vhi[j] *= chi[j];
          }
        }
        break;
      }
      case NodeKind::Or: {
        // 1 - prod(1 - x) is nondecreasing in every child, so the lower
        // output still comes from the lower child endpoints.
        std::fill(vlo, vlo + n, 1.0);
        std::fill(vhi, vhi + n, 1.0);
        for (NodeId c : t.children[v]) {
          const double* clo = lo.data() + c * n;
          const double* chi = hi.data() + c * n;
          for (std::size_t j = 0; j < n; ++j) {
            vlo[j] *= 1.0 - clo[j];
            vhi[j] *= 1.0 - chi[j];
          }
        }
        for (std::size_t j = 0; j < n; ++j) {
          vlo[j] = 1.0 - vlo[j];
          vhi[j] = 1.0 - vhi[j];
        }
        break;
      }
    }
  }
  const double* rlo = lo.data() + t.root * n;
  const double* rhi = hi.data() + t.root * n;
  return AlphaFuzzy::from_cuts(std::vector<double>(rlo, rlo + n),
                               std::vector<double>(rhi, rhi + n));
}

// ---------------------------------------------------------------------------
// ROBDD
// ---------------------------------------------------------------------------

namespace {
constexpr std::uint32_t kTerminalLevel = 0xffffffffu;

std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}
}  // namespace

std::size_t Bdd::NodeKeyHash::operator()(const NodeKey& k) const {
  std::size_t h = std::hash<std::uint32_t>{}(k.level);
  h = hash_mix(h, k.low);
  return hash_mix(h, k.high);
}

std::size_t Bdd::PairHash::operator()(const std::pair<Ref, Ref>& k) const {
  return hash_mix(std::hash<Ref>{}(k.first), k.second);
}

std::vector<NodeId> dfs_variable_order(const FaultTree& t) {
  std::vector<NodeId> order;
  const auto slots = be_slot_by_node(t);
  std::vector<std::uint8_t> seen(t.node_count(), 0);
  std::vector<NodeId> stack{t.root};
  seen[t.root] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (t.kinds[v] == NodeKind::BasicEvent) order.push_back(slots[v]);
    // push children in reverse so the first child is visited first
    const auto& ch = t.children[v];
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      if (!seen[*it]) {
        seen[*it] = 1;
        stack.push_back(*it);
      }
    }
  }
  return order;
}

Bdd::Bdd(const FaultTree& t, std::span<const NodeId> order,
         std::optional<std::size_t> node_budget)
    : node_budget_(node_budget) {
  require_valid(t);
  const auto slots = be_slot_by_node(t);
  std::size_t be_count = 0;
  for (NodeId s : slots) be_count += (s != kNoNode);

  if (order.empty()) {
    order_ = dfs_variable_order(t);
  } else {
    order_.assign(order.begin(), order.end());
  }
  if (order_.size() != be_count) throw Error("variable order is not a permutation of basic events");
  std::vector<std::uint32_t> level_of_slot(be_count, kTerminalLevel);
  for (std::uint32_t lvl = 0; lvl < order_.size(); ++lvl) {
    const NodeId slot = order_[lvl];
    if (slot >= be_count || level_of_slot[slot] != kTerminalLevel) {
      throw Error("variable order is not a permutation of basic events");
    }
    level_of_slot[slot] = lvl;
  }

  nodes_.push_back(Node{kTerminalLevel, kFalse, kFalse});  // 0
  nodes_.push_back(Node{kTerminalLevel, kTrue, kTrue});    // 1

  std::vector<Ref> built(t.node_count(), kFalse);
  for (NodeId v : topological_order(t)) {
    if (t.kinds[v] == NodeKind::BasicEvent) {
      built[v] = mk(level_of_slot[slots[v]], kFalse, kTrue);
    } else {
      const bool conjunction = t.kinds[v] == NodeKind::And;
      const auto& ch = t.children[v];
      Ref acc = built[ch.front()];
      for (std::size_t i = 1; i < ch.size(); ++i) acc = apply(conjunction, acc, built[ch[i]]);
      built[v] = acc;
    }
  }
  root_ = built[t.root];
  // Build-time tables are per-build only.
  and_cache_ = {};
  or_cache_ = {};
  unique_ = {};

  // Drop nodes no longer reachable from the root (apply leaves garbage
  // behind); the surviving indices stay topologically ordered.
  std::vector<std::uint8_t> reachable(nodes_.size(), 0);
  reachable[kFalse] = reachable[kTrue] = 1;
  reachable[root_] = 1;
  for (std::size_t i = nodes_.size(); i-- > 2;) {
    if (!reachable[i]) continue;
    reachable[nodes_[i].low] = 1;
    reachable[nodes_[i].high] = 1;
  }
  std::vector<Ref> remap(nodes_.size(), kFalse);
  std::size_t next = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!reachable[i]) continue;
    remap[i] = static_cast<Ref>(next);
    nodes_[next] = nodes_[i];
    ++next;
  }
  nodes_.resize(next);
  for (std::size_t i = 2; i < nodes_.size(); ++i) {
    nodes_[i].low = remap[nodes_[i].low];
    nodes_[i].high = remap[nodes_[i].high];
  }
  root_ = remap[root_];
}

Bdd::Ref Bdd::mk(std::uint32_t level, Ref low, Ref high) {
  if (low == high) return low;
  const NodeKey key{level, low, high};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  if (node_budget_ && nodes_.size() - 2 >= *node_budget_) {
    throw Error("BDD node budget of " + std::to_string(*node_budget_) + " exceeded");
  }
  const Ref ref = static_cast<Ref>(nodes_.size());
  nodes_.push_back(Node{level, low, high});
  unique_.emplace(key, ref);
  return ref;
}

Bdd::Ref Bdd::apply(bool conjunction, Ref a, Ref b) {
  if (conjunction) {
    if (a == kFalse || b == kFalse) return kFalse;
    if (a == kTrue) return b;
    if (b == kTrue) return a;
  } else {
    if (a == kTrue || b == kTrue) return kTrue;
    if (a == kFalse) return b;
    if (b == kFalse) return a;
  }
  if (a == b) return a;
  if (a > b) std::swap(a, b);  // both operations are commutative

  auto& cache = conjunction ? and_cache_ : or_cache_;
  const std::pair<Ref, Ref> key{a, b};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const Node& na = nodes_[a];
  const Node& nb = nodes_[b];
  const std::uint32_t level = std::min(na.level, nb.level);
  const Ref a0 = na.level == level ? na.low : a;
  const Ref a1 = na.level == level ? na.high : a;
  const Ref b0 = nb.level == level ? nb.low : b;
  const Ref b1 = nb.level == level ? nb.high : b;
  const Ref result = mk(level, apply(conjunction, a0, b0), apply(conjunction, a1, b1));
  cache.emplace(key, result);
  return result;
}

double Bdd::unreliability(std::span<const double> p, std::vector<double>& scratch) const {
  if (p.size() != order_.size()) throw Error("probability vector length differs from BDD variable count");
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error("probability out of [0, 1]");
  }
  scratch.resize(nodes_.size());
  scratch[kFalse] = 0.0;
  scratch[kTrue] = 1.0;
  // Node indices are topologically ordered by construction.
  for (std::size_t i = 2; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    const double pv = p[order_[n.level]];
    scratch[i] = pv * scratch[n.high] + (1.0 - pv) * scratch[n.low];
  }
  return scratch[root_];
}

double Bdd::unreliability(std::span<const double> p) const {
  thread_local std::vector<double> scratch;
  return unreliability(p, scratch);
}

bool Bdd::evaluate(const StatusVector& b) const {
  if (b.size() != order_.size()) throw Error("status vector length differs from BDD variable count");
  Ref cur = root_;
  while (cur != kFalse && cur != kTrue) {
    const Node& n = nodes_[cur];
    cur = b[order_[n.level]] ? n.high : n.low;
  }
  return cur == kTrue;
}

// ---------------------------------------------------------------------------
// Engine adapters
// ---------------------------------------------------------------------------

namespace {

class BottomUpEngine final : public CrispEngine {
 public:
  explicit BottomUpEngine(const FaultTree& t)
      : order_(topological_order(t)), kinds_(t.kinds), root_(t.root) {
    require_tree(t);
    const auto slots = be_slot_by_node(t);
    children_ = t.children;
    slot_.assign(t.node_count(), kNoNode);
    for (NodeId v = 0; v < t.node_count(); ++v) slot_[v] = slots[v];
    for (NodeId s : slot_) be_count_ += (s != kNoNode);
  }

  double evaluate(std::span<const double> p) const override {
    check_probs(p, be_count_);
    thread_local std::vector<double> value;
    value.assign(kinds_.size(), 0.0);
    for (NodeId v : order_) {
      switch (kinds_[v]) {
        case NodeKind::BasicEvent:
          value[v] = p[slot_[v]];
          break;
        case NodeKind::And: {
          double acc = 1.0;
          for (NodeId c : children_[v]) acc *= value[c];
          value[v] = acc;
          break;
        }
        case NodeKind::Or: {
          double acc = 1.0;
          for (NodeId c : children_[v]) acc *= 1.0 - value[c];
          value[v] = 1.0 - acc;
          break;
        }
      }
    }
    return value[root_];
  }

  EngineChoice kind() const override { return EngineChoice::BottomUp; }

 private:
  std::vector<NodeId> order_;
  std::vector<NodeKind> kinds_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<NodeId> slot_;
  NodeId root_;
  std::size_t be_count_ = 0;
};

class BruteForceEngine final : public CrispEngine {
 public:
  BruteForceEngine(const FaultTree& t, std::size_t cap) {
    be_count_ = basic_event_ids(t).size();
    const auto sets = cut_sets(t, cap);
    masks_.reserve(sets.size());
    for (const auto& b : sets) {
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i]) mask |= std::uint64_t{1} << i;
      }
      masks_.push_back(mask);
    }
  }

  double evaluate(std::span<const double> p) const override {
    check_probs(p, be_count_);
    double sum = 0.0;
    for (std::uint64_t mask : masks_) {
      double mass = 1.0;
      for (std::size_t i = 0; i < be_count_; ++i) {
        mass *= (mask >> i) & 1u ? p[i] : 1.0 - p[i];
      }
      sum += mass;
    }
    return sum;
  }

  EngineChoice kind() const override { return EngineChoice::BruteForce; }

 private:
  std::vector<std::uint64_t> masks_;
  std::size_t be_count_ = 0;
};

class BddEngine final : public CrispEngine {
 public:
  BddEngine(const FaultTree& t, const EngineOptions& opts)
      : bdd_(t, opts.variable_order ? std::span<const NodeId>(*opts.variable_order)
                                    : std::span<const NodeId>{},
             opts.node_budget) {}

  double evaluate(std::span<const double> p) const override { return bdd_.unreliability(p); }
  EngineChoice kind() const override { return EngineChoice::Bdd; }

 private:
  Bdd bdd_;
};

// BDD engine with the modularization pre-pass: maximal independent subDAGs are
// solved by their own (small) BDDs and enter the enclosing module as pseudo
// basic events carrying their probability.
class ModularBddEngine final : public CrispEngine {
 public:
  ModularBddEngine(const FaultTree& t, const EngineOptions& opts) {
    be_count_ = basic_event_ids(t).size();
    build(t, opts);
  }

  double evaluate(std::span<const double> p) const override {
    check_probs(p, be_count_);
    thread_local std::vector<double> module_prob;
    thread_local std::vector<double> local;
    module_prob.assign(modules_.size(), 0.0);
    for (std::size_t i = 0; i < modules_.size(); ++i) {
      const Module& m = modules_[i];
      local.resize(m.vars.size());
      for (std::size_t j = 0; j < m.vars.size(); ++j) {
        const Var& var = m.vars[j];
        local[j] = var.is_be ? p[var.index] : module_prob[var.index];
      }
      module_prob[i] = m.bdd.unreliability(local);
    }
    return module_prob.back();
  }

  EngineChoice kind() const override { return EngineChoice::Bdd; }

 private:
  struct Var {
    bool is_be;
    std::uint32_t index;  // BE slot, or index of an inner module
  };
  struct Module {
    Bdd bdd;
    std::vector<Var> vars;  // local BE slot -> binding
  };

  void build(const FaultTree& t, const EngineOptions& opts);

  std::vector<Module> modules_;  // innermost first; the last entry is the top
  std::size_t be_count_ = 0;
};

void ModularBddEngine::build(const FaultTree& t, const EngineOptions& opts) {
  require_valid(t);
  const std::size_t n = t.node_count();
  const auto slots = be_slot_by_node(t);

  std::vector<std::vector<NodeId>> parents(n);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId c : t.children[v]) parents[c].push_back(v);
  }

  // A gate v is a module root when no edge from outside enters its descendant
  // set. Quadratic sweep; callers only enable modularization on moderate trees.
  const auto topo = topological_order(t);
  std::vector<std::uint8_t> is_module(n, 0);
  is_module[t.root] = 1;
  std::vector<std::uint8_t> in_desc(n, 0);
  std::vector<NodeId> desc_stack, touched;
  for (NodeId v : topo) {
    if (t.kinds[v] == NodeKind::BasicEvent || v == t.root) continue;
    desc_stack.assign(t.children[v].begin(), t.children[v].end());
    touched.clear();
    for (NodeId c : desc_stack) in_desc[c] = 1;
    touched = desc_stack;
    bool closed = true;
    while (!desc_stack.empty() && closed) {
      const NodeId d = desc_stack.back();
      desc_stack.pop_back();
      for (NodeId par : parents[d]) {
        if (par != v && !in_desc[par]) {
          closed = false;
          break;
        }
      }
      for (NodeId c : t.children[d]) {
        if (!in_desc[c]) {
          in_desc[c] = 1;
          desc_stack.push_back(c);
          touched.push_back(c);
        }
      }
    }
    for (NodeId d : touched) in_desc[d] = 0;
    is_module[v] = closed ? 1 : 0;
  }

  // Build one reduced fault tree per module root, innermost first, replacing
  // nested module roots by pseudo basic events.
  std::vector<std::uint32_t> module_index(n, 0);
  for (NodeId v : topo) {
    if (!is_module[v]) continue;
    FaultTree local;
    std::vector<Var> var_of_local_node;
    std::vector<NodeId> local_id(n, kNoNode);

    // Discovery in deterministic DFS order; descend only within this module.
    std::vector<NodeId> stack{v};
    auto intern = [&](NodeId w) {
      if (local_id[w] != kNoNode) return local_id[w];
      const NodeId id = static_cast<NodeId>(local.kinds.size());
      local_id[w] = id;
      const bool cut_here = w != v && (is_module[w] || t.kinds[w] == NodeKind::BasicEvent);
      local.kinds.push_back(cut_here ? NodeKind::BasicEvent : t.kinds[w]);
      local.children.emplace_back();
      if (!cut_here) stack.push_back(w);
      return id;
    };
    local_id[v] = 0;
    local.kinds.push_back(t.kinds[v]);
    local.children.emplace_back();
    while (!stack.empty()) {
      const NodeId w = stack.back();
      stack.pop_back();
      for (NodeId c : t.children[w]) {
        const NodeId cid = intern(c);  // may grow local.children; resolve first
        local.children[local_id[w]].push_back(cid);
      }
    }
    local.root = 0;

    // Bind local BE slots (ascending local id) to outer slots or inner modules.
    std::vector<NodeId> original_of_local(local.kinds.size(), kNoNode);
    for (NodeId w = 0; w < n; ++w) {
      if (local_id[w] != kNoNode) original_of_local[local_id[w]] = w;
    }
    for (NodeId id = 0; id < local.kinds.size(); ++id) {
      if (local.kinds[id] != NodeKind::BasicEvent) continue;
      const NodeId w = original_of_local[id];
      if (t.kinds[w] == NodeKind::BasicEvent) {
        var_of_local_node.push_back(Var{true, slots[w]});
      } else {
        var_of_local_node.push_back(Var{false, module_index[w]});
      }
    }

    module_index[v] = static_cast<std::uint32_t>(modules_.size());
    modules_.push_back(Module{Bdd(local, {}, opts.node_budget), std::move(var_of_local_node)});
  }
}

}  // namespace

std::unique_ptr<CrispEngine> make_engine(const FaultTree& t, EngineChoice choice,
                                         const EngineOptions& opts) {
  switch (choice) {
    case EngineChoice::BottomUp:
      return std::make_unique<BottomUpEngine>(t);
    case EngineChoice::Bdd:
      if (opts.modularize) return std::make_unique<ModularBddEngine>(t, opts);
      return std::make_unique<BddEngine>(t, opts);
    case EngineChoice::BruteForce:
      return std::make_unique<BruteForceEngine>(t, opts.bruteforce_cap);
  }
  throw Error("unknown engine");
}

}  // namespace fuzztree
