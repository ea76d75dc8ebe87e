#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here deliberately avoids the library's endpoint-lifting code paths so the
// tests remain genuine cross-checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "fuzztree/fault_tree.hpp"
#include "fuzztree/fuzzy.hpp"
#include "fuzztree/random.hpp"

namespace testutil {

using namespace fuzztree;

// The road-trip tree: root AND over BE u and OR over BEs v, w.
// BE slots: u = 0, v = 1, w = 2.
inline FaultTree fig1() {
  FaultTree t;
  t.kinds = {NodeKind::And, NodeKind::BasicEvent, NodeKind::Or, NodeKind::BasicEvent,
             NodeKind::BasicEvent};
  t.children = {{1, 2}, {}, {3, 4}, {}, {}};
  t.root = 0;
  t.names = {"RoadTrip", "Phone", "Car", "Engine", "Battery"};
  return t;
}

// Random tree-structured FT with at most max_be basic events.
inline FaultTree random_tree_ft(Rng& rng, int max_be) {
  FaultTree t;
  int be_budget = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_be)));
  std::function<NodeId(int)> build = [&](int budget) -> NodeId {
    if (budget <= 1) {
      t.kinds.push_back(NodeKind::BasicEvent);
      t.children.emplace_back();
      return static_cast<NodeId>(t.kinds.size() - 1);
    }
    const int arity = 2 + static_cast<int>(rng.index(2));  // 2 or 3 children
    std::vector<int> parts(static_cast<std::size_t>(std::min(arity, budget)), 1);
    int extra = budget - static_cast<int>(parts.size());
    while (extra > 0) {
      ++parts[rng.index(parts.size())];
      --extra;
    }
    std::vector<NodeId> children;
    for (int part : parts) children.push_back(build(part));
    t.kinds.push_back(rng.bernoulli(0.5) ? NodeKind::And : NodeKind::Or);
    t.children.push_back(std::move(children));
    return static_cast<NodeId>(t.kinds.size() - 1);
  };
  t.root = build(be_budget);
  return t;
}

// Random DAG-structured FT: a random tree plus a few extra child edges that
// share existing subtrees (never creating cycles or duplicate edges).
inline FaultTree random_dag_ft(Rng& rng, int max_be, int extra_edges = 3) {
  FaultTree t = random_tree_ft(rng, max_be);
  const std::size_t n = t.node_count();
  auto reaches = [&](NodeId from, NodeId to) {
    if (from == to) return true;
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<NodeId> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId c : t.children[v]) {
        if (c == to) return true;
        if (!seen[c]) {
          seen[c] = 1;
          stack.push_back(c);
        }
      }
    }
    return false;
  };
  for (int e = 0; e < extra_edges; ++e) {
    for (int attempt = 0; attempt < 12; ++attempt) {
      const NodeId g = static_cast<NodeId>(rng.index(n));
      const NodeId w = static_cast<NodeId>(rng.index(n));
      if (g == w || t.kinds[g] == NodeKind::BasicEvent) continue;
      const auto& ch = t.children[g];
      if (std::find(ch.begin(), ch.end(), w) != ch.end()) continue;
      if (reaches(w, g)) continue;
      t.children[g].push_back(w);
      break;
    }
  }
  return t;
}

inline ProbVector random_probs(Rng& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  ProbVector p(n);
  for (double& x : p) x = rng.uniform(lo, hi);
  return p;
}

// Naive bottom-up over a DAG, ignoring shared subtrees. Wrong on purpose:
// used only to witness that the tree recursion does not extend to DAGs.
inline double naive_dag_bottom_up(const FaultTree& t, std::span<const double> p) {
  const auto slots = be_slot_by_node(t);
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

// ---------------------------------------------------------------------------
// Grid sup-min oracle for Zadeh extensions
// ---------------------------------------------------------------------------

// Per-argument sample grid: all stored cut endpoints plus a uniform fill of
// the support, so the enumeration can attain the exact per-level extremes.
inline std::vector<double> sample_grid(const AlphaFuzzy& f, int points) {
  std::set<double> grid;
  for (int k = 0; k < f.n_cuts(); ++k) {
    grid.insert(f.lo(k));
    grid.insert(f.hi(k));
  }
  const double lo = f.support_lo(), hi = f.support_hi();
  for (int i = 0; i < points; ++i) {
    grid.insert(lo + (hi - lo) * static_cast<double>(i) / std::max(1, points - 1));
  }
  return {grid.begin(), grid.end()};
}

struct OracleCuts {
  std::vector<double> lo, hi;
};

// Brute-force sup-min alpha-cuts: enumerate the product of the
// sample grids, take min membership per combination (step reconstruction),
// and record per level the extreme f-values among combinations whose degree
// reaches that level.
inline OracleCuts grid_supmin_cuts(const std::function<double(std::span<const double>)>& f,
                                   std::span<const AlphaFuzzy> args, int points_per_arg) {
  const int n_cuts = args.front().n_cuts();
  std::vector<std::vector<double>> grids;
  for (const AlphaFuzzy& a : args) grids.push_back(sample_grid(a, points_per_arg));

  OracleCuts out;
  out.lo.assign(static_cast<std::size_t>(n_cuts), 1e300);
  out.hi.assign(static_cast<std::size_t>(n_cuts), -1e300);

  std::vector<std::size_t> idx(args.size(), 0);
  std::vector<double> point(args.size());
  for (;;) {
    double degree = 1.0;
    for (std::size_t i = 0; i < args.size(); ++i) {
      point[i] = grids[i][idx[i]];
      degree = std::min(degree, membership_at(args[i], point[i]));
    }
    if (degree > 0.0) {
      const double y = f(point);
      for (int k = 0; k < n_cuts; ++k) {
        if (degree >= args.front().level(k) - 1e-12) {
          out.lo[static_cast<std::size_t>(k)] = std::min(out.lo[static_cast<std::size_t>(k)], y);
          out.hi[static_cast<std::size_t>(k)] = std::max(out.hi[static_cast<std::size_t>(k)], y);
        }
      }
    }
    std::size_t i = 0;
    while (i < args.size() && ++idx[i] == grids[i].size()) {
      idx[i] = 0;
      ++i;
    }
    if (i == args.size()) break;
  }
  return out;
}

}  // namespace testutil
