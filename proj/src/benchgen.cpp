#include "fuzztree/benchgen.hpp"

#include <algorithm>
#include <cmath>

#include "fuzztree/random.hpp"

namespace fuzztree {

std::string to_string(FuzzShape s) {
  switch (s) {
    case FuzzShape::Triangular: return "triangular";
    case FuzzShape::Trapezoidal: return "trapezoidal";
    case FuzzShape::TruncGaussian: return "trunc-gaussian";
    case FuzzShape::Mixed: return "mixed";
  }
  return "?";
}

std::optional<FuzzShape> fuzz_shape_from_string(std::string_view s) {
  if (s == "triangular") return FuzzShape::Triangular;
  if (s == "trapezoidal") return FuzzShape::Trapezoidal;
  if (s == "trunc-gaussian") return FuzzShape::TruncGaussian;
  if (s == "mixed") return FuzzShape::Mixed;
  return std::nullopt;
}

void check_config(const GenConfig& cfg) {
  if (cfg.target_size < 1) throw Error("target_size must be at least 1");
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(cfg.combine_bias)) throw Error("combine_bias must lie in [0, 1]");
  if (!unit(cfg.dag_sharing)) throw Error("dag_sharing must lie in [0, 1]");
  if (!unit(cfg.fuzz_spread)) throw Error("fuzz_spread must lie in [0, 1]");
  for (const WeightedTree& wt : cfg.base_pool) {
    require_valid(wt.tree);
    if (wt.probs.size() != basic_event_ids(wt.tree).size()) {
      throw Error("pool entry probability vector length differs from basic event count");
    }
  }
}

WeightedTree horizontal_combine(const WeightedTree& t1, const WeightedTree& t2, NodeKind gate) {
  if (gate == NodeKind::BasicEvent) throw Error("combination gate must be AND or OR");
  const NodeId shift = static_cast<NodeId>(t1.tree.node_count());
  WeightedTree out;
  out.tree.kinds = t1.tree.kinds;
  out.tree.kinds.insert(out.tree.kinds.end(), t2.tree.kinds.begin(), t2.tree.kinds.end());
  out.tree.children = t1.tree.children;
  for (const auto& ch : t2.tree.children) {
    auto& dst = out.tree.children.emplace_back(ch);
    for (NodeId& c : dst) c += shift;
  }
  out.tree.kinds.push_back(gate);
  out.tree.children.push_back({t1.tree.root, static_cast<NodeId>(t2.tree.root + shift)});
  out.tree.root = static_cast<NodeId>(out.tree.kinds.size() - 1);
  out.probs = t1.probs;
  out.probs.insert(out.probs.end(), t2.probs.begin(), t2.probs.end());
  return out;
}

WeightedTree vertical_combine(const WeightedTree& t1, const WeightedTree& t2, NodeId at) {
  if (at >= t1.tree.node_count() || t1.tree.kinds[at] != NodeKind::BasicEvent) {
    throw Error("vertical combination point must be a basic event of the first tree");
  }
  const std::size_t n1 = t1.tree.node_count();
  // t1 node v keeps id v (or v-1 past the removed node); t2 node w becomes n1-1+w.
  auto map1 = [&](NodeId v) { return v < at ? v : static_cast<NodeId>(v - 1); };
  auto map2 = [&](NodeId w) { return static_cast<NodeId>(n1 - 1 + w); };

  WeightedTree out;
  out.tree.kinds.reserve(n1 - 1 + t2.tree.node_count());
  out.tree.children.reserve(n1 - 1 + t2.tree.node_count());
  for (NodeId v = 0; v < n1; ++v) {
    if (v == at) continue;
    out.tree.kinds.push_back(t1.tree.kinds[v]);
    auto& dst = out.tree.children.emplace_back();
    dst.reserve(t1.tree.children[v].size());
    for (NodeId c : t1.tree.children[v]) {
      dst.push_back(c == at ? map2(t2.tree.root) : map1(c));
    }
  }
  for (NodeId w = 0; w < t2.tree.node_count(); ++w) {
    out.tree.kinds.push_back(t2.tree.kinds[w]);
    auto& dst = out.tree.children.emplace_back();
    dst.reserve(t2.tree.children[w].size());
    for (NodeId c : t2.tree.children[w]) dst.push_back(map2(c));
  }
  out.tree.root = t1.tree.root == at ? map2(t2.tree.root) : map1(t1.tree.root);

  // BE slots keep their relative order: t1 events minus `at`, then t2 events.
  std::size_t at_slot = 0;
  for (NodeId v = 0; v < at; ++v) {
    if (t1.tree.kinds[v] == NodeKind::BasicEvent) ++at_slot;
  }
  out.probs = t1.probs;
  out.probs.erase(out.probs.begin() + static_cast<std::ptrdiff_t>(at_slot));
  out.probs.insert(out.probs.end(), t2.probs.begin(), t2.probs.end());
  return out;
}

namespace {

// Random tree-structured FT with exactly `size` nodes, built by recursive
// partition of the node budget.
NodeId build_random_subtree(FaultTree& t, std::size_t size, Rng& rng) {
  if (size == 1) {
    t.kinds.push_back(NodeKind::BasicEvent);
    t.children.emplace_back();
    return static_cast<NodeId>(t.kinds.size() - 1);
  }
  const std::size_t remaining = size - 1;
  const std::size_t max_arity = std::min<std::size_t>(4, remaining);
  const std::size_t arity = remaining == 1 ? 1 : 2 + rng.index(max_arity - 1);

  // split `remaining` into `arity` positive parts
  std::vector<std::size_t> parts(arity, 1);
  for (std::size_t extra = remaining - arity; extra > 0; --extra) ++parts[rng.index(arity)];

  std::vector<NodeId> children;
  children.reserve(arity);
  for (std::size_t part : parts) children.push_back(build_random_subtree(t, part, rng));
  t.kinds.push_back(rng.bernoulli(0.5) ? NodeKind::And : NodeKind::Or);
  t.children.push_back(std::move(children));
  return static_cast<NodeId>(t.kinds.size() - 1);
}

WeightedTree random_pool_tree(std::size_t size, Rng& rng) {
  WeightedTree out;
  out.tree.root = build_random_subtree(out.tree, size, rng);
  const std::size_t be_count = basic_event_ids(out.tree).size();
  out.probs.resize(be_count);
  for (double& p : out.probs) {
    p = std::exp(rng.uniform(std::log(1e-4), std::log(1e-1)));
  }
  return out;
}

// Redirects all edges into `at` towards an existing node, creating sharing.
// Fails (returns false) when no acyclic, duplicate-free target is found.
bool try_rewire_to_existing(WeightedTree& wt, NodeId at, Rng& rng) {
  FaultTree& t = wt.tree;
  const std::size_t n = t.node_count();
  std::vector<NodeId> parents;
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId c : t.children[v]) {
      if (c == at) {
        parents.push_back(v);
        break;
      }
    }
  }
  if (parents.empty()) return false;

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

  for (int attempt = 0; attempt < 16; ++attempt) {
    const NodeId w = static_cast<NodeId>(rng.index(n));
    if (w == at) continue;
    bool ok = true;
    for (NodeId q : parents) {
      const auto& ch = t.children[q];
      if (std::find(ch.begin(), ch.end(), w) != ch.end() || reaches(w, q)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    for (NodeId q : parents) {
      for (NodeId& c : t.children[q]) {
        if (c == at) c = w;
      }
    }
    // drop the now-orphaned basic event and compact ids
    std::size_t at_slot = 0;
    for (NodeId v = 0; v < at; ++v) {
      if (t.kinds[v] == NodeKind::BasicEvent) ++at_slot;
    }
    t.kinds.erase(t.kinds.begin() + at);
    t.children.erase(t.children.begin() + at);
    for (auto& ch : t.children) {
      for (NodeId& c : ch) {
        if (c > at) --c;
      }
    }
    if (t.root > at) --t.root;
    wt.probs.erase(wt.probs.begin() + static_cast<std::ptrdiff_t>(at_slot));
    return true;
  }
  return false;
}

}  // namespace

std::vector<WeightedTree> default_base_pool(std::uint64_t seed) {
  static constexpr std::size_t kSizes[] = {10, 11, 17, 22, 31, 35, 39, 42, 45, 50};
  Rng rng(seed);
  std::vector<WeightedTree> pool;
  pool.reserve(std::size(kSizes));
  for (std::size_t size : kSizes) pool.push_back(random_pool_tree(size, rng));
  return pool;
}

WeightedTree generate(const GenConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.seed);
  const std::uint64_t pool_seed = rng.fork_seed();
  std::vector<WeightedTree> owned_pool;
  const std::vector<WeightedTree>* pool = &cfg.base_pool;
  if (cfg.base_pool.empty()) {
    owned_pool = default_base_pool(pool_seed);
    pool = &owned_pool;
  }

  WeightedTree current = (*pool)[rng.index(pool->size())];
  int consecutive_rewires = 0;
  while (current.tree.node_count() < cfg.target_size) {
    if (rng.bernoulli(cfg.combine_bias)) {
      const WeightedTree& partner = (*pool)[rng.index(pool->size())];
      const NodeKind gate = rng.bernoulli(0.5) ? NodeKind::And : NodeKind::Or;
      current = horizontal_combine(current, partner, gate);
      consecutive_rewires = 0;
      continue;
    }
    const auto bes = basic_event_ids(current.tree);
    const NodeId at = bes[rng.index(bes.size())];
    // Sharing never grows the tree, so cap runs of it to guarantee progress.
    if (cfg.dag && consecutive_rewires < 8 && rng.bernoulli(cfg.dag_sharing) &&
        current.tree.node_count() > 2 && try_rewire_to_existing(current, at, rng)) {
      ++consecutive_rewires;
      continue;
    }
    current = vertical_combine(current, (*pool)[rng.index(pool->size())], at);
    consecutive_rewires = 0;
  }
  current.tree.names.clear();
  return current;
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

ShapeSpec fuzzify_one(double p, FuzzShape shape, double spread) {
  switch (shape) {
    case FuzzShape::Triangular:
      return Triangular{clamp01((1.0 - spread) * p), p, clamp01((1.0 + spread) * p)};
    case FuzzShape::Trapezoidal:
      return Trapezoidal{clamp01((1.0 - spread) * p), clamp01((1.0 - 0.5 * spread) * p),
                         clamp01((1.0 + 0.5 * spread) * p), clamp01((1.0 + spread) * p)};
    case FuzzShape::TruncGaussian: {
      const double sigma = 0.5 * spread * p;
      if (sigma <= 0.0) return IntervalShape{p, p};
      return TruncGaussian{p, sigma, 0.0, 1.0};
    }
    case FuzzShape::Mixed:
      break;
  }
  throw Error("mixed fuzzification requires the seeded per-event form");
}

}  // namespace

ShapeSpec fuzzify_shape(double p, FuzzShape shape, double spread) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("probability out of [0, 1]");
  if (!(spread >= 0.0 && spread <= 1.0)) throw Error("spread must lie in [0, 1]");
  return fuzzify_one(p, shape, spread);
}

std::vector<ShapeSpec> fuzzify_shapes(std::span<const double> p, FuzzShape shape, double spread,
                                      std::uint64_t seed) {
  if (!(spread >= 0.0 && spread <= 1.0)) throw Error("spread must lie in [0, 1]");
  Rng rng(seed);
  static constexpr FuzzShape kConcrete[] = {FuzzShape::Triangular, FuzzShape::Trapezoidal,
                                            FuzzShape::TruncGaussian};
  std::vector<ShapeSpec> out;
  out.reserve(p.size());
  for (double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw Error("probability out of [0, 1]");
    const FuzzShape s = shape == FuzzShape::Mixed ? kConcrete[rng.index(3)] : shape;
    out.push_back(fuzzify_one(pi, s, spread));
  }
  return out;
}

FuzzyProbVector fuzzify(std::span<const double> p, FuzzShape shape, double spread, int n_cuts,
                        std::uint64_t seed) {
  const auto shapes = fuzzify_shapes(p, shape, spread, seed);
  std::vector<AlphaFuzzy> entries;
  entries.reserve(shapes.size());
  for (const ShapeSpec& s : shapes) entries.push_back(discretize(s, n_cuts));
  return FuzzyProbVector(std::move(entries));
}

}  // namespace fuzztree
