#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fuzztree/analysis.hpp"
#include "fuzztree/fault_tree.hpp"
#include "fuzztree/fuzzy.hpp"

namespace fuzztree {

/// A fault tree together with its crisp basic-event probabilities.
struct WeightedTree {
  FaultTree tree;
  ProbVector probs;
};

enum class FuzzShape { Triangular, Trapezoidal, TruncGaussian, Mixed };

std::string to_string(FuzzShape s);
std::optional<FuzzShape> fuzz_shape_from_string(std::string_view s);

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t target_size = 1;          // grow until node count >= target
  std::vector<WeightedTree> base_pool;  // empty selects the built-in pool
  double combine_bias = 0.5;            // probability of horizontal over vertical
  bool dag = false;
  double dag_sharing = 0.0;  // fraction of substitution points rewired to existing subtrees
  FuzzShape fuzz_shape = FuzzShape::Triangular;
  double fuzz_spread = 0.2;
};

void check_config(const GenConfig& cfg);

/// New root gate over the two roots; node count |V1| + |V2| + 1.
WeightedTree horizontal_combine(const WeightedTree& t1, const WeightedTree& t2, NodeKind gate);

/// Replaces basic event `at` of t1 by t2's root; node count |V1| + |V2| - 1.
/// Tree-structured inputs yield a tree-structured output.
WeightedTree vertical_combine(const WeightedTree& t1, const WeightedTree& t2, NodeId at);

/// Ten seeded random tree-structured FTs with node counts 10..50, uniform
/// gate kinds, and basic-event probabilities log-uniform in [1e-4, 1e-1].
std::vector<WeightedTree> default_base_pool(std::uint64_t seed);

/// Grows a fault tree from the pool by repeated horizontal/vertical
/// combination until it reaches the target size; in DAG mode a dag_sharing
/// fraction of substitution points is rewired to existing subtrees instead of
/// splicing fresh copies. Deterministic given the config (seed included).
/// The result is unnamed (serialization assigns canonical names) and always
/// validates.
WeightedTree generate(const GenConfig& cfg);

/// Parametric fuzzification of a crisp probability, centred at p:
/// triangular (1-s)p / p / (1+s)p, a trapezoidal analogue with plateau
/// half-width s/2 * p, or a truncated Gaussian with stddev s/2 * p. All
/// parameters are clamped to [0, 1]; degenerate widths collapse to a crisp
/// interval.
ShapeSpec fuzzify_shape(double p, FuzzShape shape, double spread);

/// Per-BE shapes; Mixed draws the shape per basic event from the seed.
std::vector<ShapeSpec> fuzzify_shapes(std::span<const double> p, FuzzShape shape, double spread,
                                      std::uint64_t seed = 0);

/// fuzzify_shapes followed by discretization at n_cuts.
FuzzyProbVector fuzzify(std::span<const double> p, FuzzShape shape, double spread, int n_cuts,
                        std::uint64_t seed = 0);

}  // namespace fuzztree
