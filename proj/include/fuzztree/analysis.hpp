#pragma once

#include <span>
#include <vector>

#include "fuzztree/engines.hpp"
#include "fuzztree/fault_tree.hpp"
#include "fuzztree/fuzzy.hpp"

namespace fuzztree {

/// One regular fuzzy probability per basic event, all on the same alpha grid
/// and with endpoints in [0, 1]. Validated on construction.
class FuzzyProbVector {
 public:
  explicit FuzzyProbVector(std::vector<AlphaFuzzy> entries);

  std::span<const AlphaFuzzy> entries() const { return entries_; }
  const AlphaFuzzy& operator[](std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }
  int n_cuts() const { return entries_.front().n_cuts(); }

  /// The all-left-endpoints vector p^(alpha,l) at cut index k.
  ProbVector endpoints_lower(int k) const;
  /// The all-right-endpoints vector p^(alpha,r) at cut index k.
  ProbVector endpoints_upper(int k) const;

 private:
  std::vector<AlphaFuzzy> entries_;
};

/// Fuzzy unreliability in alpha-cut form plus provenance: which engine ran,
/// how many cuts, and the wall time of every endpoint evaluation.
struct AnalysisResult {
  EngineChoice engine = EngineChoice::BottomUp;
  int n_cuts = 0;
  std::vector<double> alpha;   // levels k/N ascending
  std::vector<double> lower;   // nondecreasing in k
  std::vector<double> upper;   // nonincreasing in k
  std::vector<double> wall_lower_s, wall_upper_s;  // per endpoint evaluation
  double wall_total_s = 0.0;
  int clamped_endpoints = 0;  // engine outputs nudged back into [0, 1]

  bool apex_degenerate(double tol = 1e-12) const {
    return upper.back() - lower.back() <= tol;
  }
  double crisp_value() const { return 0.5 * (lower.back() + upper.back()); }
  AlphaFuzzy cuts() const { return AlphaFuzzy::from_cuts(lower, upper); }
};

struct LiftOptions {
  int jobs = 0;  // worker cap for the endpoint fan-out; 0 = hardware, 1 = serial
  EngineOptions engine;
};

/// The engine lifting: evaluates the prepared crisp engine at the
/// all-left-endpoints and all-right-endpoints vectors of every level —
/// exactly 2N crisp evaluations — and assembles the alpha-indexed interval
/// family. The fan-out runs on an OpenMP worker pool with deterministic
/// result placement by (level, side).
AnalysisResult fuzzy_unreliability(const FaultTree& t, const FuzzyProbVector& fp,
                                   EngineChoice engine, const LiftOptions& opts = {});

/// Serial reference for the lifting, kept for testing and benchmarking;
/// produces bit-identical results to the parallel path.
AnalysisResult fuzzy_unreliability_serial(const FaultTree& t, const FuzzyProbVector& fp,
                                          EngineChoice engine, const LiftOptions& opts = {});

struct DiscreteOracleCaps {
  std::size_t max_basic_events = 12;
  std::size_t max_combinations = 1'000'000;  // product of support sizes
};

/// Exact fuzzy unreliability for finite-support fuzzy probabilities: sup-min
/// over every combination of support values, with the crisp unreliability per
/// combination computed by brute force. The verification oracle for the
/// lifting; cost grows with the support product and 2^|BE|.
DiscreteFuzzy fuzzy_unreliability_discrete(const FaultTree& t,
                                           std::span<const DiscreteFuzzy> fp,
                                           const DiscreteOracleCaps& caps = {});

}  // namespace fuzztree
