#include "fuzztree/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fuzztree {

namespace {

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

int effective_jobs(int jobs) {
  if (jobs > 0) return jobs;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

FuzzyProbVector::FuzzyProbVector(std::vector<AlphaFuzzy> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error("fuzzy probability vector must not be empty");
  const int n = entries_.front().n_cuts();
  for (const AlphaFuzzy& f : entries_) {
    if (f.n_cuts() != n) throw Error("fuzzy probabilities on different alpha grids");
    if (!f.in_unit_interval()) throw Error("fuzzy probability endpoints out of [0, 1]");
  }
}

ProbVector FuzzyProbVector::endpoints_lower(int k) const {
  ProbVector p(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) p[i] = entries_[i].lo(k);
  return p;
}

ProbVector FuzzyProbVector::endpoints_upper(int k) const {
  ProbVector p(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) p[i] = entries_[i].hi(k);
  return p;
}

namespace {

// Clamps stray floating-point excursions outside [0, 1] and enforces the
// nested-interval invariants, snapping violations of at most 1e-12 (a
// monotone engine cannot legitimately invert endpoints) and rejecting more.
void finalize_cuts(AnalysisResult& r) {
  constexpr double kSnap = 1e-12;
  auto clamp01 = [&](double& x) {
    if (x < 0.0 || x > 1.0) {
      x = std::clamp(x, 0.0, 1.0);
      ++r.clamped_endpoints;
    }
  };
  for (double& x : r.lower) clamp01(x);
  for (double& x : r.upper) clamp01(x);

  const std::size_t n = r.lower.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double gap = r.lower[k] - r.upper[k];
    if (gap > 0.0) {
      if (gap > kSnap) throw Error("fuzzy unreliability cut inverted beyond tolerance");
      const double mid = 0.5 * (r.lower[k] + r.upper[k]);
      r.lower[k] = r.upper[k] = mid;
    }
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (r.lower[k] < r.lower[k - 1]) {
      if (r.lower[k - 1] - r.lower[k] > kSnap) throw Error("fuzzy unreliability cuts not nested");
      r.lower[k] = r.lower[k - 1];
    }
    if (r.upper[k] > r.upper[k - 1]) {
      if (r.upper[k] - r.upper[k - 1] > kSnap) throw Error("fuzzy unreliability cuts not nested");
      r.upper[k] = r.upper[k - 1];
    }
    if (r.lower[k] > r.upper[k]) {
      const double mid = 0.5 * (r.lower[k] + r.upper[k]);
      r.lower[k] = r.upper[k] = mid;
    }
  }
}

AnalysisResult lift(const FaultTree& t, const FuzzyProbVector& fp, EngineChoice engine,
                    const LiftOptions& opts, bool parallel) {
  require_valid(t);
  if (fp.size() != basic_event_ids(t).size()) {
    throw Error("fuzzy probability vector length differs from basic event count");
  }
  const double t0 = now_s();
  const auto eng = make_engine(t, engine, opts.engine);
  const int n = fp.n_cuts();

  AnalysisResult result;
  result.engine = engine;
  result.n_cuts = n;
  result.alpha.resize(n);
  result.lower.resize(n);
  result.upper.resize(n);
  result.wall_lower_s.resize(n);
  result.wall_upper_s.resize(n);
  for (int k = 0; k < n; ++k) result.alpha[k] = fp[0].level(k);

  // 2N independent crisp evaluations, one per (level, side) slot.
  const int total = 2 * n;
  const int jobs = parallel ? effective_jobs(opts.jobs) : 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(jobs) if (jobs > 1)
#endif
  for (int idx = 0; idx < total; ++idx) {
    const int k = idx / 2;
    const bool upper_side = idx & 1;
    const ProbVector p = upper_side ? fp.endpoints_upper(k) : fp.endpoints_lower(k);
    const double start = now_s();
    const double value = eng->evaluate(p);
    const double elapsed = now_s() - start;
    if (upper_side) {
      result.upper[k] = value;
      result.wall_upper_s[k] = elapsed;
    } else {
      result.lower[k] = value;
      result.wall_lower_s[k] = elapsed;
    }
  }

  finalize_cuts(result);
  result.wall_total_s = now_s() - t0;
  return result;
}

}  // namespace

AnalysisResult fuzzy_unreliability(const FaultTree& t, const FuzzyProbVector& fp,
                                   EngineChoice engine, const LiftOptions& opts) {
  return lift(t, fp, engine, opts, /*parallel=*/opts.jobs != 1);
}

AnalysisResult fuzzy_unreliability_serial(const FaultTree& t, const FuzzyProbVector& fp,
                                          EngineChoice engine, const LiftOptions& opts) {
  return lift(t, fp, engine, opts, /*parallel=*/false);
}

DiscreteFuzzy fuzzy_unreliability_discrete(const FaultTree& t,
                                           std::span<const DiscreteFuzzy> fp,
                                           const DiscreteOracleCaps& caps) {
  require_valid(t);
  const std::size_t be_count = basic_event_ids(t).size();
  if (fp.size() != be_count) {
    throw Error("discrete fuzzy vector length differs from basic event count");
  }
  if (be_count > caps.max_basic_events) {
    throw Error("discrete oracle limited to " + std::to_string(caps.max_basic_events) +
                " basic events");
  }
  std::size_t combos = 1;
  for (const DiscreteFuzzy& f : fp) {
    if (f.size() == 0) throw Error("discrete fuzzy probability with empty support");
    if (combos > caps.max_combinations / f.size()) {
      throw Error("discrete oracle support product exceeds " +
                  std::to_string(caps.max_combinations));
    }
    combos *= f.size();
  }

  std::vector<std::vector<std::pair<double, double>>> supports(be_count);
  for (std::size_t i = 0; i < be_count; ++i) {
    supports[i].assign(fp[i].support().begin(), fp[i].support().end());
    for (const auto& [value, degree] : supports[i]) {
      if (!(value >= 0.0 && value <= 1.0)) throw Error("discrete fuzzy probability out of [0, 1]");
      (void)degree;
    }
  }

  std::map<double, double> out;
  std::vector<std::size_t> idx(be_count, 0);
  ProbVector point(be_count);
  for (;;) {
    double degree = 1.0;
    for (std::size_t i = 0; i < be_count; ++i) {
      point[i] = supports[i][idx[i]].first;
      degree = std::min(degree, supports[i][idx[i]].second);
    }
    const double value = unreliability_bruteforce(t, point, caps.max_basic_events);
    auto [it, inserted] = out.emplace(value, degree);
    if (!inserted) it->second = std::max(it->second, degree);

    std::size_t i = 0;
    while (i < be_count && ++idx[i] == supports[i].size()) {
      idx[i] = 0;
      ++i;
    }
    if (i == be_count) break;
  }
  return DiscreteFuzzy::from_support(std::move(out));
}

}  // namespace fuzztree
