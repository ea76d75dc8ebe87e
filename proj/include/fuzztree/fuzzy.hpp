#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fuzztree {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Parametric shapes
// ---------------------------------------------------------------------------

struct Triangular {
  double a, b, d;  // feet a, d; apex b
};

struct Trapezoidal {
  double a, b, c, d;  // feet a, d; plateau [b, c]
};

struct IntervalShape {
  double a, b;  // indicator of [a, b]
};

struct TruncGaussian {
  double mean, stddev;
  double lo = 0.0, hi = 1.0;  // truncation window; must contain the mean
};

using ShapeSpec = std::variant<Triangular, Trapezoidal, IntervalShape, TruncGaussian>;

/// Throws Error if the shape parameters are inconsistent
/// (ordering violated, nonpositive stddev, mean outside the truncation window).
void check_shape(const ShapeSpec& shape);

/// True iff every parameter (and truncation bound) lies in [0, 1], as required
/// when the shape describes a fuzzy probability.
bool shape_in_unit_interval(const ShapeSpec& shape);

// ---------------------------------------------------------------------------
// AlphaFuzzy: regular fuzzy number as nested alpha-cuts
// ---------------------------------------------------------------------------

/// A regular fuzzy number stored as N nested cuts at levels k/N, k = 1..N.
/// Cut k-1 (0-based) is the interval [lo(k-1), hi(k-1)] at level (k)/N.
/// Invariants: lo <= hi per cut, lo nondecreasing and hi nonincreasing in the
/// level, all endpoints finite. Instances are immutable values.
class AlphaFuzzy {
 public:
  /// Builds from explicit endpoint arrays; validates all invariants.
  static AlphaFuzzy from_cuts(std::vector<double> lo, std::vector<double> hi);

  /// A crisp number: every cut is the degenerate interval [x, x].
  static AlphaFuzzy crisp(double x, int n_cuts);

  int n_cuts() const { return static_cast<int>(lo_.size()); }
  double level(int k) const { return static_cast<double>(k + 1) / static_cast<double>(n_cuts()); }
  double lo(int k) const { return lo_[static_cast<std::size_t>(k)]; }
  double hi(int k) const { return hi_[static_cast<std::size_t>(k)]; }
  std::span<const double> lower() const { return lo_; }
  std::span<const double> upper() const { return hi_; }

  /// Support as reported by the finite representation: the level-1/N cut.
  double support_lo() const { return lo_.front(); }
  double support_hi() const { return hi_.front(); }

  bool same_grid(const AlphaFuzzy& other) const { return n_cuts() == other.n_cuts(); }
  bool in_unit_interval() const;
  /// Zero-width at every level.
  bool is_crisp(double tol = 0.0) const;

  friend bool operator==(const AlphaFuzzy&, const AlphaFuzzy&) = default;

 private:
  AlphaFuzzy(std::vector<double> lo, std::vector<double> hi)
      : lo_(std::move(lo)), hi_(std::move(hi)) {}

  std::vector<double> lo_, hi_;
};

/// Exact alpha-cut endpoints of a shape at levels k/N. Trapezoids use the
/// closed form [(b-a)*alpha + a, d - (d-c)*alpha]; triangles are trapezoids
/// with a degenerate plateau; intervals are level-independent; truncated
/// Gaussians use [m - s*sqrt(-2 ln alpha), m + s*sqrt(-2 ln alpha)]
/// intersected with the truncation window.
AlphaFuzzy discretize(const ShapeSpec& shape, int n_cuts);

/// Step-function reconstruction of the membership degree: the largest stored
/// level whose cut contains x, or 0 if none does.
double membership_at(const AlphaFuzzy& f, double x);

enum class Monotone { NonDecreasing, NonIncreasing };

/// Zadeh extension of a coordinate-wise monotone continuous map, computed at
/// cut endpoints. For each level the lower endpoint evaluates f at the
/// per-argument endpoint chosen by the declared direction (lo for
/// nondecreasing, hi for nonincreasing); the upper endpoint uses the opposite
/// choice. All arguments must share one grid.
AlphaFuzzy zadeh_endpoint_map(const std::function<double(std::span<const double>)>& f,
                              std::span<const Monotone> directions,
                              std::span<const AlphaFuzzy> args);

/// Variant taking pointers, used by hot paths that hold arguments
/// non-contiguously. Behaves identically.
AlphaFuzzy zadeh_endpoint_map(const std::function<double(std::span<const double>)>& f,
                              std::span<const Monotone> directions,
                              std::span<const AlphaFuzzy* const> args);

// ---------------------------------------------------------------------------
// DiscreteFuzzy: finite-support membership functions
// ---------------------------------------------------------------------------

/// Fuzzy element of the reals whose membership is nonzero on finitely many
/// points. Used for the exact sup-min oracles.
class DiscreteFuzzy {
 public:
  static DiscreteFuzzy from_support(std::map<double, double> support);
  static DiscreteFuzzy singleton(double x, double degree = 1.0);

  const std::map<double, double>& support() const { return support_; }
  double degree_at(double x) const;
  std::size_t size() const { return support_.size(); }

  friend bool operator==(const DiscreteFuzzy&, const DiscreteFuzzy&) = default;

 private:
  explicit DiscreteFuzzy(std::map<double, double> support) : support_(std::move(support)) {}
  std::map<double, double> support_;
};

/// Exact Zadeh extension (sup-min over preimages) by exhaustive enumeration of
/// the product of the argument supports; output values merged by max degree.
DiscreteFuzzy discrete_zadeh(const std::function<double(std::span<const double>)>& f,
                             std::span<const DiscreteFuzzy> args);

}  // namespace fuzztree
