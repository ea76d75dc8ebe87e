#include "fuzztree/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fuzztree {

namespace {

bool finite(double x) { return std::isfinite(x); }

void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

bool in01(double x) { return x >= 0.0 && x <= 1.0; }

// Builds an AlphaFuzzy from computed endpoints, repairing violations of at
// most snap_tol (floating-point noise from otherwise monotone evaluations)
// and rejecting anything larger.
AlphaFuzzy make_nested(std::vector<double> lo, std::vector<double> hi, double snap_tol) {
  const std::size_t n = lo.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (lo[k] > hi[k]) {
      require(lo[k] - hi[k] <= snap_tol, "alpha-cut endpoints inverted beyond tolerance");
      const double mid = 0.5 * (lo[k] + hi[k]);
      lo[k] = hi[k] = mid;
    }
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (lo[k] < lo[k - 1]) {
      require(lo[k - 1] - lo[k] <= snap_tol, "alpha-cuts not nested beyond tolerance");
      lo[k] = lo[k - 1];
    }
    if (hi[k] > hi[k - 1]) {
      require(hi[k] - hi[k - 1] <= snap_tol, "alpha-cuts not nested beyond tolerance");
      hi[k] = hi[k - 1];
    }
    if (lo[k] > hi[k]) {
      const double mid = 0.5 * (lo[k] + hi[k]);
      lo[k] = hi[k] = mid;
    }
  }
  return AlphaFuzzy::from_cuts(std::move(lo), std::move(hi));
}

}  // namespace

void check_shape(const ShapeSpec& shape) {
  std::visit(
      [](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Triangular>) {
          require(finite(s.a) && finite(s.b) && finite(s.d), "triangular: parameters must be finite");
          require(s.a <= s.b && s.b <= s.d, "triangular: requires a <= b <= d");
        } else if constexpr (std::is_same_v<S, Trapezoidal>) {
          require(finite(s.a) && finite(s.b) && finite(s.c) && finite(s.d),
                  "trapezoidal: parameters must be finite");
          require(s.a <= s.b && s.b <= s.c && s.c <= s.d, "trapezoidal: requires a <= b <= c <= d");
        } else if constexpr (std::is_same_v<S, IntervalShape>) {
          require(finite(s.a) && finite(s.b), "interval: parameters must be finite");
          require(s.a <= s.b, "interval: requires a <= b");
        } else {
          require(finite(s.mean) && finite(s.stddev) && finite(s.lo) && finite(s.hi),
                  "gaussian: parameters must be finite");
          require(s.stddev > 0.0, "gaussian: requires stddev > 0");
          require(s.lo < s.hi, "gaussian: requires lo < hi");
          // The level-1 cut is {mean}; a mean outside the window would make it
          // empty and the discretized number would not be regular.
          require(s.lo <= s.mean && s.mean <= s.hi,
                  "gaussian: mean must lie inside the truncation window");
        }
      },
      shape);
}

bool shape_in_unit_interval(const ShapeSpec& shape) {
  return std::visit(
      [](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Triangular>) {
          return in01(s.a) && in01(s.b) && in01(s.d);
        } else if constexpr (std::is_same_v<S, Trapezoidal>) {
          return in01(s.a) && in01(s.b) && in01(s.c) && in01(s.d);
        } else if constexpr (std::is_same_v<S, IntervalShape>) {
          return in01(s.a) && in01(s.b);
        } else {
          return in01(s.mean) && in01(s.lo) && in01(s.hi);
        }
      },
      shape);
}

AlphaFuzzy AlphaFuzzy::from_cuts(std::vector<double> lo, std::vector<double> hi) {
  require(!lo.empty(), "alpha-cut list must not be empty");
  require(lo.size() == hi.size(), "alpha-cut endpoint arrays differ in length");
  const std::size_t n = lo.size();
  for (std::size_t k = 0; k < n; ++k) {
    require(finite(lo[k]) && finite(hi[k]), "alpha-cut endpoints must be finite");
    require(lo[k] <= hi[k], "alpha-cut has lo > hi at level " +
                                std::to_string(static_cast<double>(k + 1) / static_cast<double>(n)));
  }
  for (std::size_t k = 1; k < n; ++k) {
    require(lo[k] >= lo[k - 1] && hi[k] <= hi[k - 1], "alpha-cuts are not nested");
  }
  return AlphaFuzzy(std::move(lo), std::move(hi));
}

AlphaFuzzy AlphaFuzzy::crisp(double x, int n_cuts) {
  require(n_cuts >= 1, "n_cuts must be positive");
  require(finite(x), "crisp value must be finite");
  return AlphaFuzzy(std::vector<double>(static_cast<std::size_t>(n_cuts), x),
                    std::vector<double>(static_cast<std::size_t>(n_cuts), x));
}

bool AlphaFuzzy::in_unit_interval() const {
  return lo_.front() >= 0.0 && hi_.front() <= 1.0;
}

bool AlphaFuzzy::is_crisp(double tol) const {
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    if (hi_[k] - lo_[k] > tol) return false;
  }
  return true;
}

AlphaFuzzy discretize(const ShapeSpec& shape, int n_cuts) {
  check_shape(shape);
  require(n_cuts >= 1, "n_cuts must be positive");
  const std::size_t n = static_cast<std::size_t>(n_cuts);
  std::vector<double> lo(n), hi(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double alpha = static_cast<double>(k + 1) / static_cast<double>(n);
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Triangular>) {
            lo[k] = (s.b - s.a) * alpha + s.a;
            hi[k] = s.d - (s.d - s.b) * alpha;
          } else if constexpr (std::is_same_v<S, Trapezoidal>) {
            lo[k] = (s.b - s.a) * alpha + s.a;
            hi[k] = s.d - (s.d - s.c) * alpha;
          } else if constexpr (std::is_same_v<S, IntervalShape>) {
            lo[k] = s.a;
            hi[k] = s.b;
          } else {
            // gauss_{m,s}[x] >= alpha  <=>  |x - m| <= s*sqrt(-2 ln alpha)
            const double w = alpha >= 1.0 ? 0.0 : s.stddev * std::sqrt(-2.0 * std::log(alpha));
            lo[k] = std::max(s.lo, s.mean - w);
            hi[k] = std::min(s.hi, s.mean + w);
          }
        },
        shape);
  }
  return AlphaFuzzy::from_cuts(std::move(lo), std::move(hi));
}

double membership_at(const AlphaFuzzy& f, double x) {
  for (int k = f.n_cuts() - 1; k >= 0; --k) {
    if (f.lo(k) <= x && x <= f.hi(k)) return f.level(k);
  }
  return 0.0;
}

AlphaFuzzy zadeh_endpoint_map(const std::function<double(std::span<const double>)>& f,
                              std::span<const Monotone> directions,
                              std::span<const AlphaFuzzy* const> args) {
  require(!args.empty(), "zadeh_endpoint_map: needs at least one argument");
  require(directions.size() == args.size(),
          "zadeh_endpoint_map: direction count differs from argument count");
  const int n_cuts = args.front()->n_cuts();
  for (const AlphaFuzzy* a : args) {
    require(a->n_cuts() == n_cuts, "zadeh_endpoint_map: arguments on different alpha grids");
  }
  const std::size_t arity = args.size();
  std::vector<double> left(arity), right(arity);
  std::vector<double> lo(static_cast<std::size_t>(n_cuts)), hi(static_cast<std::size_t>(n_cuts));
  for (int k = 0; k < n_cuts; ++k) {
    for (std::size_t i = 0; i < arity; ++i) {
      const bool inc = directions[i] == Monotone::NonDecreasing;
      left[i] = inc ? args[i]->lo(k) : args[i]->hi(k);
      right[i] = inc ? args[i]->hi(k) : args[i]->lo(k);
    }
    lo[static_cast<std::size_t>(k)] = f(left);
    hi[static_cast<std::size_t>(k)] = f(right);
  }
  return make_nested(std::move(lo), std::move(hi), 1e-12);
}

AlphaFuzzy zadeh_endpoint_map(const std::function<double(std::span<const double>)>& f,
                              std::span<const Monotone> directions,
                              std::span<const AlphaFuzzy> args) {
  std::vector<const AlphaFuzzy*> ptrs(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) ptrs[i] = &args[i];
  return zadeh_endpoint_map(f, directions, std::span<const AlphaFuzzy* const>(ptrs));
}

DiscreteFuzzy DiscreteFuzzy::from_support(std::map<double, double> support) {
  for (const auto& [value, degree] : support) {
    require(finite(value), "discrete fuzzy: values must be finite");
    require(degree > 0.0 && degree <= 1.0, "discrete fuzzy: degrees must lie in (0, 1]");
  }
  return DiscreteFuzzy(std::move(support));
}

DiscreteFuzzy DiscreteFuzzy::singleton(double x, double degree) {
  return from_support({{x, degree}});
}

double DiscreteFuzzy::degree_at(double x) const {
  auto it = support_.find(x);
  return it == support_.end() ? 0.0 : it->second;
}

DiscreteFuzzy discrete_zadeh(const std::function<double(std::span<const double>)>& f,
                             std::span<const DiscreteFuzzy> args) {
  require(!args.empty(), "discrete_zadeh: needs at least one argument");
  const std::size_t arity = args.size();
  std::vector<std::vector<std::pair<double, double>>> supports(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    require(args[i].size() > 0, "discrete_zadeh: argument with empty support");
    supports[i].assign(args[i].support().begin(), args[i].support().end());
  }

  std::map<double, double> out;
  std::vector<std::size_t> idx(arity, 0);
  std::vector<double> point(arity);
  for (;;) {
    double degree = 1.0;
    for (std::size_t i = 0; i < arity; ++i) {
      point[i] = supports[i][idx[i]].first;
      degree = std::min(degree, supports[i][idx[i]].second);
    }
    const double value = f(point);
    auto [it, inserted] = out.emplace(value, degree);
    if (!inserted) it->second = std::max(it->second, degree);

    // odometer over the product of supports
    std::size_t i = 0;
    while (i < arity && ++idx[i] == supports[i].size()) {
      idx[i] = 0;
      ++i;
    }
    if (i == arity) break;
  }
  return DiscreteFuzzy::from_support(std::move(out));
}

}  // namespace fuzztree
