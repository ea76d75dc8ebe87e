#include <doctest.h>

#include <cmath>
#include <map>

#include "fuzztree/fuzzy.hpp"
#include "fuzztree/random.hpp"
#include "helpers.hpp"

using namespace fuzztree;

namespace {

const Monotone kInc2[] = {Monotone::NonDecreasing, Monotone::NonDecreasing};

double product2(std::span<const double> x) { return x[0] * x[1]; }

void check_nested(const AlphaFuzzy& f) {
  for (int k = 0; k < f.n_cuts(); ++k) {
    CHECK(f.lo(k) <= f.hi(k));
    if (k > 0) {
      CHECK(f.lo(k) >= f.lo(k - 1));
      CHECK(f.hi(k) <= f.hi(k - 1));
    }
  }
}

}  // namespace

TEST_CASE("discretize: trapezoid closed form") {
  const AlphaFuzzy f = discretize(Trapezoidal{0.1, 0.4, 0.6, 0.8}, 2);
  // level 1/2
  CHECK(f.lo(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(f.hi(0) == doctest::Approx(0.7).epsilon(1e-12));
  // level 1: the plateau collapses to [b, c]
  CHECK(f.lo(1) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(f.hi(1) == doctest::Approx(0.6).epsilon(1e-12));
  check_nested(f);
}

TEST_CASE("discretize: trapezoid endpoints match the closed form exactly") {
  Rng rng(7);
  for (int iter = 0; iter < 50; ++iter) {
    double v[4] = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    std::sort(v, v + 4);
    const Trapezoidal shape{v[0], v[1], v[2], v[3]};
    const int n = 1 + static_cast<int>(rng.index(30));
    const AlphaFuzzy f = discretize(ShapeSpec{shape}, n);
    for (int k = 0; k < n; ++k) {
      const double alpha = static_cast<double>(k + 1) / n;
      CHECK(f.lo(k) == (shape.b - shape.a) * alpha + shape.a);
      CHECK(f.hi(k) == shape.d - (shape.d - shape.c) * alpha);
    }
  }
}

TEST_CASE("discretize: interval is level-independent") {
  for (int n : {1, 2, 10, 33}) {
    const AlphaFuzzy f = discretize(IntervalShape{0.3, 0.6}, n);
    for (int k = 0; k < n; ++k) {
      CHECK(f.lo(k) == 0.3);
      CHECK(f.hi(k) == 0.6);
    }
  }
}

TEST_CASE("discretize: triangular equals trapezoid with degenerate plateau") {
  const AlphaFuzzy tri = discretize(Triangular{0.2, 0.4, 0.8}, 10);
  const AlphaFuzzy trap = discretize(Trapezoidal{0.2, 0.4, 0.4, 0.8}, 10);
  CHECK(tri == trap);
}

TEST_CASE("discretize: truncated Gaussian") {
  const TruncGaussian g{0.4, 0.1, 0.0, 1.0};
  const AlphaFuzzy f = discretize(ShapeSpec{g}, 10);
  for (int k = 0; k < 10; ++k) {
    const double alpha = f.level(k);
    const double w = alpha >= 1.0 ? 0.0 : 0.1 * std::sqrt(-2.0 * std::log(alpha));
    CHECK(f.lo(k) == doctest::Approx(std::max(0.0, 0.4 - w)).epsilon(1e-15));
    CHECK(f.hi(k) == doctest::Approx(std::min(1.0, 0.4 + w)).epsilon(1e-15));
  }
  // membership at the stored cut bounds is >= the cut level by construction
  CHECK(f.lo(9) == 0.4);
  CHECK(f.hi(9) == 0.4);
  check_nested(f);

  // wide stddev: cuts clamp to the truncation window
  const AlphaFuzzy wide = discretize(TruncGaussian{0.5, 10.0, 0.0, 1.0}, 4);
  CHECK(wide.lo(0) == 0.0);
  CHECK(wide.hi(0) == 1.0);
}

TEST_CASE("discretize: rejects bad shapes and zero cuts") {
  CHECK_THROWS_AS(discretize(Triangular{0.5, 0.4, 0.6}, 10), Error);
  CHECK_THROWS_AS(discretize(Trapezoidal{0.1, 0.5, 0.4, 0.8}, 10), Error);
  CHECK_THROWS_AS(discretize(IntervalShape{0.7, 0.3}, 10), Error);
  CHECK_THROWS_AS(discretize(TruncGaussian{0.4, 0.0, 0.0, 1.0}, 10), Error);
  CHECK_THROWS_AS(discretize(TruncGaussian{1.5, 0.1, 0.0, 1.0}, 10), Error);
  CHECK_THROWS_AS(discretize(Triangular{0.2, 0.4, 0.8}, 0), Error);
}

TEST_CASE("membership_at: plateau, apex, outside support") {
  CHECK(membership_at(discretize(IntervalShape{0.3, 0.6}, 10), 0.45) == 1.0);
  CHECK(membership_at(discretize(Triangular{0.2, 0.4, 0.8}, 10), 0.4) == 1.0);
  CHECK(membership_at(discretize(Triangular{0.2, 0.4, 0.8}, 10), 0.1) == 0.0);
}

TEST_CASE("membership_at: step reconstruction lands on stored levels") {
  const AlphaFuzzy f = discretize(Triangular{0.0, 0.5, 1.0}, 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(membership_at(f, f.lo(k)) >= f.level(k));
    CHECK(membership_at(f, f.hi(k)) >= f.level(k));
  }
  // strictly between the level-1 and level-2 lower endpoints the step stays low
  const double x = 0.5 * (f.lo(0) + f.lo(1));
  CHECK(membership_at(f, x) == f.level(0));
}

TEST_CASE("zadeh_endpoint_map: triangular product from the worked example") {
  // alpha-cuts of tri(1,2,3) * tri(3,4,6) are [a^2+4a+3, 2a^2-12a+18]
  const AlphaFuzzy a = discretize(Triangular{1, 2, 3}, 20);
  const AlphaFuzzy b = discretize(Triangular{3, 4, 6}, 20);
  const AlphaFuzzy prod = zadeh_endpoint_map(product2, kInc2, std::vector<AlphaFuzzy>{a, b});
  for (int k = 0; k < 20; ++k) {
    const double alpha = prod.level(k);
    CHECK(prod.lo(k) == doctest::Approx(alpha * alpha + 4 * alpha + 3).epsilon(1e-9));
    CHECK(prod.hi(k) == doctest::Approx(2 * alpha * alpha - 12 * alpha + 18).epsilon(1e-9));
  }
  check_nested(prod);
}

TEST_CASE("zadeh_endpoint_map: product is not triangular (shape non-closure)") {
  const AlphaFuzzy a = discretize(Triangular{1, 2, 3}, 20);
  const AlphaFuzzy b = discretize(Triangular{3, 4, 6}, 20);
  const AlphaFuzzy prod = zadeh_endpoint_map(product2, kInc2, std::vector<AlphaFuzzy>{a, b});
  // the only triangular number with the same apex (8) and support [3, 18]
  const AlphaFuzzy tri = discretize(Triangular{3, 8, 18}, 20);
  const int mid = 9;  // alpha = 0.5
  CHECK(prod.level(mid) == 0.5);
  CHECK(std::abs(prod.lo(mid) - tri.lo(mid)) > 0.1);
  CHECK(std::abs(prod.hi(mid) - tri.hi(mid)) > 0.1);
}

TEST_CASE("zadeh_endpoint_map: complement of an interval") {
  const AlphaFuzzy arg = discretize(IntervalShape{0.1, 0.4}, 8);
  const Monotone dir[] = {Monotone::NonIncreasing};
  const AlphaFuzzy out = zadeh_endpoint_map([](std::span<const double> x) { return 1.0 - x[0]; },
                                            dir, std::vector<AlphaFuzzy>{arg});
  for (int k = 0; k < 8; ++k) {
    CHECK(out.lo(k) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(out.hi(k) == doctest::Approx(0.9).epsilon(1e-15));
  }
}

TEST_CASE("zadeh_endpoint_map: trapezoid sum law") {
  const Trapezoidal ta{0.05, 0.1, 0.2, 0.3};
  const Trapezoidal tb{0.1, 0.3, 0.35, 0.4};
  const AlphaFuzzy sum = zadeh_endpoint_map(
      [](std::span<const double> x) { return x[0] + x[1]; }, kInc2,
      std::vector<AlphaFuzzy>{discretize(ShapeSpec{ta}, 12), discretize(ShapeSpec{tb}, 12)});
  const AlphaFuzzy expected =
      discretize(Trapezoidal{ta.a + tb.a, ta.b + tb.b, ta.c + tb.c, ta.d + tb.d}, 12);
  for (int k = 0; k < 12; ++k) {
    CHECK(sum.lo(k) == doctest::Approx(expected.lo(k)).epsilon(1e-12));
    CHECK(sum.hi(k) == doctest::Approx(expected.hi(k)).epsilon(1e-12));
  }
}

TEST_CASE("zadeh_endpoint_map: rejects grid and direction mismatches") {
  const AlphaFuzzy a = discretize(Triangular{0, 0.5, 1}, 10);
  const AlphaFuzzy b = discretize(Triangular{0, 0.5, 1}, 5);
  CHECK_THROWS_AS(zadeh_endpoint_map(product2, kInc2, std::vector<AlphaFuzzy>{a, b}), Error);
  const Monotone one[] = {Monotone::NonDecreasing};
  CHECK_THROWS_AS(zadeh_endpoint_map(product2, one, std::vector<AlphaFuzzy>{a, a}), Error);
}

TEST_CASE("zadeh_endpoint_map agrees with the grid sup-min oracle") {
  Rng rng(2024);
  for (int iter = 0; iter < 8; ++iter) {
    // random monotone polynomial with nonnegative coefficients on [0,1]^2
    const double c1 = rng.uniform(), c2 = rng.uniform(), c12 = rng.uniform(),
                 c11 = rng.uniform();
    auto f = [=](std::span<const double> x) {
      return c1 * x[0] + c2 * x[1] + c12 * x[0] * x[1] + c11 * x[0] * x[0];
    };
    auto random_shape = [&]() -> ShapeSpec {
      double v[4] = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
      std::sort(v, v + 4);
      switch (rng.index(3)) {
        case 0: return Triangular{v[0], v[1], v[3]};
        case 1: return Trapezoidal{v[0], v[1], v[2], v[3]};
        default: return IntervalShape{v[1], v[2]};
      }
    };
    const std::vector<AlphaFuzzy> args{discretize(random_shape(), 10),
                                       discretize(random_shape(), 10)};
    const AlphaFuzzy lifted = zadeh_endpoint_map(f, kInc2, args);
    const auto oracle = testutil::grid_supmin_cuts(f, args, 200);
    for (int k = 0; k < 10; ++k) {
      CHECK(lifted.lo(k) == doctest::Approx(oracle.lo[static_cast<std::size_t>(k)]).epsilon(1e-9));
      CHECK(lifted.hi(k) == doctest::Approx(oracle.hi[static_cast<std::size_t>(k)]).epsilon(1e-9));
    }
    check_nested(lifted);
  }
}

TEST_CASE("zadeh_endpoint_map: mixed directions against the oracle") {
  Rng rng(99);
  // f(x, y) = x * (1 - y) is nondecreasing in x, nonincreasing in y
  auto f = [](std::span<const double> x) { return x[0] * (1.0 - x[1]); };
  const Monotone dirs[] = {Monotone::NonDecreasing, Monotone::NonIncreasing};
  for (int iter = 0; iter < 5; ++iter) {
    const double m1 = rng.uniform(0.2, 0.8), m2 = rng.uniform(0.2, 0.8);
    const std::vector<AlphaFuzzy> args{
        discretize(Triangular{m1 * 0.5, m1, std::min(1.0, m1 * 1.5)}, 10),
        discretize(Triangular{m2 * 0.5, m2, std::min(1.0, m2 * 1.5)}, 10)};
    const AlphaFuzzy lifted = zadeh_endpoint_map(f, dirs, args);
    const auto oracle = testutil::grid_supmin_cuts(f, args, 150);
    for (int k = 0; k < 10; ++k) {
      CHECK(lifted.lo(k) == doctest::Approx(oracle.lo[static_cast<std::size_t>(k)]).epsilon(1e-9));
      CHECK(lifted.hi(k) == doctest::Approx(oracle.hi[static_cast<std::size_t>(k)]).epsilon(1e-9));
    }
  }
}

TEST_CASE("discrete_zadeh: the worked OR-gate value") {
  // p_OR(b,c) = 1 - (1 - p_b)(1 - p_c) on crisp 0.1 and 0.4 is {0.46 -> 1}
  const std::vector<DiscreteFuzzy> args{DiscreteFuzzy::singleton(0.1),
                                        DiscreteFuzzy::singleton(0.4)};
  const DiscreteFuzzy out = discrete_zadeh(
      [](std::span<const double> x) { return 1.0 - (1.0 - x[0]) * (1.0 - x[1]); }, args);
  REQUIRE(out.size() == 1);
  CHECK(out.support().begin()->first == doctest::Approx(0.46).epsilon(1e-12));
  CHECK(out.support().begin()->second == 1.0);
}

TEST_CASE("discrete_zadeh: two-point times singleton from the worked example") {
  const std::vector<DiscreteFuzzy> args{
      DiscreteFuzzy::from_support({{0.5, 0.7}, {0.8, 1.0}}),
      DiscreteFuzzy::singleton(0.46)};
  const DiscreteFuzzy out = discrete_zadeh(product2, args);
  REQUIRE(out.size() == 2);
  auto it = out.support().begin();
  CHECK(it->first == doctest::Approx(0.23).epsilon(1e-12));
  CHECK(it->second == 0.7);
  ++it;
  CHECK(it->first == doctest::Approx(0.368).epsilon(1e-12));
  CHECK(it->second == 1.0);
}

TEST_CASE("discrete_zadeh: identity") {
  const std::vector<DiscreteFuzzy> args{DiscreteFuzzy::from_support({{0.3, 0.5}})};
  const DiscreteFuzzy out =
      discrete_zadeh([](std::span<const double> x) { return x[0]; }, args);
  CHECK(out == args[0]);
}

TEST_CASE("discrete_zadeh: exhaustive check against a hand enumeration") {
  Rng rng(5);
  for (int iter = 0; iter < 20; ++iter) {
    auto random_support = [&]() {
      std::map<double, double> s;
      const std::size_t size = 1 + rng.index(4);
      while (s.size() < size) s[rng.uniform()] = 0.05 + 0.95 * rng.uniform();
      return DiscreteFuzzy::from_support(std::move(s));
    };
    const std::vector<DiscreteFuzzy> args{random_support(), random_support()};
    auto f = [](std::span<const double> x) { return x[0] + 2.0 * x[1]; };
    const DiscreteFuzzy out = discrete_zadeh(f, args);

    std::map<double, double> expected;
    for (const auto& [xa, da] : args[0].support()) {
      for (const auto& [xb, db] : args[1].support()) {
        const double y = xa + 2.0 * xb;
        const double d = std::min(da, db);
        auto [it, inserted] = expected.emplace(y, d);
        if (!inserted) it->second = std::max(it->second, d);
      }
    }
    CHECK(out.support() == expected);
  }
}

TEST_CASE("AlphaFuzzy invariants are enforced") {
  CHECK_THROWS_AS(AlphaFuzzy::from_cuts({0.5, 0.4}, {0.8, 0.9}), Error);  // not nested
  CHECK_THROWS_AS(AlphaFuzzy::from_cuts({0.5}, {0.4}), Error);            // inverted
  CHECK_THROWS_AS(AlphaFuzzy::from_cuts({}, {}), Error);                  // empty
  const AlphaFuzzy c = AlphaFuzzy::crisp(0.3, 4);
  CHECK(c.is_crisp());
  CHECK(c.in_unit_interval());
}
