#include "hfreq/frequency.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hfreq;

namespace {

CompletedFrequencyPoint random_point(oracle::Rng& rng) {
  if (rng.uniform_int(0, 1)) {
    return CompletedFrequencyPoint(FrequencyPoint(
        MultiIndex({rng.uniform_int(0, 12)}), MultiIndex({rng.uniform_int(0, 12)}),
        rng.uniform(-3, 3) >= 0 ? rng.uniform(0.05, 3) : -rng.uniform(0.05, 3)));
  }
  const int sgn = rng.uniform_int(0, 1) ? 1 : -1;
  return CompletedFrequencyPoint(
      BoundaryPoint({sgn * rng.uniform(0, 4)}, {rng.uniform_int(-5, 5)}));
}

} // namespace

TEST_SUITE_BEGIN("frequency");

TEST_CASE("distance formulas") {
  const CompletedFrequencyPoint p(
      FrequencyPoint(MultiIndex({1}), MultiIndex({1}), 0.5));
  CHECK(distance(p, p) == 0.0);

  // interior vs boundary: |0.5*2 - 1| + |1-1-0| + 0.5 = 0.5
  const CompletedFrequencyPoint b(BoundaryPoint({1.0}, {0}));
  CHECK(distance(p, b) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(distance(b, p) == doctest::Approx(0.5).epsilon(1e-15));

  const CompletedFrequencyPoint b2(BoundaryPoint({0.0}, {0}));
  const CompletedFrequencyPoint b3(BoundaryPoint({0.0}, {1}));
  CHECK(distance(b2, b3) == 1.0);
}

TEST_CASE("distance is a metric on 500 random mixed triples") {
  oracle::Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_point(rng), b = random_point(rng), c = random_point(rng);
    const double ab = distance(a, b), ba = distance(b, a);
    CHECK(ab == ba);
    CHECK(ab >= 0);
    CHECK(ab <= distance(a, c) + distance(c, b) + 1e-12);
  }
}

TEST_CASE("boundary point sign constraints") {
  CHECK_THROWS_AS(BoundaryPoint({1.0, -1.0}, {0, 0}), std::invalid_argument);
  CHECK(BoundaryPoint({0.0}, {3}).sign() == 0);
  CHECK(BoundaryPoint({2.0}, {0}).sign() == 1);
  CHECK(BoundaryPoint({-2.0, 0.0}, {0, 1}).sign() == -1);
}

TEST_CASE("classify_limit finds the interior regime") {
  std::vector<FrequencyPoint> seq;
  for (int p = 0; p < 12; ++p)
    seq.emplace_back(MultiIndex({3}), MultiIndex({5}), 0.75);
  const auto r = classify_limit(seq, 1e-9);
  REQUIRE(r.limit.has_value());
  REQUIRE(r.limit->interior());
  CHECK(r.limit->as_interior().n[0] == 3);
  CHECK(r.limit->as_interior().lambda == 0.75);
}

TEST_CASE("classify_limit finds the boundary regime") {
  // n_p = p, m_p = p + 2, lambda_p = 1/(2p): lambda (n+m) -> 1, k = 2
  std::vector<FrequencyPoint> seq;
  for (int p = 4; p <= 4096; p *= 2)
    seq.emplace_back(MultiIndex({p}), MultiIndex({p + 2}), 1.0 / (2.0 * p));
  const auto r = classify_limit(seq, 1e-2);
  REQUIRE(r.limit.has_value());
  REQUIRE(!r.limit->interior());
  CHECK(r.limit->as_boundary().xdot[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.limit->as_boundary().k[0] == 2);
}

TEST_CASE("classify_limit reports non-Cauchy sequences") {
  std::vector<FrequencyPoint> seq;
  for (int p = 1; p <= 16; ++p)
    seq.emplace_back(MultiIndex({p}), MultiIndex({p}), (p % 2 == 0) ? 1.0 : -1.0);
  const auto r = classify_limit(seq, 1e-6);
  CHECK(!r.limit.has_value());
  CHECK(r.violating_first >= 0);
  CHECK_THROWS_AS(classify_limit({}, 1e-6), std::invalid_argument);
}

TEST_CASE("grid measure weight matches the closed form") {
  for (int d : {1, 2}) {
    const auto g = FrequencyGrid::make(d, 4, 1e-3, 8.0, 8, 12);
    const double want = 2.0 *
                        (std::pow(8.0, d + 1) - std::pow(1e-3, d + 1)) / (d + 1);
    CHECK(std::abs(g.measure_weight_total() - want) <= 1e-10 * want);
    for (double lam : g.lambda_nodes) CHECK(lam != 0.0);
  }
}

TEST_CASE("rank round trip") {
  const auto g = FrequencyGrid::make(2, 5, 1e-2, 2.0, 3, 4);
  for (int r = 0; r < g.states_per_side(); ++r) CHECK(g.rank(g.unrank(r)) == r);
}

TEST_CASE("integrate_frequency") {
  const auto g = FrequencyGrid::make(1, 3, 1e-3, 8.0, 8, 12);
  CHECK(integrate_frequency(g, [](const FrequencyPoint&) { return complexd(0); }) ==
        complexd(0));

  // indicator of n = m = 0, lambda in [1, 2]: int_1^2 lambda dlambda = 3/2;
  // the grid interval is [1, 2] so the rule never straddles the jump
  const auto g12 = FrequencyGrid::make(1, 3, 1.0, 2.0, 4, 12);
  const complexd v = integrate_frequency(g12, [](const FrequencyPoint& w) {
    const bool in = w.n.order() == 0 && w.m.order() == 0 && w.lambda >= 1.0 &&
                    w.lambda <= 2.0;
    return complexd(in ? 1.0 : 0.0);
  });
  CHECK(std::abs(v - 1.5) <= 1e-10);

  // linear and monotone in theta
  const complexd one = integrate_frequency(g, [](const FrequencyPoint&) {
    return complexd(1.0);
  });
  const complexd two = integrate_frequency(g, [](const FrequencyPoint&) {
    return complexd(2.0);
  });
  CHECK(std::abs(two - 2.0 * one) < 1e-12 * std::abs(one));
  CHECK(one.real() > 0);
}

TEST_CASE("bounded sets meet finitely many cells per lambda node") {
  const auto g = FrequencyGrid::make(1, 64, 1e-3, 8.0, 8, 12);
  const CompletedFrequencyPoint origin(BoundaryPoint({0.0}, {0}));
  const double R = 10.0; // larger than the lambda extent, so every node counts
  for (int l = 0; l < g.lambda_count(); l += 17) {
    const double lam = g.lambda_nodes[l];
    int count = 0;
    long long expected_cap =
        (long long)((R / std::abs(lam) + 2) * (2 * R + 2)); // |lam|(n+m) <= R, |m-n| <= R
    for (int n = 0; n <= g.n_max; ++n)
      for (int m = 0; m <= g.n_max; ++m) {
        const CompletedFrequencyPoint p(
            FrequencyPoint(MultiIndex({n}), MultiIndex({m}), lam));
        if (distance(p, origin) <= R) ++count;
      }
    CHECK(count >= 1);
    CHECK((long long)count <= expected_cap);
  }
}

TEST_CASE("boundary measure") {
  const auto rule = BoundaryRule::make(40.0, 12, 16);
  CHECK(boundary_measure([](const BoundaryPoint&) { return complexd(0); }, 3, rule) ==
        complexd(0));

  // delta_{k,0} e^{-x} on the positive orthant only: 2^{-1} int_0^inf = 1/2
  auto pos_only = [](const BoundaryPoint& p) {
    if (p.k[0] != 0 || p.xdot[0] < 0) return complexd(0);
    return complexd(std::exp(-p.xdot[0]));
  };
  CHECK(std::abs(boundary_measure(pos_only, 3, rule) - 0.5) < 1e-10);

  // both orthants double it
  auto both = [](const BoundaryPoint& p) {
    return complexd(p.k[0] == 0 ? std::exp(-std::abs(p.xdot[0])) : 0.0);
  };
  CHECK(std::abs(boundary_measure(both, 3, rule) - 1.0) < 1e-10);
}

TEST_SUITE_END();
