#include "hfreq/horizontal.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hfreq;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE_BEGIN("horizontal");

TEST_CASE("value at the origin of the boundary stratum is the plain integral") {
  const auto g = HorizontalFunction::gaussian(1, 1.0);
  CHECK(std::abs(gh_transform(g, {0.0}, {0}) - kPi) < 1e-12);
  for (int k : {1, -2, 5}) CHECK(std::abs(gh_transform(g, {0.0}, {k})) < 1e-12);
}

TEST_CASE("Gaussian closed form pi e^{-xdot}") {
  const auto g = HorizontalFunction::gaussian(1, 1.0);
  for (double x : {0.25, 1.0, 2.0, 5.0, 12.0}) {
    CHECK(std::abs(gh_transform(g, {x}, {0}) - kPi * std::exp(-x)) <= 1e-10);
    // negative orthant mirrors through conjugation; real here
    CHECK(std::abs(gh_transform(g, {-x}, {0}) - kPi * std::exp(-x)) <= 1e-10);
  }
}

TEST_CASE("fast route matches the direct tensor quadrature") {
  auto g = HorizontalFunction::gaussian(1, 0.9);
  g.add_term(complexd(0.4, -0.2), {1, 2}); // y eta^2 term
  for (double x : {0.0, 0.7, -1.8})
    for (int k : {0, 1, -3}) {
      const complexd fast = gh_transform(g, {x}, {k});
      const complexd direct = gh_transform_direct(g, {x}, {k});
      CHECK(std::abs(fast - direct) <= 1e-8);
    }
}

TEST_CASE("radial functions live on k = 0") {
  auto g = HorizontalFunction::gaussian(1, 1.0);
  // |Y|^2 e^{-|Y|^2} is radial
  auto g2 = g.multiply_coord(0).multiply_coord(0) + g.multiply_coord(1).multiply_coord(1);
  CHECK(g2.is_radial());
  for (int k : {1, 2, -1, 4})
    CHECK(std::abs(gh_transform(g2, {1.3}, {k})) <= 1e-10);
  auto skew = g.multiply_coord(0);
  CHECK(!skew.is_radial());
}

TEST_CASE("transform is bounded by the L1 norm") {
  auto g = HorizontalFunction::gaussian(1, 1.0);
  g.add_term(0.3, {2, 1});
  const double l1 = g.l1_norm();
  oracle::Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    const double x = (rng.uniform_int(0, 1) ? 1 : -1) * rng.uniform(0, 6);
    const int k = rng.uniform_int(-6, 6);
    CHECK(std::abs(gh_transform(g, {x}, {k})) <= l1 * (1 + 1e-9));
  }
}

TEST_CASE("continuity across the origin of the boundary stratum") {
  auto g = HorizontalFunction::gaussian(1, 1.0);
  g.add_term(0.5, {1, 1});
  for (int k : {0, 1}) {
    const complexd at0 = gh_transform(g, {0.0}, {k});
    const complexd eps_pos = gh_transform(g, {1e-7}, {k});
    const complexd eps_neg = gh_transform(g, {-1e-7}, {k});
    CHECK(std::abs(eps_pos - at0) < 1e-3);
    CHECK(std::abs(eps_neg - at0) < 1e-3);
  }
}

TEST_CASE("abelian convolution within the family") {
  const auto g = HorizontalFunction::gaussian(1, 1.0);
  const auto c = g.convolve(g); // (pi/2) e^{-|Y|^2/2}
  CHECK(c.width() == doctest::Approx(0.5).epsilon(1e-15));
  const PhasePoint Y({0.6}, {-0.4});
  CHECK(std::abs(c.eval(Y) - kPi / 2 * std::exp(-0.5 * Y.norm2())) < 1e-13);

  // polynomial case against a numeric convolution oracle
  auto p = HorizontalFunction::gaussian(1, 0.8);
  p.add_term(1.0, {1, 0});
  const auto pc = p.convolve(g);
  const auto rule = make_rule(RuleKind::gauss_hermite, 64);
  const double sa = std::sqrt(0.8);
  complexd want = 0;
  for (int iy = 0; iy < rule.size(); ++iy)
    for (int ie = 0; ie < rule.size(); ++ie) {
      const double yp = rule.nodes[iy] / sa, ep = rule.nodes[ie] / sa;
      const double wq = rule.weights[iy] * rule.weights[ie] / 0.8;
      const double peel = std::exp(0.8 * (yp * yp + ep * ep));
      want += wq * peel * p.eval(PhasePoint({yp}, {ep})) *
              g.eval(PhasePoint({Y.y[0] - yp}, {Y.eta[0] - ep}));
    }
  CHECK(std::abs(pc.eval(Y) - want) <= 1e-10);
}

TEST_CASE("convolution identity on the boundary stratum") {
  const auto g = HorizontalFunction::gaussian(1, 1.0);
  const auto rep = gh_convolve_check(g, g, {1.0}, {0}, 15);
  CHECK(rep.deviation <= 1e-7);

  // xdot = 0 reduces to the product of the integrals
  const auto rep0 = gh_convolve_check(g, g, {0.0}, {0}, 5);
  CHECK(rep0.deviation <= 1e-10);

  HorizontalFunction zero(1, 1.0);
  const auto repz = gh_convolve_check(zero, g, {1.0}, {0}, 5);
  CHECK(repz.deviation == 0.0);

  // non-radial pair
  auto p = HorizontalFunction::gaussian(1, 1.0);
  p.add_term(0.5, {1, 0});
  const auto repp = gh_convolve_check(p, g, {1.0}, {1}, 15);
  CHECK(repp.deviation <= 1e-7);
}

TEST_CASE("inversion round trips") {
  const auto rule = BoundaryRule::make(30.0, 10, 16);
  const int k_max = 12;

  for (int variant = 0; variant < 2; ++variant) {
    HorizontalFunction g = HorizontalFunction::gaussian(1, 1.0);
    if (variant == 1) {
      HorizontalFunction t = g.multiply_coord(0); // y e^{-|Y|^2}
      g = t;
    }
    // table over the boundary grid, reused by the integrand
    auto gh = [&](const BoundaryPoint& p) { return gh_transform(g, p.xdot, p.k); };
    oracle::Rng rng(100 + variant);
    double worst = 0;
    for (int i = 0; i < 6; ++i) {
      const PhasePoint Y({rng.uniform(-1.2, 1.2)}, {rng.uniform(-1.2, 1.2)});
      const complexd recon = gh_inverse(gh, Y, k_max, rule);
      worst = std::max(worst, std::abs(recon - g.eval(Y)));
    }
    CHECK(worst <= 1e-3);
  }

  // zero data inverts to zero
  auto zero = [](const BoundaryPoint&) { return complexd(0); };
  CHECK(gh_inverse(zero, PhasePoint({0.3}, {0.1}), 4, BoundaryRule::make(10, 4, 8)) ==
        complexd(0));
}

TEST_CASE("plancherel identity") {
  const auto g = HorizontalFunction::gaussian(1, 1.0);
  const auto rule = BoundaryRule::make(30.0, 10, 16);
  const auto pc = gh_plancherel_check(g, 12, rule);
  CHECK(pc.lhs == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(std::abs(pc.ratio - 1.0) <= 1e-3);

  // quadratic amplitude scaling is exact
  const auto g2 = g.scaled(2.0);
  const auto pc2 = gh_plancherel_check(g2, 12, rule);
  CHECK(pc2.lhs == doctest::Approx(4.0 * pc.lhs).epsilon(1e-13));
  CHECK(pc2.rhs == doctest::Approx(4.0 * pc.rhs).epsilon(1e-12));
}

TEST_CASE("decay transfer identities") {
  const auto g = HorizontalFunction::gaussian(1, 1.0);
  const auto rep = gh_decay_check(g, 1);
  CHECK(rep.laplace_transfer_dev <= 1e-6);
  CHECK(std::isfinite(rep.fitted_constant));

  const auto rep2 = gh_decay_check(g, 2);
  CHECK(std::isfinite(rep2.fitted_constant));
  CHECK(rep2.laplace_transfer_dev <= 1e-6);
}

TEST_CASE("odd symmetry structure of the k = 0 column") {
  // g odd in y: K(xdot,0,.) pairs it into a purely imaginary value
  auto g = HorizontalFunction::gaussian(1, 1.0).multiply_coord(0);
  for (double x : {0.5, 1.5}) {
    const complexd v = gh_transform(g, {x}, {0});
    CHECK(std::abs(v.real()) <= 1e-10);
  }
}

TEST_CASE("input validation") {
  const auto g = HorizontalFunction::gaussian(1, 1.0);
  CHECK_THROWS_AS(gh_transform(g, {1.0, -1.0}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(HorizontalFunction(1, 0.0), std::invalid_argument);
}

TEST_SUITE_END();
