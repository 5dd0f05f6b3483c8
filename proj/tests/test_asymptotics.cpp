#include "hfreq/asymptotics.hpp"

#include "hfreq/transform.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hfreq;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> snapped_lambdas(double xdot, int count, double n_lo, double n_hi) {
  // integer n keeps 2 lambda n exactly on xdot and the rate fit clean
  std::vector<double> out;
  long long prev = -1;
  for (int j = 0; j < count; ++j) {
    const long long n = std::llround(n_lo * std::pow(n_hi / n_lo, double(j) / (count - 1)));
    if (n == prev) continue;
    prev = n;
    out.push_back(xdot / (2.0 * double(n)));
  }
  return out;
}

} // namespace

TEST_SUITE_BEGIN("asymptotics");

TEST_CASE("W converges to K at the square-root rate") {
  const auto lambdas = snapped_lambdas(1.0, 12, 5, 500);
  const auto fit = w_to_k_limit(1.0, 1, PhasePoint({0.5}, {0.5}), lambdas);
  REQUIRE(!fit.all_zero);
  CHECK(fit.slope >= 0.45);
  CHECK(fit.r2 >= 0.98);
  // errors decrease along the sequence
  CHECK(fit.errors.front() > fit.errors.back());
}

TEST_CASE("trivial configuration is exact") {
  const auto fit = w_to_k_limit(1.0, 0, PhasePoint::zero(1), {0.05, 0.01, 0.002});
  // both sides are delta-normalized; every error vanishes
  for (double e : fit.errors) CHECK(e <= 1e-12);
}

TEST_CASE("term-level limits of the ladder pairings") {
  const auto lambdas = snapped_lambdas(1.0, 10, 5, 320);
  for (const auto& [l1, l2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{3, 3}}) {
    const auto fit = h_term_limit(l1, l2, 1.0, 1, lambdas);
    if (fit.all_zero) continue;
    CHECK(fit.slope >= 0.45);
    CHECK(fit.r2 >= 0.9);
  }
}

TEST_CASE("ladder expansion bound at the square-root rate") {
  const auto lambdas = snapped_lambdas(1.0, 10, 8, 600);
  for (int sign : {1, -1})
    for (int ell : {1, 2, 3}) {
      const auto fit = ladder_expansion_check(ell, sign, 1.0, lambdas);
      REQUIRE(!fit.all_zero);
      CHECK(fit.slope >= 0.45);
      CHECK(fit.r2 >= 0.98);
    }
}

TEST_CASE("cube partition of the orthant") {
  oracle::Rng rng(40);
  std::vector<double> xs;
  for (int i = 0; i < 50; ++i) xs.push_back(rng.uniform(0.01, 20.0));
  CHECK(cube_partition_check(0.37, xs) == 0.0);
  CHECK(cube_partition_check(-0.09, xs) == 0.0);
}

TEST_CASE("radial pairing diagonal matches the shift-recursion route") {
  // |Y|^2 e^{-a |Y|^2} has pairing P_{20} + P_{02}; both routes must agree
  auto g = HorizontalFunction::gaussian(1, 1.0);
  HorizontalFunction g2 =
      g.multiply_coord(0).multiply_coord(0) + g.multiply_coord(1).multiply_coord(1);
  const double lam = 0.35;
  const int n_count = 8;
  const auto diag = radial_pairing_diagonal(g2, lam, n_count);
  const auto P20 = wigner_pairing_matrix(2, 0, 1.0, lam, n_count);
  const auto P02 = wigner_pairing_matrix(0, 2, 1.0, lam, n_count);
  for (int n = 0; n < n_count; ++n) {
    const complexd want = P20[n * (n_count + 1) + n] + P02[n * (n_count + 1) + n];
    CHECK(std::abs(diag[n] - want) <= 1e-11);
  }
  CHECK_THROWS_AS(radial_pairing_diagonal(g.multiply_coord(0), 0.3, 4),
                  std::invalid_argument);
}

TEST_CASE("concentration limit reaches the weighted boundary measure") {
  BoundaryProfile prof;
  prof.psi = [](double x, int k) { return k == 0 ? std::exp(-x) : 0.0; };
  prof.x_support = 26.0;
  prof.k_band = 0;
  std::vector<double> eps;
  for (int j = 0; j < 8; ++j) eps.push_back(1e-1 * std::pow(0.5, j));

  const auto seq = concentration_limit(prof, Mollifier{}, eps);
  // the weighted limit for the even unit-mass mollifier is half the
  // boundary measure of theta: (1/2) * 1 here
  CHECK(seq.target == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(seq.deviation.back() <= 5e-3);
  for (size_t i = 3; i < seq.deviation.size(); ++i)
    CHECK(seq.deviation[i] <= seq.deviation[i - 1] * 1.02);

  // zero profile: everything vanishes
  BoundaryProfile zero;
  zero.psi = [](double, int) { return 0.0; };
  zero.x_support = 5.0;
  const auto zs = concentration_limit(zero, Mollifier{}, {1e-2, 1e-3});
  CHECK(zs.target == 0.0);
  for (double v : zs.value) CHECK(v == 0.0);
}

TEST_CASE("concentration with the smooth mollifier") {
  BoundaryProfile prof;
  prof.psi = [](double x, int k) { return k == 0 ? std::exp(-x) : 0.0; };
  prof.x_support = 26.0;
  std::vector<double> eps;
  for (int j = 0; j < 6; ++j) eps.push_back(1e-1 * std::pow(0.5, j));
  Mollifier smooth;
  smooth.kind = Mollifier::Kind::gaussian;
  const auto seq = concentration_limit(prof, smooth, eps);
  CHECK(seq.deviation.back() <= 1e-2);
  CHECK(seq.deviation.back() < seq.deviation.front());
}

TEST_CASE("horizontal limit pairs F_H(g x chi(eps .)) against pi <mu, G_H g theta>") {
  const auto g = HorizontalFunction::gaussian(1, 1.0);
  BoundaryProfile bump;
  bump.psi = [](double x, int k) {
    if (k != 0) return 0.0;
    const double t = (x - 1.0) / 0.6;
    return std::abs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
  };
  bump.x_support = 1.7;
  std::vector<double> eps;
  for (int j = 0; j < 8; ++j) eps.push_back(1e-1 * std::pow(0.5, j));
  const auto seq = horizontal_limit(g, 1.0, bump, eps);
  CHECK(seq.deviation.back() <= 1e-2);
  for (size_t i = 3; i < seq.deviation.size(); ++i)
    CHECK(seq.deviation[i] <= seq.deviation[i - 1] * 1.05);

  // sanity of the target: pi * 2 * (1/2) int_0^inf pi e^{-x} psi(x) dx
  const auto rule = make_rule(RuleKind::gauss_legendre, 200, std::make_pair(0.4, 1.6));
  double s0 = 0;
  for (int i = 0; i < rule.size(); ++i)
    s0 += rule.weights[i] * kPi * std::exp(-rule.nodes[i]) * bump.psi(rule.nodes[i], 0);
  CHECK(seq.target == doctest::Approx(kPi * s0).epsilon(1e-6));
}

TEST_CASE("profiles away from the boundary stratum fade out") {
  const auto g = HorizontalFunction::gaussian(1, 1.0);
  BoundaryProfile prof;
  prof.psi = [](double x, int k) { return k == 0 ? std::exp(-x) : 0.0; };
  prof.x_support = 26.0;
  prof.lambda_cut = [](double lam) {
    const double t = (std::abs(lam) - 1.0) / 0.2; // smooth step up at |lam| ~ 1
    return t <= 0 ? 0.0 : (t >= 1 ? 1.0 : t * t * (3 - 2 * t));
  };
  const auto seq = horizontal_limit(g, 1.0, prof, {1e-1, 3e-2, 1e-2, 3e-3});
  CHECK(seq.target == 0.0);
  for (size_t i = 1; i < seq.value.size(); ++i)
    CHECK(std::abs(seq.value[i]) <= std::abs(seq.value[i - 1]) + 1e-15);
  CHECK(std::abs(seq.value.back()) <= 1e-8);

  // zero function result
  HorizontalFunction zero(1, 1.0);
  const auto zs = horizontal_limit(zero, 1.0, prof, {1e-2});
  CHECK(zs.value[0] == 0.0);
}

TEST_SUITE_END();
