#include "hfreq/kernel.hpp"

#include "hfreq/numerics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hfreq;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE_BEGIN("kernel");

TEST_CASE("degenerate arguments give Kronecker values") {
  for (int k = -4; k <= 4; ++k) {
    CHECK(kernel_K(0.0, k, 0.8, -0.4) == complexd(k == 0 ? 1.0 : 0.0));
    CHECK(std::abs(kernel_K(1.3, k, 0.0, 0.0) - complexd(k == 0 ? 1.0 : 0.0)) < 1e-14);
  }
  CHECK(kernel_Kd({0.0, 0.0}, {0, 0}, PhasePoint({0.4, -0.1}, {0.2, 0.3})) == complexd(1.0));
}

TEST_CASE("k = 0 slice is the Bessel function J0") {
  for (double r : {0.5, 1.0, 2.0}) {
    // points with |Y| = r in several directions
    for (double phi : {0.0, 0.7, 2.1}) {
      const double y = r * std::cos(phi), eta = r * std::sin(phi);
      const complexd v = kernel_K(1.0, 0, y, eta);
      CHECK(std::abs(v - oracle::bessel_J(0, 2.0 * r)) <= 1e-10);
    }
  }
}

TEST_CASE("eta = 0 slices are Bessel functions of integer order") {
  const double xdot = 1.7, y = 0.9;
  for (int k = 0; k <= 5; ++k) {
    const complexd v = kernel_K(xdot, k, y, 0.0);
    const double want =
        (k % 2 == 0 ? 1.0 : -1.0) * oracle::bessel_J(k, 2.0 * std::sqrt(xdot) * y);
    CHECK(std::abs(v - want) <= 1e-10);
  }
}

TEST_CASE("combinatorial coefficients") {
  for (int k = -3; k <= 3; ++k) CHECK(F_coeff(0, 0, k) == (k == 0 ? 1 : 0));
  CHECK(F_coeff(1, 0, 1) == 1);
  CHECK(F_coeff(1, 0, -1) == 1);
  CHECK(F_coeff(1, 0, 0) == 0);
  CHECK(F_coeff(1, 1, 0) == 0);
  CHECK(F_coeff(1, 1, 2) == -1);
  CHECK_THROWS_AS(F_coeff(40, 30, 0), std::invalid_argument);
  CHECK_THROWS_AS(F_coeff(-1, 0, 0), std::invalid_argument);
}

TEST_CASE("integral and series paths agree on the admissible box") {
  oracle::Rng rng(314);
  KernelEvalSpec integral;
  KernelEvalSpec series;
  series.method = KernelMethod::series;
  for (int i = 0; i < 40; ++i) {
    const double xdot = (rng.uniform_int(0, 1) ? 1 : -1) * rng.uniform(0.05, 2.0);
    const int k = rng.uniform_int(-5, 5);
    const double y = rng.uniform(-2, 2), eta = rng.uniform(-2, 2);
    const complexd a = kernel_K(xdot, k, y, eta, integral);
    const complexd b = kernel_K(xdot, k, y, eta, series);
    CHECK(std::abs(a - b) <= 1e-8);
  }
}

TEST_CASE("unit modulus bound and fast k decay") {
  oracle::Rng rng(55);
  for (int i = 0; i < 30; ++i) {
    const double xdot = rng.uniform(-3, 3);
    const int k = rng.uniform_int(-8, 8);
    CHECK(std::abs(kernel_K(xdot, k, rng.uniform(-2, 2), rng.uniform(-2, 2))) <=
          1.0 + 1e-12);
  }
  // (1+|k|)^N |K| stays bounded on a bounded set
  for (int N = 1; N <= 6; ++N) {
    double fitted = 0;
    for (int k = 0; k <= 14; ++k)
      fitted = std::max(fitted, std::pow(1.0 + k, N) *
                                    std::abs(kernel_K(1.5, k, 1.0, 0.7)));
    CHECK(std::isfinite(fitted));
    CHECK(fitted < 1e6);
  }
}

TEST_CASE("tensor kernel") {
  const PhasePoint Y({0.4, -0.6}, {0.9, 0.2});
  const complexd prod = kernel_K(1.2, 1, 0.4, 0.9) * kernel_K(0.8, -2, -0.6, 0.2);
  CHECK(std::abs(kernel_Kd({1.2, 0.8}, {1, -2}, Y) - prod) < 1e-14);
  CHECK_THROWS_AS(kernel_Kd({1.0, -1.0}, {0, 0}, Y), std::invalid_argument);
}

TEST_CASE("periodized kernel") {
  CHECK(kernel_tilde(1.4, 0.8, 0.0, 0.0) == complexd(1.0));

  // Fourier coefficients in z reproduce K
  const double xdot = 1.1, y = 0.5, eta = -0.8;
  const auto rule = make_rule(RuleKind::periodic_trapezoid, 256);
  for (int k = -8; k <= 8; ++k) {
    complexd acc = 0;
    for (int i = 0; i < rule.size(); ++i)
      acc += rule.weights[i] * kernel_tilde(xdot, rule.nodes[i], y, eta) *
             std::polar(1.0, -double(k) * rule.nodes[i]);
    acc /= 2.0 * kPi;
    CHECK(std::abs(acc - kernel_K(xdot, k, y, eta)) <= 1e-10);
  }

  // multiplicative in Y (pure phase)
  const complexd a = kernel_tilde(xdot, 0.3, 0.2, 0.7);
  const complexd b = kernel_tilde(xdot, 0.3, -0.9, 0.15);
  const complexd ab = kernel_tilde(xdot, 0.3, 0.2 - 0.9, 0.7 + 0.15);
  CHECK(std::abs(a * b - ab) < 1e-15);
}

TEST_CASE("identity suite") {
  const auto rep = kernel_identity_suite(1.0, 2, 0.5, 0.3);
  CHECK(rep.max_symmetry_dev() <= 1e-12);
  CHECK(rep.laplace_dev <= 1e-6);
  CHECK(rep.rotation_dev <= 1e-6);
  CHECK(rep.convolution_dev <= 1e-8);
  CHECK(rep.y2_residual <= 1e-5);
}

TEST_CASE("y2 identity over the stated parameter box") {
  for (double xdot : {0.5, 1.0, 2.0, 4.0})
    for (int k = -4; k <= 4; k += 2) {
      const auto rep = kernel_identity_suite(xdot, k, 0.4, -0.25);
      CHECK(rep.y2_residual <= 1e-5);
    }
}

TEST_SUITE_END();
