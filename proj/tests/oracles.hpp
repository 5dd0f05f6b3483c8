#pragma once

// Test-only oracles, independent of the library paths they check.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

// Bessel J_k by its power series; fine for |x| <= ~25 at desk scale.
inline double bessel_J(int k, double x) {
  if (k < 0) return (k % 2 == 0 ? 1.0 : -1.0) * bessel_J(-k, x);
  const double half = 0.5 * x;
  double term = 1.0;
  for (int j = 1; j <= k; ++j) term *= half / j;
  double sum = term;
  const double h2 = half * half;
  for (int j = 1; j < 80; ++j) {
    term *= -h2 / (double(j) * (j + k));
    sum += term;
    if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) && j > 6) break;
  }
  return sum;
}

// deterministic uniforms (bit-mapped, engine standardized)
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (double(eng() >> 11) * 0x1.0p-53);
  }
  int uniform_int(int lo, int hi) { return lo + int(eng() % uint64_t(hi - lo + 1)); }
};

// crude trapezoid on a box, for small independent cross-checks only
template <typename F>
double trapezoid(F&& f, double a, double b, int n) {
  double acc = 0.5 * (f(a) + f(b));
  const double h = (b - a) / n;
  for (int i = 1; i < n; ++i) acc += f(a + i * h);
  return acc * h;
}

} // namespace oracle
