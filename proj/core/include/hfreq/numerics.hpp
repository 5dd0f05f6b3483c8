#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace hfreq {

using complexd = std::complex<double>;

enum class RuleKind {
  gauss_hermite,      // weight e^{-x^2} on (-inf, inf), implicit
  gauss_legendre,     // plain dx on a finite interval
  periodic_trapezoid, // equispaced on [-pi, pi)
};

/// One-dimensional quadrature rule. Nodes are strictly increasing and all
/// weights are positive for the three kinds built by make_rule().
struct QuadratureRule1D {
  RuleKind kind = RuleKind::gauss_legendre;
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Build a quadrature rule with n nodes. `interval` is required for
/// gauss_legendre and must not be given for the other kinds.
/// Gauss nodes come from Newton iteration on the orthonormal recurrence and
/// are reproducible run to run.
QuadratureRule1D make_rule(RuleKind kind, int n,
                           std::optional<std::pair<double, double>> interval = std::nullopt);

/// Sum_i w_i f(x_i). For gauss_hermite the weight e^{-x^2} is implicit and
/// f must not include it. Throws on a non-finite integrand value.
complexd integrate_1d(const QuadratureRule1D& rule,
                      const std::function<complexd(double)>& f);
double integrate_1d_real(const QuadratureRule1D& rule,
                         const std::function<double(double)>& f);

struct SeriesControl {
  int max_terms = 100000;
  double abs_tail_tol = 1e-14;
  int consecutive_small = 3;
};

struct SeriesResult {
  complexd value;
  int terms_used = 0;
  bool converged = false; // stop criterion fired before max_terms
};

/// Partial sum of terms(0), terms(1), ... stopped after `consecutive_small`
/// successive terms of modulus below abs_tail_tol, or at max_terms.
/// Accumulation is in fixed index order. Throws on a non-finite term.
SeriesResult sum_series(const std::function<complexd(int)>& terms,
                        const SeriesControl& ctrl);

/// int x^k e^{-c x^2} e^{-i xi x} dx in closed form (derivatives of the
/// Gaussian Fourier transform).
complexd poly_gauss_fourier(int k, double c, double xi);

/// Least-squares line fit of y against x; used for log-log rate fits.
struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace hfreq
