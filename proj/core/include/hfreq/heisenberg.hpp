#pragma once

#include "hfreq/numerics.hpp"

#include <complex>
#include <map>
#include <vector>

namespace hfreq {

/// Point of T*R^d, split as (y, eta).
struct PhasePoint {
  std::vector<double> y;
  std::vector<double> eta;

  PhasePoint() = default;
  PhasePoint(std::vector<double> y_, std::vector<double> eta_);
  static PhasePoint zero(int d);
  int dim() const { return static_cast<int>(y.size()); }
  double norm2() const; // |Y|^2

  PhasePoint operator+(const PhasePoint& o) const;
  PhasePoint operator-() const;
};

/// sigma(Y, Y') = <eta, y'> - <eta', y>.
double symplectic(const PhasePoint& a, const PhasePoint& b);

struct HeisenbergPoint {
  PhasePoint Y;
  double s = 0;

  static HeisenbergPoint identity(int d);
  int dim() const { return Y.dim(); }
};

/// (Y + Y', s + s' + 2 sigma(Y, Y')).
HeisenbergPoint group_mul(const HeisenbergPoint& w, const HeisenbergPoint& w2);
HeisenbergPoint group_inverse(const HeisenbergPoint& w);

/// Finite sum of monomials in (y, eta, s) times the anisotropic Gaussian
/// e^{-a|Y|^2 - b s^2}. Closed under all coordinate multiplications and
/// derivatives, hence under every vector field used here. Terms with equal
/// exponents are merged and exact zeros dropped.
class GaussHermiteFunction {
public:
  // exponent layout: alpha[0..d-1] -> y, alpha[d..2d-1] -> eta, alpha[2d] -> s
  using Exponent = std::vector<int>;

  GaussHermiteFunction(int d, double a, double b);
  static GaussHermiteFunction gaussian(int d, double a, double b);

  int dim() const { return d_; }
  double width_y() const { return a_; }
  double width_s() const { return b_; }
  const std::map<Exponent, complexd>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int max_degree() const;

  void add_term(complexd c, Exponent alpha);

  complexd eval(const HeisenbergPoint& w) const;

  GaussHermiteFunction multiply_coord(int coord) const;
  GaussHermiteFunction differentiate(int coord) const;
  GaussHermiteFunction scaled(complexd c) const;
  GaussHermiteFunction operator+(const GaussHermiteFunction& o) const;
  GaussHermiteFunction operator-(const GaussHermiteFunction& o) const;

  /// Exact Gaussian-moment integral of f over H^d.
  complexd integral() const;
  /// Exact L^2 inner product (f | g) = int f conj(g); widths may differ.
  complexd l2_inner(const GaussHermiteFunction& g) const;
  double l2_norm() const;
  /// int |f| by tensor Gauss-Hermite (|poly| breaks closed forms).
  double l1_norm(int nodes_per_axis = 48) const;

private:
  int d_;
  double a_, b_;
  std::map<Exponent, complexd> terms_;
};

enum class FieldKind { X, Xi, Xtilde, Xitilde, S, T };

/// Exact symbolic application of the named vector field on the closed family.
/// X_j = d_{y_j} + 2 eta_j d_s, Xi_j = d_{eta_j} - 2 y_j d_s, and the
/// right-invariant / rotation variants.
GaussHermiteFunction vector_field_apply(FieldKind field, int axis,
                                        const GaussHermiteFunction& f);

/// Delta_H f = sum_j (X_j^2 + Xi_j^2) f, exact.
GaussHermiteFunction sublaplacian(const GaussHermiteFunction& f);

struct ConvolveOptions {
  int nodes_per_axis = 48;
  bool check_doubling = false; // re-run at 2x nodes and report the shift
  double tolerance = 1e-8;     // flags non-convergence when exceeded 10x
};

struct ConvolveResult {
  complexd value;
  double doubling_shift = 0; // |value_2N - value_N| when check_doubling
  bool converged = true;
};

/// f * g (w) = int f(w v^{-1}) g(v) dv by tensor quadrature over v; d = 1 only.
ConvolveResult group_convolve(const GaussHermiteFunction& f, const GaussHermiteFunction& g,
                              const HeisenbergPoint& w, const ConvolveOptions& opts = {});

/// Same integral in the second form of the convolution definition,
/// int f(v) g(v^{-1} w) dv; used as a consistency check.
ConvolveResult group_convolve_alt(const GaussHermiteFunction& f, const GaussHermiteFunction& g,
                                  const HeisenbergPoint& w, const ConvolveOptions& opts = {});

/// Schwartz seminorm sup_{|alpha| <= N} || (1+|Y|^2+s^2)^{N/2} d^alpha f ||_inf,
/// estimated by dense sampling plus local refinement on a box chosen from the
/// Gaussian widths.
double seminorm(const GaussHermiteFunction& f, int N);

} // namespace hfreq
