#pragma once

#include "hfreq/frequency.hpp"
#include "hfreq/heisenberg.hpp"
#include "hfreq/kernel.hpp"

#include <functional>
#include <map>
#include <vector>

namespace hfreq {

/// Gaussian-polynomial function of the horizontal variable Y only:
/// sum of monomials in (y, eta) times e^{-a |Y|^2}. Closed under d_y, d_eta,
/// coordinate multiplication, the rotations T_j, Delta_Y, and the abelian
/// convolution on T*R^d.
class HorizontalFunction {
public:
  using Exponent = std::vector<int>; // [0..d-1] -> y, [d..2d-1] -> eta

  HorizontalFunction(int d, double a);
  static HorizontalFunction gaussian(int d, double a);

  int dim() const { return d_; }
  double width() const { return a_; }
  const std::map<Exponent, complexd>& terms() const { return terms_; }
  void add_term(complexd c, Exponent alpha);
  int max_degree() const;

  complexd eval(const PhasePoint& Y) const;
  HorizontalFunction multiply_coord(int coord) const;
  HorizontalFunction differentiate(int coord) const;
  HorizontalFunction scaled(complexd c) const;
  HorizontalFunction operator+(const HorizontalFunction& o) const;
  HorizontalFunction operator-(const HorizontalFunction& o) const;

  HorizontalFunction laplacian() const;   // Delta_Y
  HorizontalFunction rotation(int axis) const; // T_j = eta_j d_{y_j} - y_j d_{eta_j}
  bool is_radial() const; // symbolic test: all rotations vanish

  complexd integral() const;
  complexd l2_inner(const HorizontalFunction& g) const;
  double l1_norm(int nodes_per_axis = 48) const;

  /// Abelian convolution on T*R^d ~ R^{2d}, exact within the family.
  HorizontalFunction convolve(const HorizontalFunction& g) const;

  /// Extends to the full family with a placeholder s-Gaussian of width b.
  GaussHermiteFunction tensor_with_s_gaussian(double b) const;

private:
  int d_;
  double a_;
  std::map<Exponent, complexd> terms_;
};

struct GhOptions {
  int circle_nodes = 256; // z-quadrature of the kernel circle integral
  int y_nodes = 48;       // only used by the direct cross-check route
};

/// G_H g (xdot, k) = int conj(K_d(xdot,k,Y)) g(Y) dY. The Y integral is the
/// Fourier transform of a polynomial-Gaussian at the circle phase, so it is
/// evaluated in closed form under the z-quadrature. |G_H g| <= ||g||_L1.
complexd gh_transform(const HorizontalFunction& g, const std::vector<double>& xdot,
                      const std::vector<int>& k, const GhOptions& opts = {});

/// All k at once for one xdot (shares the circle sweep).
std::vector<complexd> gh_transform_karray(const HorizontalFunction& g,
                                          const std::vector<double>& xdot, int k_max,
                                          const GhOptions& opts = {});

/// Direct tensor Gauss-Hermite route kept as an independent cross-check.
complexd gh_transform_direct(const HorizontalFunction& g, const std::vector<double>& xdot,
                             const std::vector<int>& k, const GhOptions& opts = {});

struct GhConvolveReport {
  double deviation = 0;
  double tail_bound = 0; // magnitude bound for the truncated k' tail
};

/// | G_H(f*g)(xdot,k) - sum_{|k'|<=K} G_H f(xdot,k-k') G_H g(xdot,k') |.
GhConvolveReport gh_convolve_check(const HorizontalFunction& f, const HorizontalFunction& g,
                                   const std::vector<double>& xdot, const std::vector<int>& k,
                                   int k_trunc, const GhOptions& opts = {});

/// Inversion off the boundary stratum:
///   g(Y) = (2^{d-1} / pi^d) int K_d(xdot,k,Y) gh(xdot,k) dmu(xdot,k).
/// The constant differs from the printed source statement by the factor 1/2
/// that makes the closed-form Gaussian round trip exact; see the module notes.
complexd gh_inverse(const std::function<complexd(const BoundaryPoint&)>& gh_values,
                    const PhasePoint& Y, int k_max, const BoundaryRule& rule,
                    const GhOptions& opts = {});

struct GhPlancherelCheck {
  double lhs = 0; // ||g||^2_{L^2}
  double rhs = 0; // (2^{d-1} / pi^d) ||G_H g||^2_{L^2(mu)}
  double ratio = 0;
};
GhPlancherelCheck gh_plancherel_check(const HorizontalFunction& g, int k_max,
                                      const BoundaryRule& rule, const GhOptions& opts = {});

struct GhDecayReport {
  double fitted_constant = 0;  // sup (1+|xdot|+|k|)^p |G_H g|
  double laplace_transfer_dev = 0; // 4^p |xdot|^p G_H g = G_H((-Delta_Y)^p g)
  double rotation_transfer_dev = 0; // (-i k sgn xdot)^p G_H g = G_H(T^p g)
};
GhDecayReport gh_decay_check(const HorizontalFunction& g, int p, const GhOptions& opts = {});

} // namespace hfreq
