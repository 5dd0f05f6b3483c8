#pragma once

#include "hfreq/horizontal.hpp"
#include "hfreq/wigner.hpp"

#include <functional>
#include <vector>

namespace hfreq {

struct RateFit {
  std::vector<double> params;  // lambda or epsilon values actually used
  std::vector<double> errors;  // matching deviations
  double slope = 0;            // log-log least squares
  double r2 = 0;
  bool all_zero = false;       // every error vanished; no fit possible
};

/// W -> K along 2 lambda n -> xdot with m = n + k: per-lambda errors
/// |W(n, n+k, lambda, Y) - K(2 lambda n, k, Y)| and the fitted log-log rate.
/// n(lambda) = round(xdot / (2 lambda)); the kernel is evaluated at the
/// rounded 2 lambda n, so only the vertical-frequency error is measured.
RateFit w_to_k_limit(double xdot, int k, const PhasePoint& Y,
                     const std::vector<double>& lambdas);

/// Term-level version: |H_{l1,l2}(w^) - F_{l1,l2}(k) (|lambda| n / 2)^{(l1+l2)/2}|
/// with H_{l1,l2}(w^) = |lambda|^{(l1+l2)/2} (M^{l1} H_m | D^{l2} H_n).
RateFit h_term_limit(int l1, int l2, double xdot, int k,
                     const std::vector<double>& lambdas);

/// The ladder expansion bound, computed exactly in coefficient space:
/// || lam^{l/2} ((A +- C)/2)^l H_n
///    - (lam n / 2)^{l/2} sum_{l'} (+-1)^{l-l'} C(l,l') H_{n+l-2l'} ||_{L^2}
/// with n = round(xdot / lambda), fitted against sqrt(lambda).
RateFit ladder_expansion_check(int ell, int sign, double xdot,
                               const std::vector<double>& lambdas);

/// Profile theta(n, m, lambda) = psi(|lambda| (n+m), m-n) cut(lambda), which
/// extends continuously to the boundary as psi(|xdot|_1, k) cut(0).
struct BoundaryProfile {
  std::function<double(double, int)> psi; // psi(x, k), x >= 0, compact support
  double x_support = 10.0;                // psi(x, k) = 0 for x > x_support
  int k_band = 0;                         // psi(., k) = 0 for |k| > k_band
  std::function<double(double)> lambda_cut; // optional factor, default 1
  double cut(double lambda) const { return lambda_cut ? lambda_cut(lambda) : 1.0; }
};

struct Mollifier {
  enum class Kind { box, gaussian } kind = Kind::box;
  // box: (1/2) 1_[-1,1]; gaussian: (2pi)^{-1/2} e^{-u^2/2}, truncated at |u|<=8
  double value(double u) const;
  double support() const;
  double mass_half() const { return 0.5; } // both kinds are even with integral 1
};

struct DeviationSequence {
  std::vector<double> eps;
  std::vector<double> deviation;
  std::vector<double> value;  // the frequency-side pairing itself
  double target = 0;          // the boundary-measure limit
};

/// Concentration of eps^{-1} chi^(lambda/eps) dw^ on the boundary stratum
/// (d = 1). The limit carries the orthant weights int_{R_+-} chi^, i.e. 1/2
/// per side for an even unit-mass mollifier; the printed source statement
/// has weight 1 per side, which no unit-mass profile attains (see the module
/// notes). deviation(eps) -> 0 against the weighted limit.
DeviationSequence concentration_limit(const BoundaryProfile& theta, const Mollifier& moll,
                                      const std::vector<double>& eps_list);

/// Partition check behind the concentration proof: the cubes
/// 2 lambda n + 2 lambda [0,1)^d tile the orthant; returns max |sum - 1| over
/// the sampled xdot.
double cube_partition_check(double lambda, const std::vector<double>& xdot_samples);

/// Pairing <F_H(g x chi(eps .)), theta> against its boundary limit
/// pi <mu, (G_H g) theta> for radial g (d = 1), chi a Gaussian of time width
/// chi_s_width (chi(0) = 1, so chi^ has total mass 2 pi, i.e. pi per side).
DeviationSequence horizontal_limit(const HorizontalFunction& g, double chi_s_width,
                                   const BoundaryProfile& theta,
                                   const std::vector<double>& eps_list);

/// Diagonal frequency pairing G(n, n, lambda) = int conj(W(n,n,lambda,.)) g dY
/// for radial g (polynomial in |Y|^2 times a Gaussian), d = 1; the |Y|^2
/// factors act through the discrete operator behind hat_delta_apply.
std::vector<double> radial_pairing_diagonal(const HorizontalFunction& g, double lambda,
                                            int n_count);

} // namespace hfreq
