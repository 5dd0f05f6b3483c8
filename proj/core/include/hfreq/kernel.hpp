#pragma once

#include "hfreq/heisenberg.hpp"
#include "hfreq/numerics.hpp"

#include <vector>

namespace hfreq {

enum class KernelMethod { integral, series };

struct KernelEvalSpec {
  KernelMethod method = KernelMethod::integral;
  int circle_nodes = 256; // periodic trapezoid; spectrally accurate overkill
  SeriesControl ctrl{.max_terms = 14400, .abs_tail_tol = 1e-15, .consecutive_small = 3};
  double series_box = 6.0; // require sqrt|xdot| (|y|+|eta|) <= series_box
};

/// One-dimensional boundary kernel
///   K(xdot, k, Y) = (1/2pi) int_{-pi}^{pi}
///        e^{i (2 |xdot|^{1/2} (y sin z + eta sgn(xdot) cos z) + k z)} dz,
/// with K(0, k, Y) = delta_{0,k}. |K| <= 1 everywhere.
complexd kernel_K(double xdot, int k, double y, double eta, const KernelEvalSpec& spec = {});

/// F_{l1,l2}(k) = sum over l1' <= l1, l2' <= l2 with k + l1 - 2 l1' = l2 - 2 l2'
/// of (-1)^{l2 - l2'} C(l1,l1') C(l2,l2'), exact integer arithmetic.
/// Guarded to l1 + l2 <= 62 so the value fits in 64 bits.
long long F_coeff(int l1, int l2, int k);

/// Tensor kernel K_d = prod_j K(xdot_j, k_j, Y_j); xdot components must share
/// one sign (mixed signs are outside the boundary stratum and rejected).
complexd kernel_Kd(const std::vector<double>& xdot, const std::vector<int>& k,
                   const PhasePoint& Y, const KernelEvalSpec& spec = {});

/// Periodized kernel K~(xdot, z, Y) = sum_k K(xdot, k, Y) e^{ikz}; in closed
/// form a pure phase e^{-2 i sqrt|xdot| (y sin z - sgn(xdot) eta cos z)}.
complexd kernel_tilde(double xdot, double z, double y, double eta);

struct KernelIdentityReport {
  double sym_conj_dev = 0;   // K(xdot,-k,-Y) = conj K(xdot,k,Y)
  double sym_negx_dev = 0;   // K(-xdot,-k,Y) = (-1)^k K(xdot,k,Y)
  double sym_negx2_dev = 0;  // K(-xdot,k,Y) = conj K(xdot,k,Y)
  double laplace_dev = 0;    // Delta_Y K = -4 |xdot| K (central differences)
  double rotation_dev = 0;   // i k K = sgn(xdot) (eta d_y - y d_eta) K
  double convolution_dev = 0; // K(.,.,Y1+Y2) = sum_k' K(.,k-k',Y1) K(.,k',Y2)
  double convolution_tail = 0; // fitted bound on the truncated k'-tail
  double y2_residual = 0;    // |Y|^2 K + xdot K'' + K' - k^2/(4 xdot) K (xdot > 0)
  double max_symmetry_dev() const;
};

struct KernelIdentityOptions {
  int k_trunc = 20;       // convolution sum truncation
  double fd_step = 1e-4;  // central differences in Y and xdot
  PhasePoint y2 = PhasePoint({0.3}, {-0.4}); // second argument of the convolution check
};

KernelIdentityReport kernel_identity_suite(double xdot, int k, double y, double eta,
                                           const KernelIdentityOptions& opts = {});

} // namespace hfreq
