#pragma once

#include "hfreq/frequency.hpp"
#include "hfreq/heisenberg.hpp"
#include "hfreq/numerics.hpp"

#include <functional>

namespace hfreq {

enum class WignerMethod { series, quadrature, automatic };

/// Evaluation policy for W. The series is the normally convergent expansion
/// and is only admissible on the box B(R0):
///   |lambda| (|n+m| + d) + |n-m| <= R0  and  |Y| <= R0.
struct WignerEvalSpec {
  WignerMethod method = WignerMethod::automatic;
  double R0 = 3.0;
  SeriesControl ctrl{.max_terms = 14400, .abs_tail_tol = 1e-15, .consecutive_small = 3};
  int quad_nodes = 0; // 0 = automatic from (n, m, lambda, Y)

  bool series_admissible(const FrequencyPoint& w, const PhasePoint& Y) const;
};

/// W(w^, Y) = int e^{2 i lambda <eta,z>} H_{n,lambda}(y+z) H_{m,lambda}(-y+z) dz.
/// |W| <= 1 everywhere. Throws if the series is requested outside B(R0).
complexd wigner_w(const FrequencyPoint& w, const PhasePoint& Y,
                  const WignerEvalSpec& spec = {});

/// One axis of the tensor product; exposed for the per-axis sweeps.
complexd wigner_w_1d(int n, int m, double lambda, double y, double eta,
                     const WignerEvalSpec& spec = {});

/// Evaluates W(n,m,lambda,.) for all 0 <= n,m <= n_max at one phase point and
/// one lambda (d = 1), sharing the Hermite recurrences across indices.
/// out[n * (n_max+1) + m]. Quadrature path only.
void wigner_all_1d(int n_max, double lambda, double y, double eta,
                   std::vector<complexd>& out, int quad_nodes = 0);

struct WignerSymmetryReport {
  double conj_dev = 0;     // W(m,n,lam,-Y) = conj W(n,m,lam,Y)
  double sign_dev = 0;     // W(n,m,-lam,Y) = (-1)^{|n+m|} W(m,n,lam,Y)
  double lam_conj_dev = 0; // W(n,m,-lam,Y) = conj W(n,m,lam,Y)
  double max_dev() const;
};
WignerSymmetryReport wigner_symmetries_check(const FrequencyPoint& w, const PhasePoint& Y,
                                             const WignerEvalSpec& spec = {});

/// The discrete operator realizing |Y|^2 multiplication on the frequency
/// side: |Y|^2 W(.,Y) = -(hat Delta W(.,Y)). Out-of-range neighbors carry the
/// zero coefficient sqrt(n_j m_j) automatically.
complexd hat_delta_apply(const std::function<complexd(const FrequencyPoint&)>& theta,
                         const FrequencyPoint& w);

/// L psi (xdot, k) = xdot psi'' + psi' - k^2/(4 xdot) psi, xdot > 0.
/// Derivatives by central differences at the given step when no analytic
/// derivatives are supplied.
double limit_operator_L(const std::function<double(double, int)>& psi, double xdot, int k,
                        double fd_step = 1e-4);
double limit_operator_L(const std::function<double(double, int)>& psi,
                        const std::function<double(double, int)>& dpsi,
                        const std::function<double(double, int)>& ddpsi, double xdot, int k);

} // namespace hfreq
