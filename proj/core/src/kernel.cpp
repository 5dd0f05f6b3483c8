#include "hfreq/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace hfreq {

namespace {

constexpr double kPi = 3.14159265358979323846;

complexd kernel_integral(double xdot, int k, double y, double eta, int nodes) {
  const double r = 2.0 * std::sqrt(std::abs(xdot));
  const double sgn = (xdot > 0) ? 1.0 : -1.0;
  const double h = 2.0 * kPi / nodes;
  complexd acc = 0;
  for (int i = 0; i < nodes; ++i) {
    const double z = -kPi + i * h;
    acc += std::polar(1.0, r * (y * std::sin(z) + eta * sgn * std::cos(z)) + k * z);
  }
  return acc * (h / (2.0 * kPi));
}

complexd kernel_series(double xdot, int k, double y, double eta, const KernelEvalSpec& spec) {
  const double ax = std::abs(xdot);
  const double rt = std::sqrt(ax);
  if (rt * (std::abs(y) + std::abs(eta)) > spec.series_box)
    throw std::domain_error("kernel_K: series requested outside the convergence box");
  const double sgn = (xdot > 0) ? 1.0 : -1.0;
  complexd acc = 0;
  int terms = 0;
  int small_run = 0;
  const int max_shell = 160;
  for (int shell = 0; shell <= max_shell; ++shell) {
    complexd shell_sum = 0;
    for (int l1 = 0; l1 <= shell; ++l1) {
      const int l2 = shell - l1;
      // F vanishes unless k + l1 and l2 have the same parity
      if (((k + l1) - l2) % 2 != 0) continue;
      if (std::abs(k) > l1 + l2) continue; // constraint k = l2 - l1 + 2(l1' - l2') range
      double F;
      if (l1 + l2 <= 62) {
        F = double(F_coeff(l1, l2, k));
      } else {
        // double-precision fallback far past the point where terms matter
        F = 0;
        for (int l1p = 0; l1p <= l1; ++l1p) {
          const int rhs = k + l1 - 2 * l1p;
          const int twice = l2 - rhs;
          if (twice % 2 != 0) continue;
          const int l2p = twice / 2;
          if (l2p < 0 || l2p > l2) continue;
          double b1 = 1, b2 = 1;
          for (int i = 0; i < l1p; ++i) b1 = b1 * (l1 - i) / (i + 1);
          for (int i = 0; i < l2p; ++i) b2 = b2 * (l2 - i) / (i + 1);
          F += ((l2 - l2p) % 2 == 0 ? 1.0 : -1.0) * b1 * b2;
        }
      }
      ++terms;
      if (F == 0.0) continue;
      double fct = 1;
      for (int j = 2; j <= l1; ++j) fct *= j;
      for (int j = 2; j <= l2; ++j) fct *= j;
      const complexd etapow = std::pow(complexd(0.0, eta), l1);
      shell_sum += etapow * std::pow(y, l2) / fct * F * std::pow(sgn, l1) * std::pow(rt, shell);
      if (terms >= spec.ctrl.max_terms) break;
    }
    acc += shell_sum;
    // shells below |k| vanish identically; the tail test starts after them
    if (shell >= std::abs(k)) {
      small_run = (std::abs(shell_sum) < spec.ctrl.abs_tail_tol) ? small_run + 1 : 0;
      if (small_run >= spec.ctrl.consecutive_small) return acc;
    }
    if (terms >= spec.ctrl.max_terms) break;
  }
  return acc;
}

} // namespace

long long F_coeff(int l1, int l2, int k) {
  if (l1 < 0 || l2 < 0) throw std::invalid_argument("F_coeff: negative order");
  if (l1 + l2 > 62) throw std::invalid_argument("F_coeff: l1 + l2 > 62 overflows 64-bit range");
  long long acc = 0;
  for (int l1p = 0; l1p <= l1; ++l1p) {
    const int rhs = k + l1 - 2 * l1p; // must equal l2 - 2 l2p
    const int twice = l2 - rhs;
    if (twice % 2 != 0) continue;
    const int l2p = twice / 2;
    if (l2p < 0 || l2p > l2) continue;
    long long b1 = 1, b2 = 1;
    for (int i = 0; i < l1p; ++i) b1 = b1 * (l1 - i) / (i + 1);
    for (int i = 0; i < l2p; ++i) b2 = b2 * (l2 - i) / (i + 1);
    acc += ((l2 - l2p) % 2 == 0 ? 1LL : -1LL) * b1 * b2;
  }
  return acc;
}

complexd kernel_K(double xdot, int k, double y, double eta, const KernelEvalSpec& spec) {
  if (!std::isfinite(xdot) || !std::isfinite(y) || !std::isfinite(eta))
    throw std::invalid_argument("kernel_K: non-finite argument");
  if (xdot == 0.0) return (k == 0) ? complexd(1.0) : complexd(0.0);
  if (spec.method == KernelMethod::series) return kernel_series(xdot, k, y, eta, spec);
  return kernel_integral(xdot, k, y, eta, spec.circle_nodes);
}

complexd kernel_Kd(const std::vector<double>& xdot, const std::vector<int>& k,
                   const PhasePoint& Y, const KernelEvalSpec& spec) {
  const int d = static_cast<int>(xdot.size());
  if (static_cast<int>(k.size()) != d || Y.dim() != d)
    throw std::invalid_argument("kernel_Kd: dimension mismatch");
  bool pos = false, neg = false;
  for (double x : xdot) {
    pos |= x > 0;
    neg |= x < 0;
  }
  if (pos && neg)
    throw std::invalid_argument("kernel_Kd: xdot has mixed-sign components");
  complexd prod = 1;
  for (int j = 0; j < d; ++j) prod *= kernel_K(xdot[j], k[j], Y.y[j], Y.eta[j], spec);
  return prod;
}

complexd kernel_tilde(double xdot, double z, double y, double eta) {
  const double rt = std::sqrt(std::abs(xdot));
  const double sgn = (xdot >= 0) ? 1.0 : -1.0;
  return std::polar(1.0, -2.0 * rt * (y * std::sin(z) - sgn * eta * std::cos(z)));
}

double KernelIdentityReport::max_symmetry_dev() const {
  return std::max({sym_conj_dev, sym_negx_dev, sym_negx2_dev});
}

KernelIdentityReport kernel_identity_suite(double xdot, int k, double y, double eta,
                                           const KernelIdentityOptions& opts) {
  KernelIdentityReport rep;
  KernelEvalSpec spec;
  const complexd base = kernel_K(xdot, k, y, eta, spec);

  rep.sym_conj_dev = std::abs(kernel_K(xdot, -k, -y, -eta, spec) - std::conj(base));
  const double sgnk = (k % 2 == 0) ? 1.0 : -1.0;
  rep.sym_negx_dev = std::abs(kernel_K(-xdot, -k, y, eta, spec) - sgnk * base);
  rep.sym_negx2_dev = std::abs(kernel_K(-xdot, k, y, eta, spec) - std::conj(base));

  const double h = opts.fd_step;
  auto K = [&](double yy, double ee) { return kernel_K(xdot, k, yy, ee, spec); };
  const complexd lap = (K(y + h, eta) + K(y - h, eta) + K(y, eta + h) + K(y, eta - h) -
                        4.0 * base) / (h * h);
  rep.laplace_dev = std::abs(lap + 4.0 * std::abs(xdot) * base);

  const complexd dy = (K(y + h, eta) - K(y - h, eta)) / (2 * h);
  const complexd de = (K(y, eta + h) - K(y, eta - h)) / (2 * h);
  const double sgn = (xdot >= 0) ? 1.0 : -1.0;
  rep.rotation_dev = std::abs(complexd(0, k) * base - sgn * (eta * dy - y * de));

  // torus convolution, truncated at |k'| <= k_trunc with a fitted tail bound
  const double y2y = opts.y2.y[0], y2e = opts.y2.eta[0];
  complexd conv = 0;
  double tail_mag = 0;
  for (int kp = -opts.k_trunc; kp <= opts.k_trunc; ++kp) {
    const complexd t = kernel_K(xdot, k - kp, y, eta, spec) * kernel_K(xdot, kp, y2y, y2e, spec);
    conv += t;
    if (std::abs(kp) == opts.k_trunc) tail_mag = std::max(tail_mag, std::abs(t));
  }
  const complexd joint = kernel_K(xdot, k, y + y2y, eta + y2e, spec);
  rep.convolution_dev = std::abs(joint - conv);
  rep.convolution_tail = 2.0 * tail_mag * (opts.k_trunc + 4); // crude geometric majorant

  if (xdot > 0) {
    const double hx = opts.fd_step * std::max(1.0, xdot);
    auto Kx = [&](double x) { return kernel_K(x, k, y, eta, spec); };
    auto resid = [&](double step) {
      const complexd d1 = (Kx(xdot + step) - Kx(xdot - step)) / (2 * step);
      const complexd d2 = (Kx(xdot + step) - 2.0 * base + Kx(xdot - step)) / (step * step);
      return (y * y + eta * eta) * base + xdot * d2 + d1 -
             double(k) * k / (4.0 * xdot) * base;
    };
    // one Richardson step on the second-order differences
    const complexd r1 = resid(hx), r2 = resid(hx / 2);
    rep.y2_residual = std::abs((4.0 * r2 - r1) / 3.0);
  }
  return rep;
}

} // namespace hfreq
