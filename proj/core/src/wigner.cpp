#include "hfreq/wigner.hpp"

#include <cmath>
#include <stdexcept>

namespace hfreq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Orthonormal Hermite polynomial parts p_n = H_n e^{x^2/2}, all orders up to
// n_max at one abscissa. Safe for n_max <= ~256 at quadrature-scale x.
void hermite_polys(int n_max, double x, std::vector<double>& out) {
  out.resize(n_max + 1);
  out[0] = std::pow(kPi, -0.25);
  if (n_max >= 1) out[1] = std::sqrt(2.0) * x * out[0];
  for (int k = 1; k < n_max; ++k)
    out[k + 1] = (2.0 * x * out[k] - std::sqrt(2.0 * k) * out[k - 1]) / std::sqrt(2.0 * k + 2.0);
}

int default_quad_nodes(int n, int m, double lambda, double y, double eta) {
  const double osc = 2.0 * std::abs(lambda) * (y * y + eta * eta);
  const int raw = (n + m) / 2 + static_cast<int>(std::ceil(osc)) + 32;
  // bucket the count so the rule cache actually hits across sweeps
  return std::min(((raw + 31) / 32) * 32, 640);
}

// Cached rules: wigner sweeps hit the same node counts over and over.
const QuadratureRule1D& cached_gh(int n) {
  thread_local std::vector<QuadratureRule1D> cache;
  for (const auto& r : cache)
    if (r.size() == n) return r;
  cache.push_back(make_rule(RuleKind::gauss_hermite, n));
  if (cache.size() > 64) cache.erase(cache.begin());
  return cache.back();
}

complexd wigner_quadrature_1d(int n, int m, double lambda, double y, double eta, int nodes) {
  if (nodes <= 0) nodes = default_quad_nodes(n, m, lambda, y, eta);
  if (n > 256 || m > 256)
    throw std::invalid_argument("wigner_w: quadrature path limited to n, m <= 256");
  const double s = std::sqrt(std::abs(lambda));
  const double c = s * y;
  const double omega = 2.0 * ((lambda > 0) ? 1.0 : -1.0) * s * eta;
  const auto& rule = cached_gh(nodes);
  std::vector<double> pn, pm;
  complexd acc = 0;
  for (int k = 0; k < rule.size(); ++k) {
    const double t = rule.nodes[k];
    hermite_polys(n, t + c, pn);
    hermite_polys(m, t - c, pm);
    acc += rule.weights[k] * std::polar(1.0, omega * t) * pn[n] * pm[m];
  }
  return acc * std::exp(-c * c);
}

complexd wigner_series_1d(int n, int m, double lambda, double y, double eta,
                          const SeriesControl& ctrl, bool* converged) {
  // W~ = sum (sgn lam)^{l1} |lam|^{(l1+l2)/2} (2 i eta)^{l1} (2 y)^{l2}
  //       / (l1! l2!) (M^{l1} H_m | D^{l2} H_n),  W = e^{2 i lam eta y} W~.
  const double sgn = (lambda > 0) ? 1.0 : -1.0;
  const double rt = std::sqrt(std::abs(lambda));

  // ladder images M^{l1} H_m and D^{l2} H_n, built incrementally by shell
  std::vector<HermiteCoefficientVector> mpow{HermiteCoefficientVector::basis(m)};
  std::vector<HermiteCoefficientVector> dpow{HermiteCoefficientVector::basis(n)};

  complexd acc = 0;
  int small_run = 0;
  int terms_used = 0;
  bool ok = false;
  const int max_shell = 200;
  for (int shell = 0; shell <= max_shell; ++shell) {
    complexd shell_sum = 0;
    for (int l1 = 0; l1 <= shell; ++l1) {
      const int l2 = shell - l1;
      while (static_cast<int>(mpow.size()) <= l1)
        mpow.push_back(ladder_apply(LadderOp::M, mpow.back()));
      while (static_cast<int>(dpow.size()) <= l2)
        dpow.push_back(ladder_apply(LadderOp::D, dpow.back()));
      const double me = mpow[l1].inner(dpow[l2]);
      if (me == 0.0) {
        ++terms_used;
        continue;
      }
      double fct = 1;
      for (int j = 2; j <= l1; ++j) fct *= j;
      for (int j = 2; j <= l2; ++j) fct *= j;
      const complexd etapow = std::pow(complexd(0.0, 2.0 * eta), l1);
      const double ypow = std::pow(2.0 * y, l2);
      shell_sum += std::pow(sgn, l1) * std::pow(rt, shell) * etapow * ypow / fct * me;
      ++terms_used;
      if (terms_used >= ctrl.max_terms) break;
    }
    acc += shell_sum;
    // the pairing vanishes for l1 + l2 < |n - m|; start the tail test there
    if (shell >= std::abs(n - m)) {
      small_run = (std::abs(shell_sum) < ctrl.abs_tail_tol) ? small_run + 1 : 0;
      if (small_run >= ctrl.consecutive_small) {
        ok = true;
        break;
      }
    }
    if (terms_used >= ctrl.max_terms) break;
  }
  if (converged) *converged = ok;
  return std::polar(1.0, 2.0 * lambda * eta * y) * acc;
}

} // namespace

bool WignerEvalSpec::series_admissible(const FrequencyPoint& w, const PhasePoint& Y) const {
  double s = std::abs(w.lambda) * (w.n.order() + w.m.order() + w.dim());
  for (int j = 0; j < w.dim(); ++j) s += std::abs(double(w.n[j] - w.m[j]));
  return s <= R0 && std::sqrt(Y.norm2()) <= R0;
}

complexd wigner_w_1d(int n, int m, double lambda, double y, double eta,
                     const WignerEvalSpec& spec) {
  if (lambda == 0.0) throw std::invalid_argument("wigner_w: lambda must be nonzero");
  WignerMethod method = spec.method;
  if (method == WignerMethod::automatic) {
    FrequencyPoint w(MultiIndex({n}), MultiIndex({m}), lambda);
    PhasePoint Y({y}, {eta});
    method = spec.series_admissible(w, Y) ? WignerMethod::series : WignerMethod::quadrature;
  }
  if (method == WignerMethod::series) {
    bool ok = false;
    const complexd v = wigner_series_1d(n, m, lambda, y, eta, spec.ctrl, &ok);
    if (!ok) throw std::domain_error("wigner_w: series did not converge within max_terms");
    return v;
  }
  return wigner_quadrature_1d(n, m, lambda, y, eta, spec.quad_nodes);
}

complexd wigner_w(const FrequencyPoint& w, const PhasePoint& Y, const WignerEvalSpec& spec) {
  if (Y.dim() != w.dim()) throw std::invalid_argument("wigner_w: dimension mismatch");
  if (spec.method == WignerMethod::series && !spec.series_admissible(w, Y))
    throw std::domain_error("wigner_w: series requested outside the admissible box B(R0)");
  complexd prod = 1;
  for (int j = 0; j < w.dim(); ++j)
    prod *= wigner_w_1d(w.n[j], w.m[j], w.lambda, Y.y[j], Y.eta[j], spec);
  return prod;
}

void wigner_all_1d(int n_max, double lambda, double y, double eta,
                   std::vector<complexd>& out, int quad_nodes) {
  if (lambda == 0.0) throw std::invalid_argument("wigner_all_1d: lambda must be nonzero");
  if (n_max > 256)
    throw std::invalid_argument("wigner_all_1d: quadrature path limited to n_max <= 256");
  const int nn = n_max + 1;
  out.assign(size_t(nn) * nn, complexd(0));
  if (quad_nodes <= 0) quad_nodes = default_quad_nodes(n_max, n_max, lambda, y, eta);
  const double s = std::sqrt(std::abs(lambda));
  const double c = s * y;
  const double omega = 2.0 * ((lambda > 0) ? 1.0 : -1.0) * s * eta;
  const auto& rule = cached_gh(quad_nodes);
  const double damp = std::exp(-c * c);
  std::vector<double> pn, pm;
  for (int k = 0; k < rule.size(); ++k) {
    const double t = rule.nodes[k];
    hermite_polys(n_max, t + c, pn);
    hermite_polys(n_max, t - c, pm);
    const complexd ph = rule.weights[k] * damp * std::polar(1.0, omega * t);
    for (int n = 0; n <= n_max; ++n) {
      const complexd pnph = ph * pn[n];
      complexd* row = &out[size_t(n) * nn];
      for (int m = 0; m <= n_max; ++m) row[m] += pnph * pm[m];
    }
  }
}

double WignerSymmetryReport::max_dev() const {
  return std::max({conj_dev, sign_dev, lam_conj_dev});
}

WignerSymmetryReport wigner_symmetries_check(const FrequencyPoint& w, const PhasePoint& Y,
                                             const WignerEvalSpec& spec) {
  WignerSymmetryReport rep;
  const FrequencyPoint wt(w.m, w.n, w.lambda);
  const FrequencyPoint wneg(w.n, w.m, -w.lambda);
  const complexd base = wigner_w(w, Y, spec);
  rep.conj_dev = std::abs(wigner_w(wt, -Y, spec) - std::conj(base));
  const double sign = (w.n.order() + w.m.order()) % 2 == 0 ? 1.0 : -1.0;
  rep.sign_dev = std::abs(wigner_w(wneg, Y, spec) - sign * wigner_w(wt, Y, spec));
  rep.lam_conj_dev = std::abs(wigner_w(wneg, Y, spec) - std::conj(base));
  return rep;
}

complexd hat_delta_apply(const std::function<complexd(const FrequencyPoint&)>& theta,
                         const FrequencyPoint& w) {
  if (w.lambda == 0.0) throw std::invalid_argument("hat_delta_apply: lambda must be nonzero");
  const double inv = 1.0 / (2.0 * std::abs(w.lambda));
  complexd acc = -double(w.n.order() + w.m.order() + w.dim()) * inv * theta(w);
  for (int j = 0; j < w.dim(); ++j) {
    const double up = std::sqrt(double(w.n[j] + 1) * double(w.m[j] + 1));
    acc += inv * up * theta(FrequencyPoint(w.n.shifted(j, +1), w.m.shifted(j, +1), w.lambda));
    if (w.n[j] > 0 && w.m[j] > 0) {
      const double down = std::sqrt(double(w.n[j]) * double(w.m[j]));
      acc += inv * down * theta(FrequencyPoint(w.n.shifted(j, -1), w.m.shifted(j, -1), w.lambda));
    }
  }
  return acc;
}

double limit_operator_L(const std::function<double(double, int)>& psi, double xdot, int k,
                        double fd_step) {
  if (!(xdot > 0)) throw std::domain_error("limit_operator_L: xdot must be positive");
  const double h = fd_step;
  const double pm = psi(xdot - h, k), p0 = psi(xdot, k), pp = psi(xdot + h, k);
  const double d1 = (pp - pm) / (2 * h);
  const double d2 = (pp - 2 * p0 + pm) / (h * h);
  return xdot * d2 + d1 - double(k) * k / (4.0 * xdot) * p0;
}

double limit_operator_L(const std::function<double(double, int)>& psi,
                        const std::function<double(double, int)>& dpsi,
                        const std::function<double(double, int)>& ddpsi, double xdot, int k) {
  if (!(xdot > 0)) throw std::domain_error("limit_operator_L: xdot must be positive");
  return xdot * ddpsi(xdot, k) + dpsi(xdot, k) - double(k) * k / (4.0 * xdot) * psi(xdot, k);
}

} // namespace hfreq
