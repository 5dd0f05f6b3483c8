#include "hfreq/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hfreq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Orthonormal Hermite polynomial values (weight e^{-x^2}) and derivative of
// the last one, for the Newton solve.
void hermite_poly_pair(int n, double x, double& pn, double& pn_deriv) {
  // ~p_0 = pi^{-1/4}; ~p_{k+1} = x sqrt(2/(k+1)) ~p_k - sqrt(k/(k+1)) ~p_{k-1}
  double p0 = std::pow(kPi, -0.25);
  double p1 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double p2 = p1;
    p1 = p0;
    p0 = x * std::sqrt(2.0 / (k + 1)) * p1 - std::sqrt(double(k) / (k + 1)) * p2;
  }
  pn = p0;
  pn_deriv = std::sqrt(2.0 * n) * p1; // ~p_n' = sqrt(2n) ~p_{n-1}
}

QuadratureRule1D make_gauss_hermite(int n) {
  QuadratureRule1D rule;
  rule.kind = RuleKind::gauss_hermite;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Stroud-Secrest style initial guesses, largest root first.
    double z;
    if (i == 0) {
      z = std::sqrt(double(2 * n + 1)) - 1.85575 * std::pow(double(2 * n + 1), -1.0 / 6.0);
    } else if (i == 1) {
      z = rule.nodes[n - 1] - 1.14 * std::pow(double(n), 0.426) / rule.nodes[n - 1];
    } else if (i == 2) {
      z = 1.86 * rule.nodes[n - 2] - 0.86 * rule.nodes[n - 1];
    } else if (i == 3) {
      z = 1.91 * rule.nodes[n - 3] - 0.91 * rule.nodes[n - 2];
    } else {
      z = 2.0 * rule.nodes[n - i] - rule.nodes[n - i + 1];
    }
    double pn = 0, dpn = 0;
    for (int it = 0; it < 100; ++it) {
      hermite_poly_pair(n, z, pn, dpn);
      const double dz = pn / dpn;
      if (!std::isfinite(dz)) break; // polynomial overflow at extreme nodes
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    hermite_poly_pair(n, z, pn, dpn);
    rule.nodes[n - 1 - i] = z;
    rule.nodes[i] = -z;
    // overflow in dpn means the true weight underflows to zero anyway
    const double w = std::isfinite(dpn) ? 2.0 / (dpn * dpn) : 0.0;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0; // exact symmetry
  return rule;
}

void legendre_poly_pair(int n, double x, double& pn, double& pn_deriv) {
  double p0 = 1.0, p1 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double p2 = p1;
    p1 = p0;
    p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1);
  }
  pn = p0;
  pn_deriv = n * (x * p0 - p1) / (x * x - 1.0);
}

QuadratureRule1D make_gauss_legendre(int n, double a, double b) {
  QuadratureRule1D rule;
  rule.kind = RuleKind::gauss_legendre;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b), halfw = 0.5 * (b - a);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pn = 0, dpn = 0;
    for (int it = 0; it < 100; ++it) {
      legendre_poly_pair(n, z, pn, dpn);
      const double dz = pn / dpn;
      z -= dz;
      if (std::abs(dz) <= 1e-15) break;
    }
    legendre_poly_pair(n, z, pn, dpn);
    const double w = 2.0 / ((1.0 - z * z) * dpn * dpn);
    // z is the i-th largest root; map to increasing order on [a, b]
    rule.nodes[i] = mid - halfw * z;
    rule.nodes[n - 1 - i] = mid + halfw * z;
    rule.weights[i] = halfw * w;
    rule.weights[n - 1 - i] = halfw * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;
  return rule;
}

QuadratureRule1D make_periodic_trapezoid(int n) {
  QuadratureRule1D rule;
  rule.kind = RuleKind::periodic_trapezoid;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double h = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = -kPi + i * h;
    rule.weights[i] = h;
  }
  return rule;
}

} // namespace

QuadratureRule1D make_rule(RuleKind kind, int n,
                           std::optional<std::pair<double, double>> interval) {
  if (n < 1) throw std::invalid_argument("make_rule: node count must be >= 1");
  if (kind == RuleKind::gauss_legendre) {
    if (!interval) throw std::invalid_argument("make_rule: gauss_legendre needs an interval");
    const auto [a, b] = *interval;
    if (!std::isfinite(a) || !std::isfinite(b))
      throw std::invalid_argument("make_rule: interval endpoints must be finite");
    if (!(a < b)) throw std::invalid_argument("make_rule: interval must satisfy a < b");
    return make_gauss_legendre(n, a, b);
  }
  if (interval) throw std::invalid_argument("make_rule: interval only valid for gauss_legendre");
  if (kind == RuleKind::gauss_hermite) return make_gauss_hermite(n);
  return make_periodic_trapezoid(n);
}

complexd integrate_1d(const QuadratureRule1D& rule,
                      const std::function<complexd(double)>& f) {
  complexd acc = 0;
  for (int i = 0; i < rule.size(); ++i) {
    const complexd v = f(rule.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("integrate_1d: non-finite integrand at node " + std::to_string(i));
    acc += rule.weights[i] * v;
  }
  return acc;
}

double integrate_1d_real(const QuadratureRule1D& rule,
                         const std::function<double(double)>& f) {
  double acc = 0;
  for (int i = 0; i < rule.size(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v))
      throw std::domain_error("integrate_1d: non-finite integrand at node " + std::to_string(i));
    acc += rule.weights[i] * v;
  }
  return acc;
}

SeriesResult sum_series(const std::function<complexd(int)>& terms,
                        const SeriesControl& ctrl) {
  if (ctrl.max_terms < 1 || ctrl.abs_tail_tol <= 0 || ctrl.consecutive_small < 1)
    throw std::invalid_argument("sum_series: bad SeriesControl");
  SeriesResult res;
  int small_run = 0;
  for (int j = 0; j < ctrl.max_terms; ++j) {
    const complexd t = terms(j);
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag()))
      throw std::domain_error("sum_series: non-finite term at index " + std::to_string(j));
    res.value += t;
    ++res.terms_used;
    small_run = (std::abs(t) < ctrl.abs_tail_tol) ? small_run + 1 : 0;
    if (small_run >= ctrl.consecutive_small) {
      res.converged = true;
      break;
    }
  }
  return res;
}

complexd poly_gauss_fourier(int k, double c, double xi) {
  if (k < 0 || !(c > 0)) throw std::invalid_argument("poly_gauss_fourier: bad arguments");
  // int e^{-c x^2 - i xi x} dx = sqrt(pi/c) e^{-xi^2/(4c)}; each x power is an
  // i d/dxi, so the k-th value is i^k q_k(xi) times the Gaussian, with
  // q_{j+1} = q_j' - xi/(2c) q_j.
  std::vector<double> q{1.0};
  for (int j = 0; j < k; ++j) {
    std::vector<double> nxt(q.size() + 1, 0.0);
    for (size_t p = 1; p < q.size(); ++p) nxt[p - 1] += double(p) * q[p];
    for (size_t p = 0; p < q.size(); ++p) nxt[p + 1] -= q[p] / (2.0 * c);
    q = std::move(nxt);
  }
  double poly = 0, xp = 1;
  for (double cf : q) {
    poly += cf * xp;
    xp *= xi;
  }
  const double g = std::sqrt(kPi / c) * std::exp(-xi * xi / (4.0 * c)) * poly;
  static const complexd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return ipow[k % 4] * g;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matched samples");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit out;
  const double den = n * sxx - sx * sx;
  out.slope = (n * sxy - sx * sy) / den;
  out.intercept = (sy - out.slope * sx) / n;
  double ss_res = 0;
  const double ybar = sy / n;
  double ss_tot = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  out.r2 = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

} // namespace hfreq
