#include "hfreq/asymptotics.hpp"

#include "hfreq/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace hfreq {

namespace {

constexpr double kPi = 3.14159265358979323846;

RateFit finish_fit(RateFit fit) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < fit.params.size(); ++i)
    if (fit.errors[i] > 0) {
      lx.push_back(std::log(fit.params[i]));
      ly.push_back(std::log(fit.errors[i]));
    }
  if (lx.size() < 2) {
    fit.all_zero = true;
    return fit;
  }
  const LineFit lf = fit_line(lx, ly);
  fit.slope = lf.slope;
  fit.r2 = lf.r2;
  return fit;
}

} // namespace

RateFit w_to_k_limit(double xdot, int k, const PhasePoint& Y,
                     const std::vector<double>& lambdas) {
  if (!(xdot > 0)) throw std::invalid_argument("w_to_k_limit: xdot must be positive");
  if (Y.dim() != 1) throw std::invalid_argument("w_to_k_limit: d = 1 only");
  RateFit fit;
  for (double lam : lambdas) {
    if (!(lam > 0)) throw std::invalid_argument("w_to_k_limit: lambdas must be positive");
    const long long n = std::llround(xdot / (2.0 * lam));
    if (n < 1 || n + k < 0) continue;
    const double x_snap = 2.0 * lam * double(n);
    WignerEvalSpec spec;
    spec.method = WignerMethod::series;
    spec.R0 = lam * double(2 * n + k + 1) + std::abs(k) + std::sqrt(Y.norm2()) + 1.0;
    const FrequencyPoint w(MultiIndex({int(n)}), MultiIndex({int(n + k)}), lam);
    const complexd wv = wigner_w(w, Y, spec);
    const complexd kv = kernel_K(x_snap, k, Y.y[0], Y.eta[0]);
    fit.params.push_back(lam);
    fit.errors.push_back(std::abs(wv - kv));
  }
  return finish_fit(std::move(fit));
}

RateFit h_term_limit(int l1, int l2, double xdot, int k,
                     const std::vector<double>& lambdas) {
  if (!(xdot > 0)) throw std::invalid_argument("h_term_limit: xdot must be positive");
  RateFit fit;
  const double F = double(F_coeff(l1, l2, k));
  for (double lam : lambdas) {
    const long long n = std::llround(xdot / (2.0 * lam));
    if (n < 1 || n + k < 0) continue;
    const double h =
        std::pow(lam, 0.5 * (l1 + l2)) * matrix_element(l1, l2, int(n), int(n + k));
    const double limit = F * std::pow(0.5 * lam * double(n), 0.5 * (l1 + l2));
    fit.params.push_back(lam);
    fit.errors.push_back(std::abs(h - limit));
  }
  return finish_fit(std::move(fit));
}

RateFit ladder_expansion_check(int ell, int sign, double xdot,
                               const std::vector<double>& lambdas) {
  if (ell < 1) throw std::invalid_argument("ladder_expansion_check: ell must be >= 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("ladder_expansion_check: sign +-1");
  RateFit fit;
  for (double lam : lambdas) {
    const long long n = std::llround(xdot / lam);
    if (n < ell + 1) continue;
    HermiteCoefficientVector v = HermiteCoefficientVector::basis(int(n));
    for (int t = 0; t < ell; ++t) {
      HermiteCoefficientVector a = ladder_apply(LadderOp::A, v);
      HermiteCoefficientVector c = ladder_apply(LadderOp::C, v);
      c *= double(sign);
      a += c;
      a *= 0.5;
      v = std::move(a);
    }
    v *= std::pow(lam, 0.5 * ell);
    // subtract (lam n / 2)^{l/2} sum (sign)^{l-l'} C(l,l') H_{n+l-2l'}
    const double amp = std::pow(0.5 * lam * double(n), 0.5 * ell);
    double binom = 1;
    for (int lp = 0; lp <= ell; ++lp) {
      const long long idx = n + ell - 2 * lp;
      if (idx >= 0) {
        const double sg = ((ell - lp) % 2 == 0) ? 1.0 : double(sign);
        v.add(int(idx), -amp * sg * binom);
      }
      binom = binom * double(ell - lp) / double(lp + 1);
    }
    fit.params.push_back(lam);
    fit.errors.push_back(v.norm());
  }
  return finish_fit(std::move(fit));
}

// ---------------------------------------------------------------------------
// concentration on the boundary stratum
// ---------------------------------------------------------------------------

double Mollifier::value(double u) const {
  if (kind == Kind::box) return (std::abs(u) <= 1.0) ? 0.5 : 0.0;
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * kPi);
}

double Mollifier::support() const { return kind == Kind::box ? 1.0 : 8.0; }

namespace {

// S(lambda) = cut(lambda) |lambda| sum_{k, n} psi(|lambda| (2n+k), k)
double freq_slice(const BoundaryProfile& th, double lambda) {
  const double al = std::abs(lambda);
  double acc = 0;
  for (int k = -th.k_band; k <= th.k_band; ++k) {
    const long long n0 = std::max(0LL, (long long)-k);
    const long long n1 = (long long)std::ceil((th.x_support / al - k) / 2.0) + 1;
    for (long long n = n0; n <= n1; ++n) {
      const double x = al * double(2 * n + k);
      if (x > th.x_support) break;
      acc += th.psi(x, k);
    }
  }
  return th.cut(lambda) * al * acc;
}

// limit of freq_slice as lambda -> 0^sign: cut(0) 2^{-1} sum_k int_0^inf psi
double freq_slice_limit(const BoundaryProfile& th) {
  double acc = 0;
  const auto rule = make_rule(RuleKind::gauss_legendre, 240,
                              std::make_pair(0.0, th.x_support));
  for (int k = -th.k_band; k <= th.k_band; ++k)
    for (int i = 0; i < rule.size(); ++i)
      acc += rule.weights[i] * th.psi(rule.nodes[i], k);
  return th.cut(0.0) * 0.5 * acc;
}

// int over u_floor <= |u| <= support of moll(u) (S(eps u) - S(0^sgn u)) du,
// i.e. the deviation of the pairing from its weighted boundary limit.
double deviation_integral(const std::function<double(double)>& slice, double slice_limit,
                          const std::function<double(double)>& moll, double support,
                          double eps) {
  const double u_floor = 3e-3;
  const int panels = 12, nodes = 10;
  double acc = 0;
  for (int sgn : {-1, 1}) {
    for (int p = 0; p < panels; ++p) {
      const double a = u_floor * std::pow(support / u_floor, double(p) / panels);
      const double b = u_floor * std::pow(support / u_floor, double(p + 1) / panels);
      const auto rule = make_rule(RuleKind::gauss_legendre, nodes, std::make_pair(a, b));
      for (int i = 0; i < rule.size(); ++i) {
        const double u = sgn * rule.nodes[i];
        acc += rule.weights[i] * moll(u) * (slice(eps * u) - slice_limit);
      }
    }
  }
  return acc;
}

} // namespace

DeviationSequence concentration_limit(const BoundaryProfile& theta, const Mollifier& moll,
                                      const std::vector<double>& eps_list) {
  DeviationSequence out;
  const double s0 = freq_slice_limit(theta); // same limit on both sides
  out.target = 2.0 * moll.mass_half() * s0;
  auto slice = [&](double lam) { return freq_slice(theta, lam); };
  auto mv = [&](double u) { return moll.value(u); };
  for (double eps : eps_list) {
    const double dev = deviation_integral(slice, s0, mv, moll.support(), eps);
    out.eps.push_back(eps);
    out.deviation.push_back(std::abs(dev));
    out.value.push_back(out.target + dev);
  }
  return out;
}

double cube_partition_check(double lambda, const std::vector<double>& xdot_samples) {
  if (!(lambda != 0)) throw std::invalid_argument("cube_partition_check: lambda nonzero");
  const double al = std::abs(lambda);
  double worst = 0;
  for (double x : xdot_samples) {
    const double xs = (lambda > 0) ? x : -x; // sample lives in the lambda orthant
    int count = 0;
    const long long n_hi = (long long)(std::abs(xs) / (2.0 * al)) + 2;
    for (long long n = 0; n <= n_hi; ++n) {
      const double lo = 2.0 * lambda * double(n);
      const double hi = 2.0 * lambda * double(n + 1);
      const bool in = (lambda > 0) ? (xs >= lo && xs < hi) : (xs <= lo && xs > hi);
      count += in ? 1 : 0;
    }
    worst = std::max(worst, std::abs(double(count) - 1.0));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// horizontal limit for radial g
// ---------------------------------------------------------------------------

std::vector<double> radial_pairing_diagonal(const HorizontalFunction& g, double lambda,
                                            int n_count) {
  if (g.dim() != 1) throw std::invalid_argument("radial_pairing_diagonal: d = 1 only");
  if (!g.is_radial())
    throw std::invalid_argument("radial_pairing_diagonal: g must be radial");
  // radial coefficients: g = sum_q c_q |Y|^{2q} e^{-a |Y|^2}; the coefficient
  // of y^{2q} eta^0 is c_q
  int qmax = 0;
  for (const auto& [alpha, c] : g.terms()) qmax = std::max(qmax, (alpha[0] + alpha[1]) / 2);
  std::vector<complexd> cq(qmax + 1, complexd(0));
  for (const auto& [alpha, c] : g.terms())
    if (alpha[1] == 0) cq[alpha[0] / 2] = c;

  const double a = g.width();
  const double al = std::abs(lambda);
  const double rho = (a - al) / (a + al);
  const int len = n_count + qmax + 1;
  std::vector<double> seed(len);
  double rp = kPi / (a + al);
  for (int n = 0; n < len; ++n) {
    seed[n] = rp;
    rp *= rho;
  }
  // |Y|^2 multiplication acts diagonally as
  //   (+(2n+1) G(n) - (n+1) G(n+1) - n G(n-1)) / (2 |lambda|)
  std::vector<complexd> out(n_count, complexd(0));
  std::vector<double> cur(seed);
  for (int q = 0; q <= qmax; ++q) {
    if (cq[q] != complexd(0))
      for (int n = 0; n < n_count; ++n) out[n] += cq[q] * cur[n];
    if (q == qmax) break;
    std::vector<double> nxt(len, 0.0);
    for (int n = 0; n + q + 1 < len; ++n) {
      double v = (2.0 * n + 1.0) * cur[n];
      if (n + 1 < len) v -= double(n + 1) * cur[n + 1];
      if (n >= 1) v -= double(n) * cur[n - 1];
      nxt[n] = v / (2.0 * al);
    }
    cur = std::move(nxt);
  }
  std::vector<double> res(n_count);
  for (int n = 0; n < n_count; ++n) res[n] = out[n].real();
  return res;
}

DeviationSequence horizontal_limit(const HorizontalFunction& g, double chi_s_width,
                                   const BoundaryProfile& theta,
                                   const std::vector<double>& eps_list) {
  if (g.dim() != 1) throw std::invalid_argument("horizontal_limit: d = 1 only");
  if (!g.is_radial())
    throw std::invalid_argument("horizontal_limit: radial g only at this scale");

  // boundary side: 2^{-1} int_0^inf G_H g(x, 0) psi(x, 0) dx, both orthants
  const auto rule = make_rule(RuleKind::gauss_legendre, 200,
                              std::make_pair(0.0, theta.x_support));
  double s0 = 0;
  for (int i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes[i];
    const double ghv = gh_transform(g, {x}, {0}).real(); // radial: real, even in xdot
    s0 += rule.weights[i] * ghv * theta.psi(x, 0);
  }
  s0 *= 0.5 * theta.cut(0.0);

  // frequency side slice: cut |lambda| sum_n G(n,n,lambda) psi(2 |lambda| n, 0)
  auto slice = [&](double lam) {
    const double al = std::abs(lam);
    const int n_count = static_cast<int>(theta.x_support / (2.0 * al)) + 2;
    const std::vector<double> diag = radial_pairing_diagonal(g, lam, n_count);
    double acc = 0;
    for (int n = 0; n < n_count; ++n) {
      const double x = 2.0 * al * double(n);
      if (x > theta.x_support) break;
      acc += diag[n] * theta.psi(x, 0);
    }
    return theta.cut(lam) * al * acc;
  };

  // chi Gaussian of time width S: chi^(u) = S sqrt(2 pi) e^{-S^2 u^2 / 2},
  // total mass 2 pi (chi(0) = 1), so pi per side.
  const double S = chi_s_width;
  auto moll = [&](double u) { return S * std::sqrt(2.0 * kPi) * std::exp(-0.5 * S * S * u * u); };
  const double support = 8.0 / S;

  DeviationSequence out;
  out.target = 2.0 * kPi * s0; // pi per side, both orthants equal
  for (double eps : eps_list) {
    const double dev = deviation_integral(slice, s0, moll, support, eps);
    out.eps.push_back(eps);
    out.deviation.push_back(std::abs(dev));
    out.value.push_back(out.target + dev);
  }
  return out;
}

} // namespace hfreq
