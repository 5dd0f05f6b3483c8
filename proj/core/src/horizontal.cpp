#include "hfreq/horizontal.hpp"

#include <cmath>
#include <stdexcept>

namespace hfreq {

namespace {
constexpr double kPi = 3.14159265358979323846;

double gauss_moment(int k, double c) {
  if (k % 2 == 1) return 0.0;
  double v = std::sqrt(kPi / c);
  for (int j = 1; j <= k / 2; ++j) v *= (2.0 * j - 1.0) / (2.0 * c);
  return v;
}
} // namespace

HorizontalFunction::HorizontalFunction(int d, double a) : d_(d), a_(a) {
  if (d < 1) throw std::invalid_argument("HorizontalFunction: d must be >= 1");
  if (!(a > 0)) throw std::invalid_argument("HorizontalFunction: width must be positive");
}

HorizontalFunction HorizontalFunction::gaussian(int d, double a) {
  HorizontalFunction g(d, a);
  g.add_term(1.0, Exponent(2 * d, 0));
  return g;
}

void HorizontalFunction::add_term(complexd c, Exponent alpha) {
  if (static_cast<int>(alpha.size()) != 2 * d_)
    throw std::invalid_argument("HorizontalFunction: exponent size must be 2d");
  for (int e : alpha)
    if (e < 0) throw std::invalid_argument("HorizontalFunction: negative exponent");
  auto it = terms_.find(alpha);
  if (it == terms_.end()) {
    if (c != 0.0) terms_.emplace(std::move(alpha), c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int HorizontalFunction::max_degree() const {
  int deg = 0;
  for (const auto& [alpha, c] : terms_) {
    int s = 0;
    for (int e : alpha) s += e;
    deg = std::max(deg, s);
  }
  return deg;
}

complexd HorizontalFunction::eval(const PhasePoint& Y) const {
  if (Y.dim() != d_) throw std::invalid_argument("HorizontalFunction::eval: dimension mismatch");
  const double g = std::exp(-a_ * Y.norm2());
  complexd acc = 0;
  for (const auto& [alpha, c] : terms_) {
    double mono = 1;
    for (int j = 0; j < d_; ++j) {
      for (int e = 0; e < alpha[j]; ++e) mono *= Y.y[j];
      for (int e = 0; e < alpha[d_ + j]; ++e) mono *= Y.eta[j];
    }
    acc += c * mono;
  }
  return acc * g;
}

HorizontalFunction HorizontalFunction::multiply_coord(int coord) const {
  HorizontalFunction out(d_, a_);
  for (const auto& [alpha, c] : terms_) {
    Exponent e = alpha;
    ++e[coord];
    out.add_term(c, std::move(e));
  }
  return out;
}

HorizontalFunction HorizontalFunction::differentiate(int coord) const {
  HorizontalFunction out(d_, a_);
  for (const auto& [alpha, c] : terms_) {
    if (alpha[coord] > 0) {
      Exponent e = alpha;
      --e[coord];
      out.add_term(c * double(alpha[coord]), std::move(e));
    }
    Exponent e2 = alpha;
    ++e2[coord];
    out.add_term(-2.0 * a_ * c, std::move(e2));
  }
  return out;
}

HorizontalFunction HorizontalFunction::scaled(complexd c) const {
  HorizontalFunction out(d_, a_);
  for (const auto& [alpha, coeff] : terms_) out.add_term(c * coeff, alpha);
  return out;
}

HorizontalFunction HorizontalFunction::operator+(const HorizontalFunction& o) const {
  if (d_ != o.d_ || a_ != o.a_)
    throw std::invalid_argument("HorizontalFunction: +/- needs equal width and dimension");
  HorizontalFunction out = *this;
  for (const auto& [alpha, c] : o.terms_) out.add_term(c, alpha);
  return out;
}

HorizontalFunction HorizontalFunction::operator-(const HorizontalFunction& o) const {
  return *this + o.scaled(-1.0);
}

HorizontalFunction HorizontalFunction::laplacian() const {
  HorizontalFunction acc(d_, a_);
  for (int c = 0; c < 2 * d_; ++c) acc = acc + differentiate(c).differentiate(c);
  return acc;
}

HorizontalFunction HorizontalFunction::rotation(int axis) const {
  return differentiate(axis).multiply_coord(d_ + axis) -
         differentiate(d_ + axis).multiply_coord(axis);
}

bool HorizontalFunction::is_radial() const {
  double scale = 0;
  for (const auto& [alpha, c] : terms_) scale = std::max(scale, std::abs(c));
  for (int ax = 0; ax < d_; ++ax) {
    const HorizontalFunction r = rotation(ax);
    for (const auto& [alpha, c] : r.terms())
      if (std::abs(c) > 1e-13 * std::max(1.0, scale)) return false;
  }
  return true;
}

complexd HorizontalFunction::integral() const {
  complexd acc = 0;
  for (const auto& [alpha, c] : terms_) {
    double m = 1;
    for (int j = 0; j < 2 * d_; ++j) m *= gauss_moment(alpha[j], a_);
    acc += c * m;
  }
  return acc;
}

complexd HorizontalFunction::l2_inner(const HorizontalFunction& g) const {
  if (d_ != g.d_) throw std::invalid_argument("l2_inner: dimension mismatch");
  const double ca = a_ + g.a_;
  complexd acc = 0;
  for (const auto& [al, c1] : terms_)
    for (const auto& [be, c2] : g.terms_) {
      double m = 1;
      for (int j = 0; j < 2 * d_; ++j) m *= gauss_moment(al[j] + be[j], ca);
      acc += c1 * std::conj(c2) * m;
    }
  return acc;
}

double HorizontalFunction::l1_norm(int nodes_per_axis) const {
  const auto rule = make_rule(RuleKind::gauss_hermite, nodes_per_axis);
  const double sa = std::sqrt(a_);
  std::vector<int> idx(2 * d_, 0);
  PhasePoint Y = PhasePoint::zero(d_);
  double acc = 0;
  while (true) {
    double wt = 1;
    for (int j = 0; j < d_; ++j) {
      Y.y[j] = rule.nodes[idx[j]] / sa;
      Y.eta[j] = rule.nodes[idx[d_ + j]] / sa;
      wt *= rule.weights[idx[j]] * rule.weights[idx[d_ + j]] / a_;
    }
    complexd poly = 0;
    for (const auto& [alpha, c] : terms_) {
      double mono = 1;
      for (int j = 0; j < d_; ++j) {
        for (int e = 0; e < alpha[j]; ++e) mono *= Y.y[j];
        for (int e = 0; e < alpha[d_ + j]; ++e) mono *= Y.eta[j];
      }
      poly += c * mono;
    }
    acc += wt * std::abs(poly);
    int ax = 0;
    while (ax < 2 * d_ && ++idx[ax] == rule.size()) idx[ax++] = 0;
    if (ax == 2 * d_) break;
  }
  return acc;
}

HorizontalFunction HorizontalFunction::convolve(const HorizontalFunction& g) const {
  if (d_ != g.d_) throw std::invalid_argument("convolve: dimension mismatch");
  const double a1 = a_, a2 = g.a_;
  const double abar = a1 * a2 / (a1 + a2);
  const double csh = a1 / (a1 + a2); // x' = v + csh x
  HorizontalFunction out(d_, abar);

  // per-coordinate polynomial of int (x-x')^{r1} x'^{r2} e^{-a1(x-x')^2 - a2 x'^2} dx'
  auto conv1d = [&](int r1, int r2) {
    std::vector<double> poly(r1 + r2 + 1, 0.0);
    double b1 = 1;
    for (int t1 = 0; t1 <= r1; ++t1) {
      double b2 = 1;
      for (int t2 = 0; t2 <= r2; ++t2) {
        const int vp = t1 + t2;
        const double mom = gauss_moment(vp, a1 + a2);
        if (mom != 0.0) {
          const double sgn = (t1 % 2 == 0) ? 1.0 : -1.0;
          poly[(r1 - t1) + (r2 - t2)] += b1 * b2 * sgn * std::pow(1.0 - csh, r1 - t1) *
                                         std::pow(csh, r2 - t2) * mom;
        }
        b2 = b2 * (r2 - t2) / (t2 + 1);
      }
      b1 = b1 * (r1 - t1) / (t1 + 1);
    }
    return poly;
  };

  for (const auto& [al, c1] : terms_) {
    for (const auto& [be, c2] : g.terms_) {
      // tensor the per-coordinate polynomials into monomial terms
      std::vector<std::vector<double>> polys(2 * d_);
      for (int c = 0; c < 2 * d_; ++c) polys[c] = conv1d(al[c], be[c]);
      Exponent e(2 * d_, 0);
      auto emit = [&](auto&& self, int coord, double coeff) -> void {
        if (coord == 2 * d_) {
          out.add_term(c1 * c2 * coeff, e);
          return;
        }
        for (size_t p = 0; p < polys[coord].size(); ++p) {
          if (polys[coord][p] == 0.0) continue;
          e[coord] = static_cast<int>(p);
          self(self, coord + 1, coeff * polys[coord][p]);
        }
        e[coord] = 0;
      };
      emit(emit, 0, 1.0);
    }
  }
  return out;
}

GaussHermiteFunction HorizontalFunction::tensor_with_s_gaussian(double b) const {
  GaussHermiteFunction f(d_, a_, b);
  for (const auto& [alpha, c] : terms_) {
    GaussHermiteFunction::Exponent e(2 * d_ + 1, 0);
    for (int j = 0; j < 2 * d_; ++j) e[j] = alpha[j];
    f.add_term(c, std::move(e));
  }
  return f;
}

// ---------------------------------------------------------------------------
// G_H
// ---------------------------------------------------------------------------

namespace {

// per-axis circle integral with the Y-Fourier factor in closed form:
// (1/2pi) int e^{-ikz} [int y^p eta^q e^{-a|Y|^2} e^{-i(al y + be eta)} dY] dz
// with al = 2 sqrt|x| sin z, be = 2 sqrt|x| sgn(x) cos z.
complexd gh_axis(const std::map<std::pair<int, int>, complexd>& polys, double a, double xdot,
                 int k, int circle_nodes) {
  const double rt = 2.0 * std::sqrt(std::abs(xdot));
  const double sgn = (xdot > 0) ? 1.0 : ((xdot < 0) ? -1.0 : 0.0);
  const double h = 2.0 * kPi / circle_nodes;
  complexd acc = 0;
  for (int i = 0; i < circle_nodes; ++i) {
    const double z = -kPi + i * h;
    const double al = rt * std::sin(z);
    const double be = rt * sgn * std::cos(z);
    complexd phi = 0;
    for (const auto& [pq, c] : polys)
      phi += c * poly_gauss_fourier(pq.first, a, al) * poly_gauss_fourier(pq.second, a, be);
    acc += phi * std::polar(1.0, -double(k) * z);
  }
  return acc * (h / (2.0 * kPi));
}

} // namespace

complexd gh_transform(const HorizontalFunction& g, const std::vector<double>& xdot,
                      const std::vector<int>& k, const GhOptions& opts) {
  const int d = g.dim();
  if (static_cast<int>(xdot.size()) != d || static_cast<int>(k.size()) != d)
    throw std::invalid_argument("gh_transform: dimension mismatch");
  bool pos = false, neg = false;
  for (double x : xdot) {
    pos |= x > 0;
    neg |= x < 0;
  }
  if (pos && neg) throw std::invalid_argument("gh_transform: xdot has mixed-sign components");

  if (d == 1) {
    std::map<std::pair<int, int>, complexd> polys;
    for (const auto& [alpha, c] : g.terms()) polys[{alpha[0], alpha[1]}] += c;
    return gh_axis(polys, g.width(), xdot[0], k[0], opts.circle_nodes);
  }
  // d >= 2: the kernel tensorizes but a general polynomial does not factor;
  // expand term by term, each term being a product across axes.
  complexd acc = 0;
  for (const auto& [alpha, c] : g.terms()) {
    complexd prod = c;
    for (int ax = 0; ax < d; ++ax) {
      std::map<std::pair<int, int>, complexd> polys{{{alpha[ax], alpha[d + ax]}, 1.0}};
      prod *= gh_axis(polys, g.width(), xdot[ax], k[ax], opts.circle_nodes);
    }
    acc += prod;
  }
  return acc;
}

std::vector<complexd> gh_transform_karray(const HorizontalFunction& g,
                                          const std::vector<double>& xdot, int k_max,
                                          const GhOptions& opts) {
  if (g.dim() != 1) throw std::invalid_argument("gh_transform_karray: d = 1 only");
  std::vector<complexd> out(2 * k_max + 1);
  for (int k = -k_max; k <= k_max; ++k)
    out[k + k_max] = gh_transform(g, xdot, {k}, opts);
  return out;
}

complexd gh_transform_direct(const HorizontalFunction& g, const std::vector<double>& xdot,
                             const std::vector<int>& k, const GhOptions& opts) {
  const int d = g.dim();
  if (static_cast<int>(xdot.size()) != d || static_cast<int>(k.size()) != d)
    throw std::invalid_argument("gh_transform_direct: dimension mismatch");
  const double sa = std::sqrt(g.width());
  const auto rule = make_rule(RuleKind::gauss_hermite, opts.y_nodes);
  KernelEvalSpec kspec;
  kspec.circle_nodes = opts.circle_nodes;
  std::vector<int> idx(2 * d, 0);
  PhasePoint Y = PhasePoint::zero(d);
  complexd acc = 0;
  while (true) {
    double wt = 1;
    for (int j = 0; j < d; ++j) {
      Y.y[j] = rule.nodes[idx[j]] / sa;
      Y.eta[j] = rule.nodes[idx[d + j]] / sa;
      wt *= rule.weights[idx[j]] * rule.weights[idx[d + j]] / g.width();
    }
    complexd poly = 0;
    for (const auto& [alpha, c] : g.terms()) {
      double mono = 1;
      for (int j = 0; j < d; ++j) {
        for (int e = 0; e < alpha[j]; ++e) mono *= Y.y[j];
        for (int e = 0; e < alpha[d + j]; ++e) mono *= Y.eta[j];
      }
      poly += c * mono;
    }
    acc += wt * poly * std::conj(kernel_Kd(xdot, k, Y, kspec));
    int ax = 0;
    while (ax < 2 * d && ++idx[ax] == rule.size()) idx[ax++] = 0;
    if (ax == 2 * d) break;
  }
  return acc;
}

GhConvolveReport gh_convolve_check(const HorizontalFunction& f, const HorizontalFunction& g,
                                   const std::vector<double>& xdot, const std::vector<int>& k,
                                   int k_trunc, const GhOptions& opts) {
  if (f.dim() != 1) throw std::invalid_argument("gh_convolve_check: d = 1 only");
  const HorizontalFunction conv = f.convolve(g);
  const complexd lhs = gh_transform(conv, xdot, k, opts);
  complexd rhs = 0;
  double tail = 0;
  for (int kp = -k_trunc; kp <= k_trunc; ++kp) {
    const complexd t =
        gh_transform(f, xdot, {k[0] - kp}, opts) * gh_transform(g, xdot, {kp}, opts);
    rhs += t;
    if (std::abs(kp) == k_trunc) tail = std::max(tail, std::abs(t));
  }
  return {std::abs(lhs - rhs), 2.0 * tail * (k_trunc + 4)};
}

complexd gh_inverse(const std::function<complexd(const BoundaryPoint&)>& gh_values,
                    const PhasePoint& Y, int k_max, const BoundaryRule& rule,
                    const GhOptions& opts) {
  const int d = Y.dim();
  KernelEvalSpec kspec;
  kspec.circle_nodes = opts.circle_nodes;
  auto integrand = [&](const BoundaryPoint& p) {
    return kernel_Kd(p.xdot, p.k, Y, kspec) * gh_values(p);
  };
  const complexd m = boundary_measure(integrand, k_max, rule, d);
  return std::pow(2.0, d - 1) / std::pow(kPi, d) * m;
}

GhPlancherelCheck gh_plancherel_check(const HorizontalFunction& g, int k_max,
                                      const BoundaryRule& rule, const GhOptions& opts) {
  GhPlancherelCheck out;
  out.lhs = std::abs(g.l2_inner(g));
  auto density = [&](const BoundaryPoint& p) {
    const complexd v = gh_transform(g, p.xdot, p.k, opts);
    return complexd(std::norm(v), 0.0);
  };
  out.rhs = std::pow(2.0, g.dim() - 1) / std::pow(kPi, g.dim()) *
            boundary_measure(density, k_max, rule, g.dim()).real();
  out.ratio = out.lhs / out.rhs;
  return out;
}

GhDecayReport gh_decay_check(const HorizontalFunction& g, int p, const GhOptions& opts) {
  if (g.dim() != 1) throw std::invalid_argument("gh_decay_check: d = 1 only");
  if (p < 0 || p > 3) throw std::invalid_argument("gh_decay_check: p in [0,3]");
  GhDecayReport rep;
  for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 30.0})
    for (int sgn : {-1, 1})
      for (int k = -8; k <= 8; k += 2) {
        const complexd v = gh_transform(g, {sgn * x}, {k}, opts);
        rep.fitted_constant = std::max(
            rep.fitted_constant, std::pow(1.0 + x + std::abs(k), p) * std::abs(v));
      }

  // transfer identities at a representative point
  const double x0 = 2.0;
  const int k0 = 1;
  HorizontalFunction lap = g;
  for (int t = 0; t < p; ++t) lap = lap.laplacian().scaled(-1.0);
  const complexd lhs1 = std::pow(4.0 * x0, p) * gh_transform(g, {x0}, {k0}, opts);
  rep.laplace_transfer_dev = std::abs(lhs1 - gh_transform(lap, {x0}, {k0}, opts));

  HorizontalFunction rot = g;
  for (int t = 0; t < p; ++t) rot = rot.rotation(0);
  const complexd lhs2 =
      std::pow(complexd(0, -double(k0)), p) * gh_transform(g, {x0}, {k0}, opts);
  rep.rotation_transfer_dev = std::abs(lhs2 - gh_transform(rot, {x0}, {k0}, opts));
  return rep;
}

} // namespace hfreq
