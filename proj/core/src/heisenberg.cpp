#include "hfreq/heisenberg.hpp"

#include <cmath>
#include <stdexcept>

namespace hfreq {

namespace {
constexpr double kPi = 3.14159265358979323846;

// int x^k e^{-c x^2} dx, exact.
double gauss_moment(int k, double c) {
  if (k % 2 == 1) return 0.0;
  double v = std::sqrt(kPi / c);
  for (int j = 1; j <= k / 2; ++j) v *= (2.0 * j - 1.0) / (2.0 * c);
  return v;
}
} // namespace

PhasePoint::PhasePoint(std::vector<double> y_, std::vector<double> eta_)
    : y(std::move(y_)), eta(std::move(eta_)) {
  if (y.size() != eta.size()) throw std::invalid_argument("PhasePoint: y/eta size mismatch");
}

PhasePoint PhasePoint::zero(int d) {
  return PhasePoint(std::vector<double>(d, 0.0), std::vector<double>(d, 0.0));
}

double PhasePoint::norm2() const {
  double s = 0;
  for (int j = 0; j < dim(); ++j) s += y[j] * y[j] + eta[j] * eta[j];
  return s;
}

PhasePoint PhasePoint::operator+(const PhasePoint& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("PhasePoint: dimension mismatch");
  PhasePoint r = *this;
  for (int j = 0; j < dim(); ++j) {
    r.y[j] += o.y[j];
    r.eta[j] += o.eta[j];
  }
  return r;
}

PhasePoint PhasePoint::operator-() const {
  PhasePoint r = *this;
  for (int j = 0; j < dim(); ++j) {
    r.y[j] = -r.y[j];
    r.eta[j] = -r.eta[j];
  }
  return r;
}

double symplectic(const PhasePoint& a, const PhasePoint& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("symplectic: dimension mismatch");
  double s = 0;
  for (int j = 0; j < a.dim(); ++j) s += a.eta[j] * b.y[j] - b.eta[j] * a.y[j];
  return s;
}

HeisenbergPoint HeisenbergPoint::identity(int d) { return {PhasePoint::zero(d), 0.0}; }

HeisenbergPoint group_mul(const HeisenbergPoint& w, const HeisenbergPoint& w2) {
  if (w.dim() != w2.dim()) throw std::invalid_argument("group_mul: dimension mismatch");
  return {w.Y + w2.Y, w.s + w2.s + 2.0 * symplectic(w.Y, w2.Y)};
}

HeisenbergPoint group_inverse(const HeisenbergPoint& w) { return {-w.Y, -w.s}; }

GaussHermiteFunction::GaussHermiteFunction(int d, double a, double b) : d_(d), a_(a), b_(b) {
  if (d < 1) throw std::invalid_argument("GaussHermiteFunction: d must be >= 1");
  if (!(a > 0) || !(b > 0))
    throw std::invalid_argument("GaussHermiteFunction: Gaussian widths must be positive");
}

GaussHermiteFunction GaussHermiteFunction::gaussian(int d, double a, double b) {
  GaussHermiteFunction f(d, a, b);
  f.add_term(1.0, Exponent(2 * d + 1, 0));
  return f;
}

int GaussHermiteFunction::max_degree() const {
  int deg = 0;
  for (const auto& [alpha, c] : terms_) {
    int s = 0;
    for (int e : alpha) s += e;
    deg = std::max(deg, s);
  }
  return deg;
}

void GaussHermiteFunction::add_term(complexd c, Exponent alpha) {
  if (static_cast<int>(alpha.size()) != 2 * d_ + 1)
    throw std::invalid_argument("GaussHermiteFunction: exponent size must be 2d+1");
  for (int e : alpha)
    if (e < 0) throw std::invalid_argument("GaussHermiteFunction: negative exponent");
  auto it = terms_.find(alpha);
  if (it == terms_.end()) {
    if (c != 0.0) terms_.emplace(std::move(alpha), c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

complexd GaussHermiteFunction::eval(const HeisenbergPoint& w) const {
  if (w.dim() != d_) throw std::invalid_argument("GaussHermiteFunction::eval: dimension mismatch");
  double r2 = w.Y.norm2();
  const double g = std::exp(-a_ * r2 - b_ * w.s * w.s);
  complexd acc = 0;
  for (const auto& [alpha, c] : terms_) {
    double mono = 1;
    for (int j = 0; j < d_; ++j) {
      for (int e = 0; e < alpha[j]; ++e) mono *= w.Y.y[j];
      for (int e = 0; e < alpha[d_ + j]; ++e) mono *= w.Y.eta[j];
    }
    for (int e = 0; e < alpha[2 * d_]; ++e) mono *= w.s;
    acc += c * mono;
  }
  return acc * g;
}

GaussHermiteFunction GaussHermiteFunction::multiply_coord(int coord) const {
  GaussHermiteFunction out(d_, a_, b_);
  for (const auto& [alpha, c] : terms_) {
    Exponent e = alpha;
    ++e[coord];
    out.add_term(c, std::move(e));
  }
  return out;
}

GaussHermiteFunction GaussHermiteFunction::differentiate(int coord) const {
  GaussHermiteFunction out(d_, a_, b_);
  const double width = (coord == 2 * d_) ? b_ : a_;
  for (const auto& [alpha, c] : terms_) {
    if (alpha[coord] > 0) {
      Exponent e = alpha;
      --e[coord];
      out.add_term(c * double(alpha[coord]), std::move(e));
    }
    Exponent e2 = alpha;
    ++e2[coord];
    out.add_term(-2.0 * width * c, std::move(e2));
  }
  return out;
}

GaussHermiteFunction GaussHermiteFunction::scaled(complexd c) const {
  GaussHermiteFunction out(d_, a_, b_);
  for (const auto& [alpha, coeff] : terms_) out.add_term(c * coeff, alpha);
  return out;
}

GaussHermiteFunction GaussHermiteFunction::operator+(const GaussHermiteFunction& o) const {
  if (d_ != o.d_ || a_ != o.a_ || b_ != o.b_)
    throw std::invalid_argument("GaussHermiteFunction: +/- needs equal widths and dimension");
  GaussHermiteFunction out = *this;
  for (const auto& [alpha, c] : o.terms_) out.add_term(c, alpha);
  return out;
}

GaussHermiteFunction GaussHermiteFunction::operator-(const GaussHermiteFunction& o) const {
  return *this + o.scaled(-1.0);
}

complexd GaussHermiteFunction::integral() const {
  complexd acc = 0;
  for (const auto& [alpha, c] : terms_) {
    double m = gauss_moment(alpha[2 * d_], b_);
    for (int j = 0; j < d_; ++j)
      m *= gauss_moment(alpha[j], a_) * gauss_moment(alpha[d_ + j], a_);
    acc += c * m;
  }
  return acc;
}

complexd GaussHermiteFunction::l2_inner(const GaussHermiteFunction& g) const {
  if (d_ != g.d_) throw std::invalid_argument("l2_inner: dimension mismatch");
  const double ca = a_ + g.a_, cb = b_ + g.b_;
  complexd acc = 0;
  for (const auto& [al, c1] : terms_) {
    for (const auto& [be, c2] : g.terms_) {
      double m = gauss_moment(al[2 * d_] + be[2 * d_], cb);
      for (int j = 0; j < d_; ++j)
        m *= gauss_moment(al[j] + be[j], ca) * gauss_moment(al[d_ + j] + be[d_ + j], ca);
      acc += c1 * std::conj(c2) * m;
    }
  }
  return acc;
}

double GaussHermiteFunction::l2_norm() const { return std::sqrt(std::abs(l2_inner(*this))); }

double GaussHermiteFunction::l1_norm(int nodes_per_axis) const {
  const auto rule = make_rule(RuleKind::gauss_hermite, nodes_per_axis);
  const double sa = std::sqrt(a_), sb = std::sqrt(b_);
  // tensor over 2d+1 axes; weights e^{-a|Y|^2 - b s^2} are the GH weights
  std::vector<int> idx(2 * d_ + 1, 0);
  double acc = 0;
  HeisenbergPoint w = HeisenbergPoint::identity(d_);
  while (true) {
    double wt = 1;
    for (int j = 0; j < d_; ++j) {
      w.Y.y[j] = rule.nodes[idx[j]] / sa;
      w.Y.eta[j] = rule.nodes[idx[d_ + j]] / sa;
      wt *= rule.weights[idx[j]] / sa * rule.weights[idx[d_ + j]] / sa;
    }
    w.s = rule.nodes[idx[2 * d_]] / sb;
    wt *= rule.weights[idx[2 * d_]] / sb;
    // |poly| at the node; the Gaussian is the quadrature weight
    complexd poly = 0;
    for (const auto& [alpha, c] : terms_) {
      double mono = 1;
      for (int j = 0; j < d_; ++j) {
        for (int e = 0; e < alpha[j]; ++e) mono *= w.Y.y[j];
        for (int e = 0; e < alpha[d_ + j]; ++e) mono *= w.Y.eta[j];
      }
      for (int e = 0; e < alpha[2 * d_]; ++e) mono *= w.s;
      poly += c * mono;
    }
    acc += wt * std::abs(poly);
    int ax = 0;
    while (ax < 2 * d_ + 1 && ++idx[ax] == rule.size()) idx[ax++] = 0;
    if (ax == 2 * d_ + 1) break;
  }
  return acc;
}

GaussHermiteFunction vector_field_apply(FieldKind field, int axis,
                                        const GaussHermiteFunction& f) {
  const int d = f.dim();
  if (axis < 0 || axis >= d) throw std::out_of_range("vector_field_apply: bad axis");
  const int yj = axis, ej = d + axis, sc = 2 * d;
  switch (field) {
    case FieldKind::X:
      return f.differentiate(yj) + f.differentiate(sc).multiply_coord(ej).scaled(2.0);
    case FieldKind::Xi:
      return f.differentiate(ej) - f.differentiate(sc).multiply_coord(yj).scaled(2.0);
    case FieldKind::Xtilde:
      return f.differentiate(yj) - f.differentiate(sc).multiply_coord(ej).scaled(2.0);
    case FieldKind::Xitilde:
      return f.differentiate(ej) + f.differentiate(sc).multiply_coord(yj).scaled(2.0);
    case FieldKind::S:
      return f.differentiate(sc);
    case FieldKind::T:
      return f.differentiate(yj).multiply_coord(ej) - f.differentiate(ej).multiply_coord(yj);
  }
  throw std::logic_error("vector_field_apply: unknown field");
}

GaussHermiteFunction sublaplacian(const GaussHermiteFunction& f) {
  GaussHermiteFunction acc(f.dim(), f.width_y(), f.width_s());
  for (int j = 0; j < f.dim(); ++j) {
    acc = acc + vector_field_apply(FieldKind::X, j, vector_field_apply(FieldKind::X, j, f));
    acc = acc + vector_field_apply(FieldKind::Xi, j, vector_field_apply(FieldKind::Xi, j, f));
  }
  return acc;
}

namespace {

ConvolveResult convolve_impl(const GaussHermiteFunction& f, const GaussHermiteFunction& g,
                             const HeisenbergPoint& w, int nodes, bool first_form) {
  // first form: int f(w v^{-1}) g(v) dv with nodes scaled to g's widths;
  // second form: int f(v) g(v^{-1} w) dv with nodes scaled to f's widths.
  const GaussHermiteFunction& at_nodes = first_form ? g : f;
  const auto rule = make_rule(RuleKind::gauss_hermite, nodes);
  const double sa = std::sqrt(at_nodes.width_y());
  const double sb = std::sqrt(at_nodes.width_s());
  complexd acc = 0;
  HeisenbergPoint v = HeisenbergPoint::identity(1);
  for (int iy = 0; iy < rule.size(); ++iy) {
    v.Y.y[0] = rule.nodes[iy] / sa;
    for (int ie = 0; ie < rule.size(); ++ie) {
      v.Y.eta[0] = rule.nodes[ie] / sa;
      const double wye = rule.weights[iy] * rule.weights[ie] / (sa * sa);
      for (int is = 0; is < rule.size(); ++is) {
        v.s = rule.nodes[is] / sb;
        const double wt = wye * rule.weights[is] / sb;
        // the Gaussian of `at_nodes` is the quadrature weight; divide it out
        const double peel =
            std::exp(at_nodes.width_y() * v.Y.norm2() + at_nodes.width_s() * v.s * v.s);
        complexd val;
        if (first_form)
          val = f.eval(group_mul(w, group_inverse(v))) * g.eval(v);
        else
          val = f.eval(v) * g.eval(group_mul(group_inverse(v), w));
        acc += wt * peel * val;
      }
    }
  }
  return {acc, 0.0, true};
}

} // namespace

ConvolveResult group_convolve(const GaussHermiteFunction& f, const GaussHermiteFunction& g,
                              const HeisenbergPoint& w, const ConvolveOptions& opts) {
  if (f.dim() != 1 || g.dim() != 1 || w.dim() != 1)
    throw std::invalid_argument("group_convolve: only d = 1 is supported at this scale");
  ConvolveResult res = convolve_impl(f, g, w, opts.nodes_per_axis, true);
  if (opts.check_doubling) {
    const ConvolveResult fine = convolve_impl(f, g, w, 2 * opts.nodes_per_axis, true);
    res.doubling_shift = std::abs(fine.value - res.value);
    res.converged = res.doubling_shift <= 10.0 * opts.tolerance;
    res.value = fine.value;
  }
  return res;
}

ConvolveResult group_convolve_alt(const GaussHermiteFunction& f, const GaussHermiteFunction& g,
                                  const HeisenbergPoint& w, const ConvolveOptions& opts) {
  if (f.dim() != 1 || g.dim() != 1 || w.dim() != 1)
    throw std::invalid_argument("group_convolve: only d = 1 is supported at this scale");
  return convolve_impl(f, g, w, opts.nodes_per_axis, false);
}

double seminorm(const GaussHermiteFunction& f, int N) {
  if (N < 0) throw std::invalid_argument("seminorm: N must be >= 0");
  const int d = f.dim();
  const int ncoord = 2 * d + 1;

  // all derivative multi-indices with |alpha| <= N
  std::vector<std::vector<int>> alphas;
  std::vector<int> cur(ncoord, 0);
  auto rec = [&](auto&& self, int coord, int left) -> void {
    if (coord == ncoord) {
      alphas.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[coord] = k;
      self(self, coord + 1, left - k);
    }
    cur[coord] = 0;
  };
  rec(rec, 0, N);

  // box radius where the Gaussian tail dominates the polynomial growth
  const double wmin = std::min(f.width_y(), f.width_s());
  const double R = std::sqrt((f.max_degree() + N + 25.0) / wmin);

  double best = 0;
  for (const auto& alpha : alphas) {
    GaussHermiteFunction g = f;
    for (int c = 0; c < ncoord; ++c)
      for (int k = 0; k < alpha[c]; ++k) g = g.differentiate(c);

    auto weighted = [&](const HeisenbergPoint& w) {
      const double r2 = w.Y.norm2() + w.s * w.s;
      return std::abs(g.eval(w)) * std::pow(1.0 + r2, N / 2.0);
    };

    // coarse grid then one local refinement pass
    const int grid = 13;
    HeisenbergPoint wbest = HeisenbergPoint::identity(d);
    double loc = 0;
    std::vector<int> idx(ncoord, 0);
    HeisenbergPoint w = HeisenbergPoint::identity(d);
    while (true) {
      for (int j = 0; j < d; ++j) {
        w.Y.y[j] = -R + 2.0 * R * idx[j] / (grid - 1);
        w.Y.eta[j] = -R + 2.0 * R * idx[d + j] / (grid - 1);
      }
      w.s = -R + 2.0 * R * idx[2 * d] / (grid - 1);
      const double v = weighted(w);
      if (v > loc) {
        loc = v;
        wbest = w;
      }
      int ax = 0;
      while (ax < ncoord && ++idx[ax] == grid) idx[ax++] = 0;
      if (ax == ncoord) break;
    }
    double step = 2.0 * R / (grid - 1);
    for (int pass = 0; pass < 24; ++pass) {
      bool moved = false;
      for (int c = 0; c < ncoord; ++c) {
        for (double sgn : {-1.0, 1.0}) {
          HeisenbergPoint wt = wbest;
          double* slot = (c < d) ? &wt.Y.y[c] : (c < 2 * d) ? &wt.Y.eta[c - d] : &wt.s;
          *slot += sgn * step;
          const double v = weighted(wt);
          if (v > loc) {
            loc = v;
            wbest = wt;
            moved = true;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, loc);
  }
  return best;
}

} // namespace hfreq
