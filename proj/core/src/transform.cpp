#include "hfreq/transform.hpp"

#include "hfreq/kernel.hpp"
#include "hfreq/parallel.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hfreq {

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

// ---------------------------------------------------------------------------
// parallel utility
// ---------------------------------------------------------------------------

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n); }

int max_threads() {
  const int n = g_max_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int nt = std::min(n, max_threads());
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// SpectralField basics
// ---------------------------------------------------------------------------

complexd& SpectralField::at(int l, int rn, int rm) {
  const int ns = states();
  return values[(size_t(l) * ns + rn) * ns + rm];
}

complexd SpectralField::at(int l, int rn, int rm) const {
  const int ns = states();
  return values[(size_t(l) * ns + rn) * ns + rm];
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (values.size() != o.values.size())
    throw std::invalid_argument("SpectralField: size mismatch");
  for (size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

SpectralField& SpectralField::operator*=(complexd c) {
  for (auto& v : values) v *= c;
  return *this;
}

std::string function_digest(const GaussHermiteFunction& f) {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const void* p, size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  const int d = f.dim();
  mix(&d, sizeof d);
  const double a = f.width_y(), b = f.width_s();
  mix(&a, sizeof a);
  mix(&b, sizeof b);
  for (const auto& [alpha, c] : f.terms()) {
    for (int e : alpha) mix(&e, sizeof e);
    const double re = c.real(), im = c.imag();
    mix(&re, sizeof re);
    mix(&im, sizeof im);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

// ---------------------------------------------------------------------------
// closed-form s integral: int s^k e^{-b s^2} e^{-i s lambda} ds
// ---------------------------------------------------------------------------

namespace {

// ---------------------------------------------------------------------------
// ladder fast path: the Y-pairing P_{ij}(n, m) per axis
//
// P_{ij}(n,m) = int y^i eta^j conj(W(n,m,lambda,Y)) e^{-a |Y|^2} dY (1-D axis)
// Seed (i=j=0): diag pi/(a+|lam|) rho^n with rho = (a-|lam|)/(a+|lam|).
// Multiplying the integrand by y or eta shifts (n, m) through the ladder
// relations of the Hermite factors inside W; integrating the eta power by
// parts closes the recursion.
// ---------------------------------------------------------------------------

struct Pmatrix {
  int size = 0; // rows = cols
  std::vector<complexd> v;
  complexd& at(int n, int m) { return v[size_t(n) * size + m]; }
  complexd at(int n, int m) const { return v[size_t(n) * size + m]; }
};

// Q = sqrt(2n) P(n-1,m) + sqrt(2n+2) P(n+1,m)
//     + sgn (sqrt(2m) P(n,m-1) + sqrt(2m+2) P(n,m+1)), edges dropped
Pmatrix shift_mix(const Pmatrix& P, double sgn) {
  Pmatrix Q;
  Q.size = P.size;
  Q.v.assign(P.v.size(), complexd(0));
  const int N = P.size;
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) {
      complexd acc = 0;
      if (n > 0) acc += std::sqrt(2.0 * n) * P.at(n - 1, m);
      if (n + 1 < N) acc += std::sqrt(2.0 * n + 2.0) * P.at(n + 1, m);
      if (m > 0) acc += sgn * std::sqrt(2.0 * m) * P.at(n, m - 1);
      if (m + 1 < N) acc += sgn * std::sqrt(2.0 * m + 2.0) * P.at(n, m + 1);
      Q.at(n, m) = acc;
    }
  return Q;
}

// P_{ij} on [0, n_max]^2; the working matrix carries i+j guard rows so the
// dropped edges never contaminate the cropped block.
Pmatrix p_matrix(int i, int j, double a, double lambda, int n_max) {
  const int pad = i + j;
  const int M = n_max + pad + 1;
  Pmatrix P;
  P.size = M;
  P.v.assign(size_t(M) * M, complexd(0));
  const double al = std::abs(lambda);
  const double rho = (a - al) / (a + al);
  double rp = kPi / (a + al);
  for (int n = 0; n < M; ++n) {
    P.at(n, n) = rp;
    rp *= rho;
  }
  const double sgn_lam = (lambda > 0) ? 1.0 : -1.0;
  for (int t = 0; t < i; ++t) {
    Pmatrix Q = shift_mix(P, -1.0);
    const double c = 1.0 / (4.0 * std::sqrt(al));
    for (auto& z : Q.v) z *= c;
    P = std::move(Q);
  }
  Pmatrix prev; // P_{i, jj-1}
  for (int jj = 0; jj < j; ++jj) {
    Pmatrix Q = shift_mix(P, +1.0);
    const complexd c = complexd(0, -1) * sgn_lam * std::sqrt(al) / (4.0 * a);
    for (auto& z : Q.v) z *= c;
    if (jj >= 1) {
      const double cj = double(jj) / (2.0 * a);
      for (size_t t = 0; t < Q.v.size(); ++t) Q.v[t] += cj * prev.v[t];
    }
    prev = std::move(P);
    P = std::move(Q);
  }
  Pmatrix out;
  out.size = n_max + 1;
  out.v.resize(size_t(out.size) * out.size);
  for (int n = 0; n <= n_max; ++n)
    for (int m = 0; m <= n_max; ++m) out.at(n, m) = P.at(n, m);
  return out;
}

// dense (NS x NS) slice of f^ at one lambda node
void forward_slice(const GaussHermiteFunction& f, const FrequencyGrid& grid, double lambda,
                   std::vector<complexd>& slice) {
  const int d = f.dim();
  const int ns = grid.states_per_side();
  const int nn = grid.n_max + 1;
  slice.assign(size_t(ns) * ns, complexd(0));

  for (const auto& [alpha, c] : f.terms()) {
    const complexd sfac = c * poly_gauss_fourier(alpha[2 * d], f.width_s(), lambda);
    if (sfac == complexd(0)) continue;
    // per-axis P matrices for this term
    std::vector<Pmatrix> pax(d);
    for (int ax = 0; ax < d; ++ax)
      pax[ax] = p_matrix(alpha[ax], alpha[d + ax], f.width_y(), lambda, grid.n_max);
    if (d == 1) {
      for (int n = 0; n < nn; ++n)
        for (int m = 0; m < nn; ++m) slice[size_t(n) * ns + m] += sfac * pax[0].at(n, m);
    } else {
      for (int rn = 0; rn < ns; ++rn) {
        const int n0 = rn % nn, n1 = rn / nn;
        for (int rm = 0; rm < ns; ++rm) {
          const int m0 = rm % nn, m1 = rm / nn;
          slice[size_t(rn) * ns + rm] += sfac * pax[0].at(n0, m0) * pax[1].at(n1, m1);
        }
      }
    }
  }
}

} // namespace

// ---------------------------------------------------------------------------
// forward transforms
// ---------------------------------------------------------------------------

complexd forward_point(const GaussHermiteFunction& f, const FrequencyPoint& w,
                       const ForwardOptions& opts) {
  const int d = f.dim();
  if (w.dim() != d) throw std::invalid_argument("forward_point: dimension mismatch");
  const double a = f.width_y();
  const double sa = std::sqrt(a);
  int nodes = opts.y_nodes;
  if (nodes <= 0) {
    const int deg = w.n.order() + w.m.order();
    nodes = 48 + deg +
            static_cast<int>(std::ceil(2.0 * std::abs(w.lambda) * (deg + 2.0) / a));
    nodes = std::min(((nodes + 15) / 16) * 16, 400);
  }
  const auto rule = make_rule(RuleKind::gauss_hermite, nodes);

  WignerEvalSpec wspec;
  wspec.method = WignerMethod::quadrature;

  // tensor GH over the 2d phase-space axes; weight e^{-a |Y|^2}
  std::vector<int> idx(2 * d, 0);
  PhasePoint Y = PhasePoint::zero(d);
  complexd acc = 0;
  while (true) {
    double wt = 1;
    for (int j = 0; j < d; ++j) {
      Y.y[j] = rule.nodes[idx[j]] / sa;
      Y.eta[j] = rule.nodes[idx[d + j]] / sa;
      wt *= rule.weights[idx[j]] * rule.weights[idx[d + j]] / a;
    }
    complexd poly = 0;
    for (const auto& [alpha, c] : f.terms()) {
      double mono = 1;
      for (int j = 0; j < d; ++j) {
        for (int e = 0; e < alpha[j]; ++e) mono *= Y.y[j];
        for (int e = 0; e < alpha[d + j]; ++e) mono *= Y.eta[j];
      }
      poly += c * poly_gauss_fourier(alpha[2 * d], f.width_s(), w.lambda) * mono;
    }
    acc += wt * poly * std::conj(wigner_w(w, Y, wspec));
    int ax = 0;
    while (ax < 2 * d && ++idx[ax] == rule.size()) idx[ax++] = 0;
    if (ax == 2 * d) break;
  }
  return acc;
}

complexd forward_point(const GaussHermiteFunction& f, const BoundaryPoint& p, int y_nodes) {
  const int d = f.dim();
  if (p.dim() != d) throw std::invalid_argument("forward_point: dimension mismatch");
  const double a = f.width_y(), sa = std::sqrt(a);
  const auto rule = make_rule(RuleKind::gauss_hermite, y_nodes);
  KernelEvalSpec kspec;
  std::vector<int> idx(2 * d, 0);
  PhasePoint Y = PhasePoint::zero(d);
  complexd acc = 0;
  while (true) {
    double wt = 1;
    for (int j = 0; j < d; ++j) {
      Y.y[j] = rule.nodes[idx[j]] / sa;
      Y.eta[j] = rule.nodes[idx[d + j]] / sa;
      wt *= rule.weights[idx[j]] * rule.weights[idx[d + j]] / a;
    }
    complexd poly = 0;
    for (const auto& [alpha, c] : f.terms()) {
      // lambda = 0: plain Gaussian moment in s
      const int ks = alpha[2 * d];
      double smom = 0;
      if (ks % 2 == 0) {
        smom = std::sqrt(kPi / f.width_s());
        for (int t = 1; t <= ks / 2; ++t) smom *= (2.0 * t - 1.0) / (2.0 * f.width_s());
      }
      if (smom == 0) continue;
      double mono = 1;
      for (int j = 0; j < d; ++j) {
        for (int e = 0; e < alpha[j]; ++e) mono *= Y.y[j];
        for (int e = 0; e < alpha[d + j]; ++e) mono *= Y.eta[j];
      }
      poly += c * smom * mono;
    }
    acc += wt * poly * std::conj(kernel_Kd(p.xdot, p.k, Y, kspec));
    int ax = 0;
    while (ax < 2 * d && ++idx[ax] == rule.size()) idx[ax++] = 0;
    if (ax == 2 * d) break;
  }
  return acc;
}

void forward_field_stream(const GaussHermiteFunction& f, const FrequencyGrid& grid,
                          const std::function<void(int, const std::vector<complexd>&)>& sink) {
  if (f.dim() != grid.d) throw std::invalid_argument("forward_field: dimension mismatch");
  std::vector<complexd> slice;
  for (int l = 0; l < grid.lambda_count(); ++l) {
    forward_slice(f, grid, grid.lambda_nodes[l], slice);
    sink(l, slice);
  }
}

SpectralField forward_field(const GaussHermiteFunction& f, const FrequencyGrid& grid,
                            const ForwardOptions& opts) {
  if (f.dim() != grid.d) throw std::invalid_argument("forward_field: dimension mismatch");
  SpectralField F;
  F.grid = grid;
  const int ns = grid.states_per_side();
  F.values.assign(size_t(grid.lambda_count()) * ns * ns, complexd(0));
  F.source_digest = function_digest(f);
  if (opts.compute_l1) F.l1_bound = f.l1_norm();
  parallel_for(grid.lambda_count(), [&](int l) {
    std::vector<complexd> slice;
    forward_slice(f, grid, grid.lambda_nodes[l], slice);
    std::memcpy(&F.values[size_t(l) * ns * ns], slice.data(), sizeof(complexd) * slice.size());
  });
  return F;
}

// ---------------------------------------------------------------------------
// inversion / Plancherel
// ---------------------------------------------------------------------------

complexd inverse_point(const SpectralField& F, const HeisenbergPoint& w) {
  const auto& grid = F.grid;
  if (w.dim() != grid.d) throw std::invalid_argument("inverse_point: dimension mismatch");
  const int ns = grid.states_per_side();
  const int nn = grid.n_max + 1;

  std::vector<complexd> partial(grid.lambda_count());
  parallel_for(grid.lambda_count(), [&](int l) {
    const double lam = grid.lambda_nodes[l];
    // W(n,m,lam,Y) for all pairs, one axis at a time
    std::vector<std::vector<complexd>> wax(grid.d);
    for (int ax = 0; ax < grid.d; ++ax)
      wigner_all_1d(grid.n_max, lam, w.Y.y[ax], w.Y.eta[ax], wax[ax]);
    complexd s = 0;
    for (int rn = 0; rn < ns; ++rn)
      for (int rm = 0; rm < ns; ++rm) {
        complexd wig = 1;
        int tn = rn, tm = rm;
        for (int ax = 0; ax < grid.d; ++ax) {
          wig *= wax[ax][size_t(tn % nn) * nn + (tm % nn)];
          tn /= nn;
          tm /= nn;
        }
        s += wig * F.at(l, rn, rm);
      }
    partial[l] = s * grid.lambda_weights[l] * std::pow(std::abs(lam), grid.d) *
                 std::polar(1.0, w.s * lam);
  });
  complexd acc = 0;
  for (const complexd& p : partial) acc += p;
  const double cst = std::pow(2.0, grid.d - 1) / std::pow(kPi, grid.d + 1);
  return cst * acc;
}

double plancherel(const SpectralField& F) {
  const auto& grid = F.grid;
  const int ns = grid.states_per_side();
  double acc = 0;
  for (int l = 0; l < grid.lambda_count(); ++l) {
    double s = 0;
    const complexd* slice = &F.values[size_t(l) * ns * ns];
    for (int t = 0; t < ns * ns; ++t) s += std::norm(slice[t]);
    acc += grid.lambda_weights[l] * std::pow(std::abs(grid.lambda_nodes[l]), grid.d) * s;
  }
  return acc;
}

PlancherelCheck plancherel_check(const GaussHermiteFunction& f, const FrequencyGrid& grid) {
  if (f.dim() != grid.d) throw std::invalid_argument("plancherel_check: dimension mismatch");
  std::vector<double> partial(grid.lambda_count());
  parallel_for(grid.lambda_count(), [&](int l) {
    std::vector<complexd> slice;
    forward_slice(f, grid, grid.lambda_nodes[l], slice);
    double s = 0;
    for (const complexd& v : slice) s += std::norm(v);
    partial[l] = grid.lambda_weights[l] * std::pow(std::abs(grid.lambda_nodes[l]), grid.d) * s;
  });
  PlancherelCheck out;
  for (double p : partial) out.lhs += p;
  const double cst = std::pow(kPi, grid.d + 1) / std::pow(2.0, grid.d - 1);
  out.rhs = cst * std::abs(f.l2_inner(f));
  out.ratio = out.lhs / out.rhs;
  return out;
}

FrequencyGrid plancherel_default_grid(int d) {
  if (d == 1) return FrequencyGrid::make(1, 320, 1.5e-4, 10.0, 20, 14);
  return FrequencyGrid::make(2, 48, 1e-3, 8.0, 12, 12);
}

// ---------------------------------------------------------------------------
// spectral convolution and diagonalization
// ---------------------------------------------------------------------------

SpectralField spectral_convolve(const SpectralField& F, const SpectralField& G) {
  const auto& grid = F.grid;
  if (grid.d != G.grid.d || grid.n_max != G.grid.n_max ||
      grid.lambda_count() != G.grid.lambda_count() ||
      grid.lambda_nodes != G.grid.lambda_nodes)
    throw std::invalid_argument("spectral_convolve: grid mismatch");
  const int ns = grid.states_per_side();
  SpectralField C;
  C.grid = grid;
  C.values.assign(F.values.size(), complexd(0));
  C.source_digest = F.source_digest + "*" + G.source_digest;
  if (F.l1_bound > 0 && G.l1_bound > 0)
    C.l1_bound = F.l1_bound * G.l1_bound; // Young's inequality

  double tail = 0;
  for (int l = 0; l < grid.lambda_count(); ++l) {
    for (int rn = 0; rn < ns; ++rn)
      for (int rm = 0; rm < ns; ++rm) {
        complexd s = 0;
        for (int rl = 0; rl < ns; ++rl) s += F.at(l, rn, rl) * G.at(l, rl, rm);
        C.at(l, rn, rm) = s;
      }
    // Cauchy-Schwarz tail: the part of the l-sum beyond the box is bounded by
    // sqrt(||f||_1^2 - row) sqrt(||g||_1^2 - col)
    if (F.l1_bound > 0 && G.l1_bound > 0) {
      for (int rn = 0; rn < ns; ++rn) {
        double row = 0;
        for (int rl = 0; rl < ns; ++rl) row += std::norm(F.at(l, rn, rl));
        for (int rm = 0; rm < ns; ++rm) {
          double col = 0;
          for (int rl = 0; rl < ns; ++rl) col += std::norm(G.at(l, rl, rm));
          const double fr = std::max(0.0, F.l1_bound * F.l1_bound - row);
          const double gc = std::max(0.0, G.l1_bound * G.l1_bound - col);
          tail = std::max(tail, std::sqrt(fr) * std::sqrt(gc));
        }
      }
    }
  }
  C.conv_tail_bound = (F.l1_bound > 0 && G.l1_bound > 0)
                          ? tail
                          : std::numeric_limits<double>::quiet_NaN();
  return C;
}

double diag_check(const GaussHermiteFunction& f, const FrequencyGrid& grid) {
  const SpectralField Ff = forward_field(f, grid, {.compute_l1 = false});
  const SpectralField Fl = forward_field(sublaplacian(f), grid, {.compute_l1 = false});
  const int ns = grid.states_per_side();
  double worst = 0;
  for (int l = 0; l < grid.lambda_count(); ++l) {
    const double lam = std::abs(grid.lambda_nodes[l]);
    for (int rm = 0; rm < ns; ++rm) {
      const int morder = grid.unrank(rm).order();
      const double mult = 4.0 * lam * (2.0 * morder + grid.d);
      for (int rn = 0; rn < ns; ++rn) {
        const complexd fv = Ff.at(l, rn, rm);
        const double dev = std::abs(Fl.at(l, rn, rm) + mult * fv) / (1.0 + std::abs(fv));
        worst = std::max(worst, dev);
      }
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// transform of a direct group convolution (d = 1)
// ---------------------------------------------------------------------------

namespace {

// polynomial factor of the s'-integral of the twisted s-convolution,
// int (u - s')^{k1} s'^{k2} e^{-b1 (u-s')^2 - b2 s'^2} ds' = poly(u) e^{-beta u^2}
// with beta = b1 b2 / (b1 + b2); the Gaussian in u joins the Y' quadratic form
double s_conv_poly(int k1, int k2, double b1, double b2, double u) {
  const double bs = b1 + b2;
  const double cshift = b1 / bs; // s' = v + cshift u
  double acc = 0;
  const double A = (1.0 - cshift) * u, B = cshift * u;
  double binom1 = 1;
  for (int t1 = 0; t1 <= k1; ++t1) { // choose v^t1 from (A - v)^{k1}
    double binom2 = 1;
    for (int t2 = 0; t2 <= k2; ++t2) {
      const int vp = t1 + t2;
      if (vp % 2 == 0) {
        double mom = std::sqrt(kPi / bs);
        for (int r = 1; r <= vp / 2; ++r) mom *= (2.0 * r - 1.0) / (2.0 * bs);
        const double sgn = (t1 % 2 == 0) ? 1.0 : -1.0;
        acc += binom1 * binom2 * sgn * std::pow(A, k1 - t1) * std::pow(B, k2 - t2) * mom;
      }
      binom2 = binom2 * (k2 - t2) / (t2 + 1);
    }
    binom1 = binom1 * (k1 - t1) / (t1 + 1);
  }
  return acc;
}

} // namespace

SpectralField forward_field_of_convolution(const GaussHermiteFunction& f,
                                           const GaussHermiteFunction& g,
                                           const FrequencyGrid& grid,
                                           const ConvolutionTransformOptions& opts) {
  if (f.dim() != 1 || g.dim() != 1 || grid.d != 1)
    throw std::invalid_argument("forward_field_of_convolution: d = 1 only");
  const double a1 = f.width_y(), a2 = g.width_y();
  const double b1 = f.width_s(), b2 = g.width_s();
  const double abar = a1 * a2 / (a1 + a2); // rigorous Y-envelope of f*g

  const auto yrule = make_rule(RuleKind::gauss_hermite, opts.y_nodes);
  const auto srule = make_rule(RuleKind::gauss_legendre, opts.s_nodes,
                               std::make_pair(-opts.s_halfwidth, opts.s_halfwidth));
  const auto vrule = make_rule(RuleKind::gauss_hermite, opts.conv_nodes);
  const double sab = std::sqrt(abar);

  const int NY = yrule.size(), NS = srule.size(), NV = vrule.size();

  // convolution table C(y, eta, s) with the Y-envelope peeled off:
  // C = int f((Y,s) (Y',s')^{-1}) g(Y',s') dY' ds', the s' integral in closed
  // form. The full Gaussian in Y' (including the twist beta (s - 2 sigma)^2)
  // is completed to a quadratic form and the inner rule is centered and
  // rotated onto it, so only the polynomial factor is left to the nodes.
  const double beta = b1 * b2 / (b1 + b2);
  std::vector<complexd> table(size_t(NY) * NY * NS);
  parallel_for(NY * NY, [&](int yy) {
    const int iy = yy / NY, ie = yy % NY;
    const double y = yrule.nodes[iy] / sab, eta = yrule.nodes[ie] / sab;
    // Y' quadratic form M = (a1+a2) I + beta b b^T, b = (-2 eta, 2 y)
    const double asum = a1 + a2;
    const double bx = -2.0 * eta, by = 2.0 * y;
    const double bb = bx * bx + by * by;
    const double mu1 = asum + beta * bb, mu2 = asum; // along b and across
    double e1x = 1, e1y = 0;                         // unit vector along b
    if (bb > 1e-30) {
      e1x = bx / std::sqrt(bb);
      e1y = by / std::sqrt(bb);
    }
    for (int is = 0; is < NS; ++is) {
      const double s = srule.nodes[is];
      // exponent a1 |Y - v|^2 + a2 |v|^2 + beta (s + b.v)^2
      //        = (v - v0)^T M (v - v0) + E0
      const double Lx = -2.0 * a1 * y + 2.0 * beta * s * bx;
      const double Ly = -2.0 * a1 * eta + 2.0 * beta * s * by;
      // v0 = -M^{-1} L / 2 via Sherman-Morrison
      const double Lb = Lx * bx + Ly * by;
      const double minvLx = Lx / asum - beta * bx * Lb / (asum * mu1);
      const double minvLy = Ly / asum - beta * by * Lb / (asum * mu1);
      const double v0x = -0.5 * minvLx, v0y = -0.5 * minvLy;
      const double E0 = a1 * (y * y + eta * eta) + beta * s * s -
                        0.25 * (Lx * minvLx + Ly * minvLy);
      const double scale = std::exp(abar * (y * y + eta * eta) - E0) /
                           std::sqrt(mu1 * mu2);
      complexd acc = 0;
      for (int jy = 0; jy < NV; ++jy) {
        const double t1 = vrule.nodes[jy] / std::sqrt(mu1);
        for (int je = 0; je < NV; ++je) {
          const double t2 = vrule.nodes[je] / std::sqrt(mu2);
          const double wv = vrule.weights[jy] * vrule.weights[je];
          const double yp = v0x + t1 * e1x - t2 * e1y;
          const double ep = v0y + t1 * e1y + t2 * e1x;
          const double dy = y - yp, de = eta - ep;
          const double u = s + bx * yp + by * ep; // s - 2 sigma(Y, Y')
          complexd val = 0;
          for (const auto& [af, cf] : f.terms()) {
            double mf = 1;
            for (int e = 0; e < af[0]; ++e) mf *= dy;
            for (int e = 0; e < af[1]; ++e) mf *= de;
            for (const auto& [ag, cg] : g.terms()) {
              double mg = 1;
              for (int e = 0; e < ag[0]; ++e) mg *= yp;
              for (int e = 0; e < ag[1]; ++e) mg *= ep;
              val += cf * cg * mf * mg * s_conv_poly(af[2], ag[2], b1, b2, u);
            }
          }
          acc += wv * val;
        }
      }
      // stored with the abar envelope peeled: integrand = table e^{-abar |Y|^2}
      table[(size_t(iy) * NY + ie) * NS + is] = acc * scale;
    }
  });

  // transform: per lambda, contract s, then eta, then the Hermite sweep in t
  SpectralField F;
  F.grid = grid;
  const int nn = grid.n_max + 1;
  F.values.assign(size_t(grid.lambda_count()) * nn * nn, complexd(0));
  F.source_digest = function_digest(f) + "*" + function_digest(g);

  parallel_for(grid.lambda_count(), [&](int l) {
    const double lam = grid.lambda_nodes[l];
    const double rt = std::sqrt(std::abs(lam));
    const double sgn = (lam > 0) ? 1.0 : -1.0;
    const int nq = nn + static_cast<int>(std::ceil(
                            2.0 * std::abs(lam) *
                            (2.0 * yrule.nodes.back() * yrule.nodes.back() / abar))) +
                   32;
    const auto trule = make_rule(RuleKind::gauss_hermite, std::min(nq, 520));
    const int NT = trule.size();
    std::vector<complexd> seta(NS);
    std::vector<complexd> dvec(NT);
    std::vector<double> pn(nn), pm(nn);
    complexd* slice = &F.values[size_t(l) * nn * nn];
    std::vector<double> ppn, ppm;
    for (int iy = 0; iy < NY; ++iy) {
      const double y = yrule.nodes[iy] / sab;
      const double wy = yrule.weights[iy] / sab;
      const double c = rt * y;
      // D(t) = sum_eta w_eta e^{-i Omega(eta) t} [sum_s w_s C e^{-i s lam}]
      std::fill(dvec.begin(), dvec.end(), complexd(0));
      for (int ie = 0; ie < NY; ++ie) {
        const double eta = yrule.nodes[ie] / sab;
        const double we = yrule.weights[ie] / sab;
        complexd cs = 0;
        const complexd* col = &table[(size_t(iy) * NY + ie) * NS];
        for (int is = 0; is < NS; ++is)
          cs += srule.weights[is] * col[is] * std::polar(1.0, -srule.nodes[is] * lam);
        const double omega = 2.0 * sgn * rt * eta;
        for (int k = 0; k < NT; ++k)
          dvec[k] += we * cs * std::polar(1.0, -omega * trule.nodes[k]);
      }
      // conj W sweep: conj terms e^{-i Omega t} p_n(t+c) p_m(t-c) e^{-c^2}
      const double damp = std::exp(-c * c) * wy;
      for (int k = 0; k < NT; ++k) {
        const double t = trule.nodes[k];
        ppn.assign(nn, 0.0);
        ppm.assign(nn, 0.0);
        ppn[0] = std::pow(kPi, -0.25);
        ppm[0] = ppn[0];
        if (nn > 1) {
          ppn[1] = std::sqrt(2.0) * (t + c) * ppn[0];
          ppm[1] = std::sqrt(2.0) * (t - c) * ppm[0];
        }
        for (int q = 1; q + 1 < nn; ++q) {
          ppn[q + 1] = (2.0 * (t + c) * ppn[q] - std::sqrt(2.0 * q) * ppn[q - 1]) /
                       std::sqrt(2.0 * q + 2.0);
          ppm[q + 1] = (2.0 * (t - c) * ppm[q] - std::sqrt(2.0 * q) * ppm[q - 1]) /
                       std::sqrt(2.0 * q + 2.0);
        }
        const complexd wk = trule.weights[k] * damp * dvec[k];
        for (int n = 0; n < nn; ++n) {
          const complexd wn = wk * ppn[n];
          for (int m = 0; m < nn; ++m) slice[size_t(n) * nn + m] += wn * ppm[m];
        }
      }
    }
  });
  return F;
}

std::vector<complexd> wigner_pairing_matrix(int i, int j, double a, double lambda, int n_max) {
  if (i < 0 || j < 0 || n_max < 0 || !(a > 0) || lambda == 0.0)
    throw std::invalid_argument("wigner_pairing_matrix: bad arguments");
  return p_matrix(i, j, a, lambda, n_max).v;
}

// ---------------------------------------------------------------------------
// CSV round trip
// ---------------------------------------------------------------------------

namespace {
std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
} // namespace

void write_field_csv(const SpectralField& F, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
  const auto& g = F.grid;
  out << "# hfreq-spectral-field d=" << g.d << " n_max=" << g.n_max
      << " lambda_min=" << fmt17(g.lambda_min) << " lambda_max=" << fmt17(g.lambda_max)
      << " panels=" << g.panels << " nodes_per_panel=" << g.nodes_per_panel
      << " digest=" << (F.source_digest.empty() ? "-" : F.source_digest)
      << " l1=" << fmt17(F.l1_bound) << "\n";
  for (int j = 0; j < g.d; ++j) out << "n" << (j + 1) << ",";
  for (int j = 0; j < g.d; ++j) out << "m" << (j + 1) << ",";
  out << "lambda,re,im\n";
  const int ns = g.states_per_side();
  for (int l = 0; l < g.lambda_count(); ++l)
    for (int rn = 0; rn < ns; ++rn) {
      const MultiIndex n = g.unrank(rn);
      for (int rm = 0; rm < ns; ++rm) {
        const MultiIndex m = g.unrank(rm);
        for (int j = 0; j < g.d; ++j) out << n[j] << ",";
        for (int j = 0; j < g.d; ++j) out << m[j] << ",";
        const complexd v = F.at(l, rn, rm);
        out << fmt17(g.lambda_nodes[l]) << "," << fmt17(v.real()) << "," << fmt17(v.imag())
            << "\n";
      }
    }
}

SpectralField read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
  std::string header;
  std::getline(in, header);
  int d = 0, n_max = -1, panels = 0, npp = 0;
  double lmin = 0, lmax = 0, l1 = 0;
  char digest[64] = "-";
  if (std::sscanf(header.c_str(),
                  "# hfreq-spectral-field d=%d n_max=%d lambda_min=%lf lambda_max=%lf "
                  "panels=%d nodes_per_panel=%d digest=%63s l1=%lf",
                  &d, &n_max, &lmin, &lmax, &panels, &npp, digest, &l1) != 8)
    throw std::runtime_error("read_field_csv: bad header line");
  SpectralField F;
  F.grid = FrequencyGrid::make(d, n_max, lmin, lmax, panels, npp);
  F.source_digest = (std::string(digest) == "-") ? "" : digest;
  F.l1_bound = l1;
  const int ns = F.grid.states_per_side();
  F.values.assign(size_t(F.grid.lambda_count()) * ns * ns, complexd(0));
  std::string line;
  std::getline(in, line); // column header
  int l = 0, rn = 0, rm = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != 2 * d + 3)
      throw std::runtime_error("read_field_csv: bad row");
    const double re = std::strtod(cells[2 * d + 1].c_str(), nullptr);
    const double im = std::strtod(cells[2 * d + 2].c_str(), nullptr);
    F.at(l, rn, rm) = complexd(re, im);
    if (++rm == ns) {
      rm = 0;
      if (++rn == ns) {
        rn = 0;
        ++l;
      }
    }
  }
  if (l != F.grid.lambda_count() || rn != 0 || rm != 0)
    throw std::runtime_error("read_field_csv: row count does not match the grid");
  return F;
}

} // namespace hfreq
