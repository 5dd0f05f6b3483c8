#include "hfreq/frequency.hpp"

#include <cmath>
#include <stdexcept>

namespace hfreq {

FrequencyPoint::FrequencyPoint(MultiIndex n_, MultiIndex m_, double lambda_)
    : n(std::move(n_)), m(std::move(m_)), lambda(lambda_) {
  if (n.dim() != m.dim()) throw std::invalid_argument("FrequencyPoint: n/m dimension mismatch");
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw std::invalid_argument("FrequencyPoint: lambda must be finite and nonzero");
}

BoundaryPoint::BoundaryPoint(std::vector<double> xdot_, std::vector<int> k_)
    : xdot(std::move(xdot_)), k(std::move(k_)) {
  if (xdot.size() != k.size()) throw std::invalid_argument("BoundaryPoint: xdot/k size mismatch");
  bool has_pos = false, has_neg = false;
  for (double x : xdot) {
    if (!std::isfinite(x)) throw std::invalid_argument("BoundaryPoint: non-finite xdot");
    has_pos |= x > 0;
    has_neg |= x < 0;
  }
  if (has_pos && has_neg)
    throw std::invalid_argument("BoundaryPoint: xdot components must share one sign");
}

int BoundaryPoint::sign() const {
  for (double x : xdot) {
    if (x > 0) return 1;
    if (x < 0) return -1;
  }
  return 0;
}

int CompletedFrequencyPoint::dim() const {
  return interior() ? as_interior().dim() : as_boundary().dim();
}

namespace {

double l1_diff_nm(const FrequencyPoint& p, const FrequencyPoint& q) {
  double s = 0;
  for (int j = 0; j < p.dim(); ++j)
    s += std::abs(double(p.m[j] - p.n[j]) - double(q.m[j] - q.n[j]));
  return s;
}

} // namespace

double distance(const CompletedFrequencyPoint& p, const CompletedFrequencyPoint& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("distance: dimension mismatch");
  const int d = p.dim();
  if (p.interior() && q.interior()) {
    const auto& a = p.as_interior();
    const auto& b = q.as_interior();
    double s = std::abs(a.lambda - b.lambda);
    for (int j = 0; j < d; ++j)
      s += std::abs(a.lambda * (a.n[j] + a.m[j]) - b.lambda * (b.n[j] + b.m[j]));
    return s + l1_diff_nm(a, b);
  }
  if (!p.interior() && !q.interior()) {
    const auto& a = p.as_boundary();
    const auto& b = q.as_boundary();
    double s = 0;
    for (int j = 0; j < d; ++j)
      s += std::abs(a.xdot[j] - b.xdot[j]) + std::abs(double(a.k[j] - b.k[j]));
    return s;
  }
  const auto& a = p.interior() ? p.as_interior() : q.as_interior();
  const auto& b = p.interior() ? q.as_boundary() : p.as_boundary();
  double s = std::abs(a.lambda);
  for (int j = 0; j < d; ++j) {
    s += std::abs(a.lambda * (a.n[j] + a.m[j]) - b.xdot[j]);
    s += std::abs(double(a.m[j] - a.n[j] - b.k[j]));
  }
  return s;
}

LimitClassification classify_limit(const std::vector<FrequencyPoint>& seq, double tol) {
  if (seq.empty()) throw std::invalid_argument("classify_limit: empty sequence");
  LimitClassification out;
  const int d = seq.front().dim();
  const size_t tail_start = seq.size() / 2;

  // m - n must be eventually constant for any Cauchy sequence
  const auto& last = seq.back();
  std::vector<int> k(d);
  for (int j = 0; j < d; ++j) k[j] = last.m[j] - last.n[j];
  for (size_t p = tail_start; p < seq.size(); ++p)
    for (int j = 0; j < d; ++j)
      if (seq[p].m[j] - seq[p].n[j] != k[j]) {
        out.diagnostic = "m - n not eventually constant";
        out.violating_first = static_cast<int>(p);
        out.violating_second = static_cast<int>(seq.size() - 1);
        return out;
      }

  const double lam_last = last.lambda;
  if (std::abs(lam_last) > tol) {
    // interior regime: n and lambda both settle
    for (size_t p = tail_start; p < seq.size(); ++p) {
      if (seq[p].n != last.n) {
        out.diagnostic = "lambda stays away from 0 but n keeps moving";
        out.violating_first = static_cast<int>(p);
        out.violating_second = static_cast<int>(seq.size() - 1);
        return out;
      }
      if (std::abs(seq[p].lambda - lam_last) > tol * (1.0 + double(seq.size() - p))) {
        out.diagnostic = "lambda not Cauchy";
        out.violating_first = static_cast<int>(p);
        out.violating_second = static_cast<int>(seq.size() - 1);
        return out;
      }
    }
    out.limit = CompletedFrequencyPoint(last);
    out.diagnostic = "interior limit";
    return out;
  }

  // boundary regime: lambda -> 0 and lambda (n+m) must settle componentwise
  std::vector<double> xdot(d);
  for (int j = 0; j < d; ++j) xdot[j] = lam_last * (last.n[j] + last.m[j]);
  for (size_t p = tail_start; p < seq.size(); ++p) {
    for (int j = 0; j < d; ++j) {
      const double xj = seq[p].lambda * (seq[p].n[j] + seq[p].m[j]);
      if (std::abs(xj - xdot[j]) > tol * (1.0 + double(seq.size() - p))) {
        out.diagnostic = "lambda (n+m) not Cauchy";
        out.violating_first = static_cast<int>(p);
        out.violating_second = static_cast<int>(seq.size() - 1);
        return out;
      }
    }
  }
  bool pos = false, neg = false;
  for (double x : xdot) {
    pos |= x > tol;
    neg |= x < -tol;
  }
  if (pos && neg) {
    out.diagnostic = "limit xdot has mixed signs";
    out.violating_first = static_cast<int>(seq.size() - 1);
    out.violating_second = static_cast<int>(seq.size() - 1);
    return out;
  }
  for (double& x : xdot)
    if (std::abs(x) <= tol) x = std::abs(x); // snap the sign convention at 0
  out.limit = CompletedFrequencyPoint(BoundaryPoint(std::move(xdot), std::move(k)));
  out.diagnostic = "boundary limit";
  return out;
}

FrequencyGrid FrequencyGrid::make(int d, int n_max, double lambda_min, double lambda_max,
                                  int panels, int nodes_per_panel) {
  if (d < 1 || d > 2) throw std::invalid_argument("FrequencyGrid: d must be 1 or 2");
  if (n_max < 0 || panels < 1 || nodes_per_panel < 1)
    throw std::invalid_argument("FrequencyGrid: bad truncation parameters");
  if (!(lambda_min > 0) || !(lambda_max > lambda_min))
    throw std::invalid_argument("FrequencyGrid: need 0 < lambda_min < lambda_max");
  FrequencyGrid g;
  g.d = d;
  g.n_max = n_max;
  g.lambda_min = lambda_min;
  g.lambda_max = lambda_max;
  g.panels = panels;
  g.nodes_per_panel = nodes_per_panel;

  // geometric panel boundaries resolve the 1/lambda index pile-up near 0
  std::vector<double> bounds(panels + 1);
  const double ratio = lambda_max / lambda_min;
  for (int i = 0; i <= panels; ++i)
    bounds[i] = lambda_min * std::pow(ratio, double(i) / panels);
  std::vector<double> pos_nodes, pos_weights;
  for (int i = 0; i < panels; ++i) {
    const auto rule = make_rule(RuleKind::gauss_legendre, nodes_per_panel,
                                std::make_pair(bounds[i], bounds[i + 1]));
    pos_nodes.insert(pos_nodes.end(), rule.nodes.begin(), rule.nodes.end());
    pos_weights.insert(pos_weights.end(), rule.weights.begin(), rule.weights.end());
  }
  for (size_t i = pos_nodes.size(); i-- > 0;) {
    g.lambda_nodes.push_back(-pos_nodes[i]);
    g.lambda_weights.push_back(pos_weights[i]);
  }
  g.lambda_nodes.insert(g.lambda_nodes.end(), pos_nodes.begin(), pos_nodes.end());
  g.lambda_weights.insert(g.lambda_weights.end(), pos_weights.begin(), pos_weights.end());
  return g;
}

int FrequencyGrid::states_per_side() const {
  int s = 1;
  for (int j = 0; j < d; ++j) s *= (n_max + 1);
  return s;
}

MultiIndex FrequencyGrid::unrank(int r) const {
  std::vector<int> e(d);
  for (int j = 0; j < d; ++j) {
    e[j] = r % (n_max + 1);
    r /= (n_max + 1);
  }
  return MultiIndex(std::move(e));
}

int FrequencyGrid::rank(const MultiIndex& n) const {
  int r = 0;
  for (int j = d; j-- > 0;) r = r * (n_max + 1) + n[j];
  return r;
}

double FrequencyGrid::measure_weight_total() const {
  double s = 0;
  for (int i = 0; i < lambda_count(); ++i)
    s += lambda_weights[i] * std::pow(std::abs(lambda_nodes[i]), d);
  return s;
}

complexd integrate_frequency(const FrequencyGrid& grid,
                             const std::function<complexd(const FrequencyPoint&)>& theta) {
  const int ns = grid.states_per_side();
  complexd acc = 0;
  for (int i = 0; i < grid.lambda_count(); ++i) {
    const double lam = grid.lambda_nodes[i];
    const double wmeas = grid.lambda_weights[i] * std::pow(std::abs(lam), grid.d);
    complexd slice = 0;
    for (int rn = 0; rn < ns; ++rn) {
      const MultiIndex n = grid.unrank(rn);
      for (int rm = 0; rm < ns; ++rm) {
        const complexd v = theta(FrequencyPoint(n, grid.unrank(rm), lam));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw std::domain_error("integrate_frequency: non-finite theta value");
        slice += v;
      }
    }
    acc += wmeas * slice;
  }
  return acc;
}

BoundaryRule BoundaryRule::make(double x_max, int panels, int nodes_per_panel, double x_min) {
  if (!(x_max > x_min) || x_min < 0 || panels < 1 || nodes_per_panel < 1)
    throw std::invalid_argument("BoundaryRule: bad parameters");
  BoundaryRule r;
  r.x_min = x_min;
  r.x_max = x_max;
  r.panels = panels;
  r.nodes_per_panel = nodes_per_panel;
  // graded toward 0: first panel [x_min, h], then geometric up to x_max
  std::vector<double> bounds(panels + 1);
  const double lo = std::max(x_min, x_max * 1e-4);
  bounds[0] = x_min;
  for (int i = 1; i <= panels; ++i)
    bounds[i] = lo * std::pow(x_max / lo, double(i) / panels);
  for (int i = 0; i < panels; ++i) {
    if (!(bounds[i + 1] > bounds[i])) continue;
    const auto rule = make_rule(RuleKind::gauss_legendre, nodes_per_panel,
                                std::make_pair(bounds[i], bounds[i + 1]));
    r.nodes.insert(r.nodes.end(), rule.nodes.begin(), rule.nodes.end());
    r.weights.insert(r.weights.end(), rule.weights.begin(), rule.weights.end());
  }
  return r;
}

complexd boundary_measure_orthant(const std::function<complexd(const BoundaryPoint&)>& theta,
                                  int k_max, const BoundaryRule& rule, int sign, int d) {
  if (d < 1 || d > 2) throw std::invalid_argument("boundary_measure: d must be 1 or 2");
  if (sign != 1 && sign != -1) throw std::invalid_argument("boundary_measure: sign must be +-1");
  const int nk = 2 * k_max + 1;
  int ktotal = 1;
  for (int j = 0; j < d; ++j) ktotal *= nk;
  const int nx = static_cast<int>(rule.nodes.size());

  complexd acc = 0;
  std::vector<int> xi(d, 0);
  BoundaryPoint p(std::vector<double>(d, 0.0), std::vector<int>(d, 0));
  while (true) {
    double wx = 1;
    for (int j = 0; j < d; ++j) {
      p.xdot[j] = sign * rule.nodes[xi[j]];
      wx *= rule.weights[xi[j]];
    }
    for (int kr = 0; kr < ktotal; ++kr) {
      int t = kr;
      for (int j = 0; j < d; ++j) {
        p.k[j] = t % nk - k_max;
        t /= nk;
      }
      const complexd v = theta(p);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error("boundary_measure: non-finite theta value");
      acc += wx * v;
    }
    int ax = 0;
    while (ax < d && ++xi[ax] == nx) xi[ax++] = 0;
    if (ax == d) break;
  }
  return std::pow(0.5, d) * acc;
}

complexd boundary_measure(const std::function<complexd(const BoundaryPoint&)>& theta,
                          int k_max, const BoundaryRule& rule, int d) {
  return boundary_measure_orthant(theta, k_max, rule, -1, d) +
         boundary_measure_orthant(theta, k_max, rule, +1, d);
}

} // namespace hfreq
