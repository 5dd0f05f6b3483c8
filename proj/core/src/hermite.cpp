#include "hfreq/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace hfreq {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_)
    if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
}

MultiIndex MultiIndex::zeros(int d) { return MultiIndex(std::vector<int>(d, 0)); }

int MultiIndex::order() const {
  int s = 0;
  for (int e : entries_) s += e;
  return s;
}

double MultiIndex::factorial() const {
  double f = 1;
  for (int e : entries_)
    for (int j = 2; j <= e; ++j) f *= j;
  return f;
}

MultiIndex MultiIndex::shifted(int axis, int delta) const {
  if (axis < 0 || axis >= dim()) throw std::out_of_range("MultiIndex: bad axis");
  std::vector<int> e = entries_;
  e[axis] += delta;
  if (e[axis] < 0) throw std::invalid_argument("MultiIndex: shift below zero");
  return MultiIndex(std::move(e));
}

HermiteCoefficientVector HermiteCoefficientVector::basis(int j, double c) {
  if (j < 0) throw std::invalid_argument("HermiteCoefficientVector: negative index");
  HermiteCoefficientVector v;
  v.c_[j] = c;
  return v;
}

void HermiteCoefficientVector::add(int j, double c) {
  if (j < 0) throw std::invalid_argument("HermiteCoefficientVector: negative index");
  c_[j] += c;
}

double HermiteCoefficientVector::coeff(int j) const {
  auto it = c_.find(j);
  return it == c_.end() ? 0.0 : it->second;
}

int HermiteCoefficientVector::max_index() const {
  return c_.empty() ? -1 : c_.rbegin()->first;
}

double HermiteCoefficientVector::inner(const HermiteCoefficientVector& other) const {
  double s = 0;
  for (const auto& [j, cj] : c_) s += cj * other.coeff(j);
  return s;
}

double HermiteCoefficientVector::norm() const { return std::sqrt(inner(*this)); }

void HermiteCoefficientVector::canonicalize() {
  for (auto it = c_.begin(); it != c_.end();)
    it = (it->second == 0.0) ? c_.erase(it) : std::next(it);
}

HermiteCoefficientVector& HermiteCoefficientVector::operator+=(const HermiteCoefficientVector& o) {
  for (const auto& [j, cj] : o.c_) c_[j] += cj;
  return *this;
}

HermiteCoefficientVector& HermiteCoefficientVector::operator*=(double s) {
  for (auto& [j, cj] : c_) cj *= s;
  return *this;
}

double hermite_eval(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_eval: negative index");
  double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return h0;
  double h1 = std::sqrt(2.0) * x * h0;
  for (int k = 1; k < n; ++k) {
    const double h2 = (2.0 * x * h1 - std::sqrt(2.0 * k) * h0) / std::sqrt(2.0 * k + 2.0);
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double hermite_eval_nd(const MultiIndex& n, std::span<const double> x) {
  if (static_cast<int>(x.size()) != n.dim())
    throw std::invalid_argument("hermite_eval_nd: dimension mismatch");
  double p = 1;
  for (int j = 0; j < n.dim(); ++j) p *= hermite_eval(n[j], x[j]);
  return p;
}

double hermite_rescaled(const MultiIndex& n, double lambda, std::span<const double> x) {
  if (lambda == 0.0) throw std::invalid_argument("hermite_rescaled: lambda must be nonzero");
  if (static_cast<int>(x.size()) != n.dim())
    throw std::invalid_argument("hermite_rescaled: dimension mismatch");
  const double s = std::sqrt(std::abs(lambda));
  double p = 1;
  for (int j = 0; j < n.dim(); ++j) p *= std::sqrt(s) * hermite_eval(n[j], s * x[j]);
  return p;
}

HermiteCoefficientVector ladder_apply(LadderOp op, const HermiteCoefficientVector& v) {
  HermiteCoefficientVector out;
  for (const auto& [j, cj] : v.terms()) {
    // A H_j = sqrt(2j) H_{j-1} (H_{-1} absorbed by the zero coefficient),
    // C H_j = sqrt(2j+2) H_{j+1}.
    const double down = std::sqrt(2.0 * j);
    const double up = std::sqrt(2.0 * j + 2.0);
    switch (op) {
      case LadderOp::A:
        if (j > 0) out.add(j - 1, down * cj);
        break;
      case LadderOp::C:
        out.add(j + 1, up * cj);
        break;
      case LadderOp::M:
        if (j > 0) out.add(j - 1, 0.5 * down * cj);
        out.add(j + 1, 0.5 * up * cj);
        break;
      case LadderOp::D:
        if (j > 0) out.add(j - 1, 0.5 * down * cj);
        out.add(j + 1, -0.5 * up * cj);
        break;
    }
  }
  out.canonicalize();
  return out;
}

namespace {

// one multiplicative path through a ladder chain: value num sqrt(radicand)
struct LadderPath {
  int index;
  double num;             // dyadic rational, exact in double
  unsigned long long rad; // product of the 2j / 2j+2 factors collected so far
};

void extend(std::vector<LadderPath>& out, const LadderPath& p, bool up, double factor) {
  LadderPath q = p;
  const unsigned long long f = up ? 2ULL * p.index + 2 : 2ULL * p.index;
  if (f == 0) return; // A on the ground state
  if (q.rad > (~0ULL) / f) throw std::overflow_error("ladder_apply_chain: radical overflow");
  q.rad *= f;
  q.index += up ? 1 : -1;
  q.num *= factor;
  out.push_back(q);
}

// pull the largest square divisor out of the radical (all prime factors are
// small, the radical being a product of small even integers)
void reduce_radical(unsigned long long& rad, double& num) {
  for (unsigned long long p = 2; p * p <= rad; ++p) {
    while (rad % (p * p) == 0) {
      rad /= p * p;
      num *= double(p);
    }
  }
}

} // namespace

HermiteCoefficientVector ladder_apply_combo(std::span<const LadderChainTerm> terms,
                                            const HermiteCoefficientVector& v) {
  HermiteCoefficientVector out;
  for (const auto& [j, cj] : v.terms()) {
    // accumulate the pure path numerators per (index, squarefree radical)
    // before the input coefficient enters, so cancellations are exact
    std::map<std::pair<int, unsigned long long>, double> acc;
    for (const LadderChainTerm& term : terms) {
      std::vector<LadderPath> paths{{j, term.weight, 1ULL}};
      for (const LadderOp op : term.ops) {
        std::vector<LadderPath> next;
        next.reserve(2 * paths.size());
        for (const LadderPath& p : paths) {
          switch (op) {
            case LadderOp::A: extend(next, p, false, 1.0); break;
            case LadderOp::C: extend(next, p, true, 1.0); break;
            case LadderOp::M:
              extend(next, p, false, 0.5);
              extend(next, p, true, 0.5);
              break;
            case LadderOp::D:
              extend(next, p, false, 0.5);
              extend(next, p, true, -0.5);
              break;
          }
        }
        paths = std::move(next);
      }
      for (LadderPath p : paths) {
        reduce_radical(p.rad, p.num);
        acc[{p.index, p.rad}] += p.num;
      }
    }
    for (const auto& [key, num] : acc) {
      if (num == 0.0) continue;
      out.add(key.first, cj * num * std::sqrt(double(key.second)));
    }
  }
  out.canonicalize();
  return out;
}

HermiteCoefficientVector ladder_apply_chain(std::span<const LadderOp> ops,
                                            const HermiteCoefficientVector& v) {
  const LadderChainTerm term{std::vector<LadderOp>(ops.begin(), ops.end()), 1.0};
  return ladder_apply_combo(std::span(&term, 1), v);
}

double matrix_element(int l1, int l2, int n, int m) {
  if (l1 < 0 || l2 < 0 || n < 0 || m < 0)
    throw std::invalid_argument("matrix_element: negative argument");
  HermiteCoefficientVector left = HermiteCoefficientVector::basis(m);
  for (int i = 0; i < l1; ++i) left = ladder_apply(LadderOp::M, left);
  HermiteCoefficientVector right = HermiteCoefficientVector::basis(n);
  for (int i = 0; i < l2; ++i) right = ladder_apply(LadderOp::D, right);
  return left.inner(right);
}

OscApplyResult osc_apply(double lambda, const HermiteCoefficientVector& v) {
  if (lambda == 0.0) throw std::invalid_argument("osc_apply: lambda must be nonzero");
  // -d^2 + lambda^2 M^2 is diagonal in the rescaled basis (equivalently
  // |lambda| (CA + Id), with the square roots combined to exact integers)
  OscApplyResult res;
  for (const auto& [j, cj] : v.terms()) {
    res.applied.add(j, (2.0 * j + 1.0) * std::abs(lambda) * cj);
    res.eigenvalues.emplace_back(j, (2.0 * j + 1.0) * std::abs(lambda));
  }
  return res;
}

} // namespace hfreq
