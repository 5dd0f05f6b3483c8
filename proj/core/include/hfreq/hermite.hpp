#pragma once

#include <map>
#include <span>
#include <vector>

namespace hfreq {

/// Multi-index n in N^d, with the convention that a downward shift at a zero
/// component is rejected (H_p = 0 for negative p is handled by the ladder
/// coefficients, never by negative indices).
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zeros(int d);

  int dim() const { return static_cast<int>(entries_.size()); }
  int order() const; // |n| = sum n_j
  double factorial() const;
  int operator[](int j) const { return entries_[j]; }
  const std::vector<int>& entries() const { return entries_; }

  MultiIndex shifted(int axis, int delta) const; // n +/- delta_j, validated

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }
  bool operator!=(const MultiIndex& o) const { return !(*this == o); }

private:
  std::vector<int> entries_;
};

/// Finitely supported real coefficient vector sum_j c_j H_j over the 1-D
/// orthonormal Hermite functions. Canonical form strips exact zeros.
class HermiteCoefficientVector {
public:
  HermiteCoefficientVector() = default;
  static HermiteCoefficientVector basis(int j, double c = 1.0);

  void add(int j, double c);
  double coeff(int j) const;
  const std::map<int, double>& terms() const { return c_; }
  int max_index() const;
  bool empty() const { return c_.empty(); }

  double inner(const HermiteCoefficientVector& other) const; // orthonormal pairing
  double norm() const;
  void canonicalize(); // drop exact zeros

  HermiteCoefficientVector& operator+=(const HermiteCoefficientVector& o);
  HermiteCoefficientVector& operator*=(double s);

private:
  std::map<int, double> c_;
};

/// 1-D orthonormal Hermite function H_n(x), three-term recurrence seeded with
/// H_0(x) = pi^{-1/4} e^{-x^2/2}.
double hermite_eval(int n, double x);

/// Tensor product over the axes.
double hermite_eval_nd(const MultiIndex& n, std::span<const double> x);

/// |lambda|^{d/4} H_n(|lambda|^{1/2} x), lambda != 0.
double hermite_rescaled(const MultiIndex& n, double lambda, std::span<const double> x);

/// A = d/dx + x (annihilation), C = -d/dx + x (creation), M = x (multiply),
/// D = d/dx. Exact on coefficient vectors: A H_n = sqrt(2n) H_{n-1},
/// C H_n = sqrt(2n+2) H_{n+1}, 2M = C + A, 2D = A - C.
enum class LadderOp { A, C, M, D };
HermiteCoefficientVector ladder_apply(LadderOp op, const HermiteCoefficientVector& v);

/// Applies a composition of ladder operators (ops[0] acts first) keeping all
/// square-root factors of each path under a single radical of an integer, so
/// that products like A after C combine to exact integers.
HermiteCoefficientVector ladder_apply_chain(std::span<const LadderOp> ops,
                                            const HermiteCoefficientVector& v);

/// Weighted sum of ladder chains (an empty chain is the identity), with the
/// cancellation carried out in exact path arithmetic before any square root
/// or input coefficient touches the value. Operator identities such as
/// [C,A] = -2 Id and [-d^2+M^2, C] = 2C therefore vanish with no rounding.
struct LadderChainTerm {
  std::vector<LadderOp> ops;
  double weight = 1.0;
};
HermiteCoefficientVector ladder_apply_combo(std::span<const LadderChainTerm> terms,
                                            const HermiteCoefficientVector& v);

/// Exact inner product (M^{l1} H_m | D^{l2} H_n) computed purely in ladder
/// algebra; no quadrature is involved.
double matrix_element(int l1, int l2, int n, int m);

/// Applies the rescaled oscillator -d^2/dx^2 + lambda^2 x^2 on a coefficient
/// vector expressed in the H_{n,lambda} basis (exactly |lambda| (CA + Id) on
/// the index side) and reports the eigenvalue table (2n+1)|lambda|.
struct OscApplyResult {
  HermiteCoefficientVector applied;
  std::vector<std::pair<int, double>> eigenvalues; // (index, (2n+1)|lambda|)
};
OscApplyResult osc_apply(double lambda, const HermiteCoefficientVector& v);

} // namespace hfreq
