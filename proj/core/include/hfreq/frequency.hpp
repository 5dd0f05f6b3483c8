#pragma once

#include "hfreq/hermite.hpp"
#include "hfreq/numerics.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hfreq {

/// Interior frequency point (n, m, lambda), lambda != 0.
struct FrequencyPoint {
  MultiIndex n;
  MultiIndex m;
  double lambda = 1.0;

  FrequencyPoint() = default;
  FrequencyPoint(MultiIndex n_, MultiIndex m_, double lambda_);
  int dim() const { return n.dim(); }
};

/// Boundary point (xdot, k) with all components of xdot of one sign (or zero).
struct BoundaryPoint {
  std::vector<double> xdot;
  std::vector<int> k;

  BoundaryPoint() = default;
  BoundaryPoint(std::vector<double> xdot_, std::vector<int> k_);
  int dim() const { return static_cast<int>(xdot.size()); }
  /// +1, -1, or 0 when xdot = 0 (which lies in both orthant closures).
  int sign() const;
};

struct CompletedFrequencyPoint {
  std::variant<FrequencyPoint, BoundaryPoint> v;

  CompletedFrequencyPoint(FrequencyPoint p) : v(std::move(p)) {}
  CompletedFrequencyPoint(BoundaryPoint p) : v(std::move(p)) {}
  bool interior() const { return std::holds_alternative<FrequencyPoint>(v); }
  const FrequencyPoint& as_interior() const { return std::get<FrequencyPoint>(v); }
  const BoundaryPoint& as_boundary() const { return std::get<BoundaryPoint>(v); }
  int dim() const;
};

/// The extended distance on the completed frequency space:
///   interior/interior  |lam(n+m) - lam'(n'+m')|_1 + |(m-n)-(m'-n')|_1 + |lam-lam'|
///   interior/boundary  |lam(n+m) - xdot|_1 + |m-n-k|_1 + |lam|
///   boundary/boundary  |xdot - xdot'|_1 + |k - k'|_1
double distance(const CompletedFrequencyPoint& p, const CompletedFrequencyPoint& q);

struct LimitClassification {
  std::optional<CompletedFrequencyPoint> limit; // set iff the prefix looks Cauchy
  std::string diagnostic;
  int violating_first = -1, violating_second = -1; // first offending pair otherwise
};

/// Detects the two limit regimes of the completion on a finite prefix:
/// eventually-constant (n, m-n) with lambda -> lambda* != 0 gives an interior
/// point; lambda -> 0 with lambda(n+m) -> xdot and constant k = m-n gives a
/// boundary point. Anything else is reported as non-Cauchy.
LimitClassification classify_limit(const std::vector<FrequencyPoint>& seq, double tol);

/// Truncated frequency grid: n, m <= n_max per component, and a lambda rule on
/// the punctured symmetric interval [-L, -lambda_min] u [lambda_min, L] made
/// of geometrically graded Gauss-Legendre panels. Weights are plain dlambda
/// weights; the |lambda|^d factor of the Plancherel measure is applied by
/// integrate_frequency.
struct FrequencyGrid {
  int d = 1;
  int n_max = 24;
  double lambda_min = 1e-3;
  double lambda_max = 8.0;
  int panels = 8;
  int nodes_per_panel = 12;
  std::vector<double> lambda_nodes;   // negative side first, increasing
  std::vector<double> lambda_weights;

  static FrequencyGrid make(int d, int n_max, double lambda_min, double lambda_max,
                            int panels, int nodes_per_panel);

  int lambda_count() const { return static_cast<int>(lambda_nodes.size()); }
  int states_per_side() const; // (n_max+1)^d
  /// linear index <-> multi-index over [0, n_max]^d
  MultiIndex unrank(int r) const;
  int rank(const MultiIndex& n) const;
  /// sum_i w_i |lambda_i|^d, for the measure invariant check
  double measure_weight_total() const;
};

/// Sum_{n,m <= n_max} sum_i w_i |lambda_i|^d theta(n, m, lambda_i).
complexd integrate_frequency(const FrequencyGrid& grid,
                             const std::function<complexd(const FrequencyPoint&)>& theta);

/// Per-orthant quadrature rule for the boundary stratum: geometrically graded
/// Gauss-Legendre panels on [x_min, x_max] per axis, mirrored to the negative
/// orthant.
struct BoundaryRule {
  double x_min = 0.0;
  double x_max = 30.0;
  int panels = 10;
  int nodes_per_panel = 16;
  std::vector<double> nodes; // positive axis nodes, increasing
  std::vector<double> weights;

  static BoundaryRule make(double x_max, int panels, int nodes_per_panel,
                           double x_min = 0.0);
};

/// 2^{-d} sum_{|k|_inf <= k_max} ( int_{(R_-)^d} + int_{(R_+)^d} ) theta(xdot, k) dxdot
/// by truncated per-orthant tensor quadrature.
complexd boundary_measure(const std::function<complexd(const BoundaryPoint&)>& theta,
                          int k_max, const BoundaryRule& rule, int d = 1);

/// Same integral restricted to a single orthant (sign = +1 or -1), still
/// carrying the 2^{-d} factor; boundary_measure is the sum of both.
complexd boundary_measure_orthant(const std::function<complexd(const BoundaryPoint&)>& theta,
                                  int k_max, const BoundaryRule& rule, int sign, int d = 1);

} // namespace hfreq
