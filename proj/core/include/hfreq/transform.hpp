#pragma once

#include "hfreq/frequency.hpp"
#include "hfreq/heisenberg.hpp"
#include "hfreq/wigner.hpp"

#include <string>
#include <vector>

namespace hfreq {

/// Dense array of Fourier coefficients f^(n, m, lambda_i) over a frequency
/// grid. Layout: value(l, rn, rm) = values[(l * NS + rn) * NS + rm] with
/// NS = grid.states_per_side() and rn, rm the multi-index ranks.
struct SpectralField {
  FrequencyGrid grid;
  std::vector<complexd> values;
  std::string source_digest;   // digest of the function the field came from
  double l1_bound = 0;         // ||f||_L1 when known (row-sum certificates)
  double conv_tail_bound = 0;  // set by spectral_convolve

  complexd& at(int l, int rn, int rm);
  complexd at(int l, int rn, int rm) const;
  int states() const { return grid.states_per_side(); }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator*=(complexd c);
};

/// FNV-1a digest of the family record (d, widths, terms); stable across runs.
std::string function_digest(const GaussHermiteFunction& f);

struct ForwardOptions {
  int y_nodes = 0;        // 0 = automatic from (n, m, lambda, width)
  bool compute_l1 = true; // attach ||f||_L1 to the field
};

/// F_H f (w^) at one interior point by the definition: the s-integral in
/// closed form, the Y-integral by tensor Gauss-Hermite rescaled to the
/// function's width, with W evaluated at the nodes. Kept deliberately
/// independent of the ladder fast path so the two can cross-check.
complexd forward_point(const GaussHermiteFunction& f, const FrequencyPoint& w,
                       const ForwardOptions& opts = {});

/// F_H f at a boundary point (xdot, k): the pairing against conj K_d.
complexd forward_point(const GaussHermiteFunction& f, const BoundaryPoint& p,
                       int y_nodes = 48);

/// Whole-grid forward transform. Exact in (n, m) per lambda node: the
/// Y-pairing against conj W is generated from the diagonal Gaussian seed by
/// the creation/annihilation shift recursions, one per coordinate power, so
/// no Y-quadrature is involved. Agrees with forward_point to its quadrature
/// tolerance.
SpectralField forward_field(const GaussHermiteFunction& f, const FrequencyGrid& grid,
                            const ForwardOptions& opts = {});

/// Streaming variant: calls sink(l, slice) per lambda node with the dense
/// (NS x NS) slice; used for grids too large to store.
void forward_field_stream(const GaussHermiteFunction& f, const FrequencyGrid& grid,
                          const std::function<void(int, const std::vector<complexd>&)>& sink);

/// Inversion: (2^{d-1} / pi^{d+1}) int e^{is lambda} W(w^, Y) F(w^) dw^.
complexd inverse_point(const SpectralField& F, const HeisenbergPoint& w);

/// ||F||^2 with respect to the Plancherel measure on the grid.
double plancherel(const SpectralField& F);

struct PlancherelCheck {
  double lhs = 0;   // ||f^||^2_{L^2(dw^)}
  double rhs = 0;   // (pi^{d+1} / 2^{d-1}) ||f||^2_{L^2}
  double ratio = 0;
};

/// Compares the grid Plancherel sum against the exact L^2 norm of the family
/// member. Streams over lambda nodes, so large n_max costs no memory.
PlancherelCheck plancherel_check(const GaussHermiteFunction& f, const FrequencyGrid& grid);

/// Default grid for Plancherel studies: the measure near lambda = 0 spreads
/// over indices n ~ 1/lambda, so the index cap must be large for the ratio
/// to settle; the streamed sum keeps that affordable.
FrequencyGrid plancherel_default_grid(int d = 1);

/// (F . G)(n,m,lambda) = sum_l F(n,l,lambda) G(l,m,lambda) truncated at the
/// grid box, with a Cauchy-Schwarz residual bound from the L^1 certificates.
SpectralField spectral_convolve(const SpectralField& F, const SpectralField& G);

/// max over grid cells of |F_H(Delta_H f) + 4 |lambda| (2|m|+d) f^| / (1+|f^|).
double diag_check(const GaussHermiteFunction& f, const FrequencyGrid& grid);

struct ConvolutionTransformOptions {
  int y_nodes = 40;       // transform quadrature nodes per Y axis
  int s_nodes = 72;       // Gauss-Legendre nodes for the s integral
  double s_halfwidth = 12;
  int conv_nodes = 24;    // inner Y' quadrature (centered on the product Gaussian)
};

/// F_H(f * g) on the grid, computed from a direct group-convolution table
/// (the honest slow route used to cross-check spectral_convolve). d = 1 only.
SpectralField forward_field_of_convolution(const GaussHermiteFunction& f,
                                           const GaussHermiteFunction& g,
                                           const FrequencyGrid& grid,
                                           const ConvolutionTransformOptions& opts = {});

/// One axis of the exact Y-pairing behind forward_field:
///   out[n * (n_max+1) + m] = int y^i eta^j conj(W(n,m,lambda,(y,eta)))
///                                e^{-a (y^2 + eta^2)} dy deta.
std::vector<complexd> wigner_pairing_matrix(int i, int j, double a, double lambda, int n_max);

/// CSV export/import, 17 significant digits; round trips are bit exact.
void write_field_csv(const SpectralField& F, const std::string& path);
SpectralField read_field_csv(const std::string& path);

} // namespace hfreq
