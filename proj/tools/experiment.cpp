#include "experiment.hpp"

#include "hfreq/asymptotics.hpp"
#include "hfreq/kernel.hpp"
#include "hfreq/parallel.hpp"
#include "hfreq/transform.hpp"
#include "hfreq/wigner.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>

namespace hfreq::cli {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = 3.14159265358979323846;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// deterministic uniform draws from the standardized engine; distributions
// from <random> are implementation-defined, so map bits by hand
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}
  double uniform(double lo, double hi) {
    const double u = double(eng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int uniform_int(int lo, int hi) { // inclusive
    return lo + int(eng() % uint64_t(hi - lo + 1));
  }
};

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_digest(const json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(j.dump()));
  return buf;
}

double jget(const json& j, const char* key, double dflt) {
  return (j.contains(key)) ? j.at(key).get<double>() : dflt;
}
int jgeti(const json& j, const char* key, int dflt) {
  return (j.contains(key)) ? j.at(key).get<int>() : dflt;
}

FrequencyGrid grid_from_config(const json& raw, int d, int n_max, double lmin, double lmax,
                               int panels, int npp) {
  if (raw.contains("grid")) {
    const json& g = raw.at("grid");
    n_max = jgeti(g, "n_max", n_max);
    lmin = jget(g, "lambda_min", lmin);
    lmax = jget(g, "lambda_max", lmax);
    panels = jgeti(g, "panels", panels);
    npp = jgeti(g, "nodes_per_panel", npp);
  }
  return FrequencyGrid::make(d, n_max, lmin, lmax, panels, npp);
}

GaussHermiteFunction function_from_config(const json& raw, const char* name, int d) {
  if (raw.contains("functions") && raw.at("functions").contains(name))
    return gauss_hermite_from_json(raw.at("functions").at(name));
  return GaussHermiteFunction::gaussian(d, 1.0, 1.0); // reference Gaussian
}

HorizontalFunction horizontal_from_config(const json& raw, const char* name, int d) {
  if (raw.contains("functions") && raw.at("functions").contains(name))
    return horizontal_from_json(raw.at("functions").at(name));
  return HorizontalFunction::gaussian(d, 1.0);
}

struct CsvWriter {
  std::ofstream out;
  explicit CsvWriter(const std::string& path) : out(path) {
    if (!out) throw ConfigError("cannot open output file " + path);
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }
};

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

using Artifacts = std::vector<std::string>;

void cmd_transform(const ExperimentConfig& cfg, std::vector<Check>& checks, Artifacts& files) {
  const json& p = cfg.raw.value("params", json::object());
  const auto grid = grid_from_config(cfg.raw, cfg.d, 24, 1e-3, 8.0, 8, 12);
  const auto f = function_from_config(cfg.raw, "f", cfg.d);
  const SpectralField F = forward_field(f, grid);

  const std::string path = cfg.out_dir + "/transform_field.csv";
  write_field_csv(F, path);
  files.push_back("transform_field.csv");

  // row/column l^2 certificates against ||f||_1
  const int ns = F.states();
  double worst_row = 0;
  for (int l = 0; l < grid.lambda_count(); ++l)
    for (int rn = 0; rn < ns; ++rn) {
      double row = 0, col = 0;
      for (int rm = 0; rm < ns; ++rm) {
        row += std::norm(F.at(l, rn, rm));
        col += std::norm(F.at(l, rm, rn));
      }
      worst_row = std::max({worst_row, row, col});
    }
  checks.push_back({"l2_row_bound_minus_l1sq", worst_row - F.l1_bound * F.l1_bound,
                    1e-9, "le"});

  // decay certificate: (1 + |lam|(|n|+|m|+d) + |n-m|)^p |f^| bounded
  for (int pdeg : {1, 2, 3}) {
    double cp = 0;
    for (int l = 0; l < grid.lambda_count(); ++l)
      for (int rn = 0; rn < ns; ++rn)
        for (int rm = 0; rm < ns; ++rm) {
          const MultiIndex n = grid.unrank(rn), m = grid.unrank(rm);
          double knm = 0;
          for (int j = 0; j < cfg.d; ++j) knm += std::abs(double(n[j] - m[j]));
          const double w = 1.0 + std::abs(grid.lambda_nodes[l]) *
                                     (n.order() + m.order() + cfg.d) + knm;
          cp = std::max(cp, std::pow(w, pdeg) * std::abs(F.at(l, rn, rm)));
        }
    const double bound = std::pow(10.0, pdeg) * seminorm(f, std::min(2 * pdeg + 2, 8));
    checks.push_back({"decay_constant_p" + std::to_string(pdeg), cp,
                      jget(p, "decay_bound", bound), "le"});
  }
}

void cmd_invert(const ExperimentConfig& cfg, std::vector<Check>& checks, Artifacts& files) {
  const json& p = cfg.raw.value("params", json::object());
  const auto grid = grid_from_config(cfg.raw, cfg.d, 24, 1e-3, 8.0, 10, 14);
  const auto f = function_from_config(cfg.raw, "f", cfg.d);
  const SpectralField F = forward_field(f, grid, {.compute_l1 = false});

  const int samples = jgeti(p, "samples", 10);
  const double tol = jget(p, "tolerance", 1e-4);
  Rng rng(cfg.seed);

  CsvWriter csv(cfg.out_dir + "/inversion.csv");
  csv.row({"y", "eta", "s", "truth", "recon_re", "recon_im", "abs_err"});
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    HeisenbergPoint w = HeisenbergPoint::identity(cfg.d);
    for (int j = 0; j < cfg.d; ++j) {
      w.Y.y[j] = rng.uniform(-1.2, 1.2);
      w.Y.eta[j] = rng.uniform(-1.2, 1.2);
    }
    w.s = rng.uniform(-1.2, 1.2);
    const complexd recon = inverse_point(F, w);
    const complexd truth = f.eval(w);
    const double err = std::abs(recon - truth);
    worst = std::max(worst, err);
    csv.row({fmt17(w.Y.y[0]), fmt17(w.Y.eta[0]), fmt17(w.s), fmt17(truth.real()),
             fmt17(recon.real()), fmt17(recon.imag()), fmt17(err)});
  }
  files.push_back("inversion.csv");
  checks.push_back({"inversion_max_error", worst, tol, "le"});
}

void cmd_plancherel(const ExperimentConfig& cfg, std::vector<Check>& checks, Artifacts&) {
  const json& p = cfg.raw.value("params", json::object());
  FrequencyGrid grid = cfg.raw.contains("grid")
                           ? grid_from_config(cfg.raw, cfg.d, 320, 1.5e-4, 10.0, 20, 14)
                           : plancherel_default_grid(cfg.d);
  const auto f = function_from_config(cfg.raw, "f", cfg.d);
  const PlancherelCheck pc = plancherel_check(f, grid);
  checks.push_back({"plancherel_lhs", pc.lhs, 0.0, "ge"});
  checks.push_back({"plancherel_rhs", pc.rhs, 0.0, "ge"});
  checks.push_back({"plancherel_ratio_error", std::abs(pc.ratio - 1.0),
                    jget(p, "tolerance", 1e-3), "le"});
}

void cmd_convolve(const ExperimentConfig& cfg, std::vector<Check>& checks, Artifacts& files) {
  if (cfg.d != 1) throw ConfigError("convolve: d = 1 only");
  const json& p = cfg.raw.value("params", json::object());
  const auto grid = grid_from_config(cfg.raw, 1, 10, 2e-2, 5.0, 6, 8);
  const auto f = function_from_config(cfg.raw, "f", 1);
  const auto g = function_from_config(cfg.raw, "g", 1);

  const SpectralField F = forward_field(f, grid);
  const SpectralField G = forward_field(g, grid);
  const SpectralField S = spectral_convolve(F, G);
  const SpectralField D = forward_field_of_convolution(f, g, grid);

  const double floor = jget(p, "modulus_floor", 1e-6);
  double worst_rel = 0;
  CsvWriter csv(cfg.out_dir + "/convolve_compare.csv");
  csv.row({"n", "m", "lambda", "spectral_re", "spectral_im", "direct_re", "direct_im",
           "rel_dev"});
  const int ns = grid.states_per_side();
  for (int l = 0; l < grid.lambda_count(); ++l)
    for (int rn = 0; rn < ns; ++rn)
      for (int rm = 0; rm < ns; ++rm) {
        const complexd sv = S.at(l, rn, rm), dv = D.at(l, rn, rm);
        if (std::abs(dv) <= floor) continue;
        const double rel = std::abs(sv - dv) / std::abs(dv);
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-7)
          csv.row({std::to_string(grid.unrank(rn)[0]), std::to_string(grid.unrank(rm)[0]),
                   fmt17(grid.lambda_nodes[l]), fmt17(sv.real()), fmt17(sv.imag()),
                   fmt17(dv.real()), fmt17(dv.imag()), fmt17(rel)});
      }
  files.push_back("convolve_compare.csv");
  checks.push_back({"spectral_vs_direct_rel", worst_rel, jget(p, "tolerance", 1e-5), "le"});

  // both orderings of the convolution integral agree
  Rng rng(cfg.seed);
  double worst_forms = 0;
  for (int i = 0; i < 5; ++i) {
    HeisenbergPoint w = HeisenbergPoint::identity(1);
    w.Y.y[0] = rng.uniform(-1, 1);
    w.Y.eta[0] = rng.uniform(-1, 1);
    w.s = rng.uniform(-1, 1);
    const complexd v1 = group_convolve(f, g, w).value;
    const complexd v2 = group_convolve_alt(f, g, w).value;
    worst_forms = std::max(worst_forms, std::abs(v1 - v2));
  }
  checks.push_back({"convolution_forms_agreement", worst_forms, 1e-8, "le"});
}

void cmd_kernel(const ExperimentConfig& cfg, std::vector<Check>& checks, Artifacts& files) {
  const json& p = cfg.raw.value("params", json::object());
  const double xdot = jget(p, "xdot", 1.0);
  const int kmax = jgeti(p, "kmax", 5);
  const int res = jgeti(p, "grid", 64);
  const double ymax = jget(p, "ymax", 2.0);

  CsvWriter csv(cfg.out_dir + "/kernel_table.csv");
  csv.row({"xdot", "k", "y", "eta", "re", "im"});
  for (int k = 0; k <= kmax; ++k)
    for (int iy = 0; iy < res; ++iy)
      for (int ie = 0; ie < res; ++ie) {
        const double y = -ymax + 2.0 * ymax * iy / (res - 1);
        const double eta = -ymax + 2.0 * ymax * ie / (res - 1);
        const complexd v = kernel_K(xdot, k, y, eta);
        csv.row({fmt17(xdot), std::to_string(k), fmt17(y), fmt17(eta), fmt17(v.real()),
                 fmt17(v.imag())});
      }
  files.push_back("kernel_table.csv");

  double sym = 0, lap = 0, rot = 0, conv = 0, y2 = 0;
  for (int k = 0; k <= std::min(kmax, 4); ++k) {
    const auto rep = kernel_identity_suite(xdot, k, 0.5, 0.3);
    sym = std::max(sym, rep.max_symmetry_dev());
    lap = std::max(lap, rep.laplace_dev);
    rot = std::max(rot, rep.rotation_dev);
    conv = std::max(conv, rep.convolution_dev);
    y2 = std::max(y2, rep.y2_residual);
  }
  checks.push_back({"kernel_symmetry_dev", sym, 1e-12, "le"});
  checks.push_back({"kernel_laplace_dev", lap, 1e-6, "le"});
  checks.push_back({"kernel_rotation_dev", rot, 1e-6, "le"});
  checks.push_back({"kernel_convolution_dev", conv, 1e-8, "le"});
  checks.push_back({"kernel_y2_residual", y2, 1e-5, "le"});
}

void cmd_gh(const ExperimentConfig& cfg, std::vector<Check>& checks, Artifacts& files) {
  if (cfg.d != 1) throw ConfigError("gh: d = 1 only");
  const json& p = cfg.raw.value("params", json::object());
  const int k_max = jgeti(p, "kmax", 12);
  const double x_max = jget(p, "xmax", 30.0);
  const auto rule = BoundaryRule::make(x_max, jgeti(p, "panels", 10),
                                       jgeti(p, "nodes_per_panel", 16));
  const auto g = horizontal_from_config(cfg.raw, "g", 1);

  // transform table over the mu-grid (both orthants)
  CsvWriter csv(cfg.out_dir + "/gh_table.csv");
  csv.row({"xdot", "k", "re", "im"});
  std::vector<std::vector<complexd>> table_pos, table_neg;
  for (double x : rule.nodes) {
    table_pos.push_back(gh_transform_karray(g, {x}, k_max));
    table_neg.push_back(gh_transform_karray(g, {-x}, k_max));
  }
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    for (int k = -k_max; k <= k_max; ++k) {
      const complexd vn = table_neg[i][k + k_max], vp = table_pos[i][k + k_max];
      csv.row({fmt17(-rule.nodes[i]), std::to_string(k), fmt17(vn.real()), fmt17(vn.imag())});
      csv.row({fmt17(rule.nodes[i]), std::to_string(k), fmt17(vp.real()), fmt17(vp.imag())});
    }
  files.push_back("gh_table.csv");

  // closed form for the reference Gaussian
  const auto gauss = HorizontalFunction::gaussian(1, 1.0);
  double closed = 0;
  for (double x : {0.3, 1.0, 2.5, 7.0})
    closed = std::max(closed,
                      std::abs(gh_transform(gauss, {x}, {0}) - kPi * std::exp(-x)));
  checks.push_back({"gh_gaussian_closed_form", closed, jget(p, "closed_tol", 1e-6), "le"});

  // inversion round trip at seeded sample points
  auto table_fn = [&](const BoundaryPoint& bp) {
    size_t best = 0;
    double bd = 1e300;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      const double dd = std::abs(rule.nodes[i] - std::abs(bp.xdot[0]));
      if (dd < bd) {
        bd = dd;
        best = i;
      }
    }
    const auto& tab = (bp.xdot[0] >= 0 ? table_pos : table_neg)[best];
    return tab[bp.k[0] + k_max];
  };
  Rng rng(cfg.seed);
  double worst_inv = 0;
  CsvWriter inv(cfg.out_dir + "/gh_inversion.csv");
  inv.row({"y", "eta", "truth", "recon_re", "recon_im", "abs_err"});
  for (int i = 0; i < jgeti(p, "samples", 10); ++i) {
    PhasePoint Y({rng.uniform(-1.2, 1.2)}, {rng.uniform(-1.2, 1.2)});
    const complexd recon = gh_inverse(table_fn, Y, k_max, rule);
    const complexd truth = g.eval(Y);
    const double err = std::abs(recon - truth);
    worst_inv = std::max(worst_inv, err);
    inv.row({fmt17(Y.y[0]), fmt17(Y.eta[0]), fmt17(truth.real()), fmt17(recon.real()),
             fmt17(recon.imag()), fmt17(err)});
  }
  files.push_back("gh_inversion.csv");
  checks.push_back({"gh_inversion_max_error", worst_inv, jget(p, "inversion_tol", 1e-3), "le"});

  const auto pc = gh_plancherel_check(g, k_max, rule);
  checks.push_back({"gh_plancherel_ratio_error", std::abs(pc.ratio - 1.0),
                    jget(p, "plancherel_tol", 1e-3), "le"});

  const auto cr = gh_convolve_check(g, g, {1.0}, {0}, 15);
  checks.push_back({"gh_convolution_dev", cr.deviation, jget(p, "convolution_tol", 1e-7), "le"});
}

void cmd_asymptotics(const ExperimentConfig& cfg, std::vector<Check>& checks, Artifacts& files) {
  const json& p = cfg.raw.value("params", json::object());

  // W -> K rate on the standard configuration, lambda snapped to integer n
  std::vector<double> lambdas;
  const double xdot = jget(p, "xdot", 1.0);
  for (int j = 0; j < 12; ++j) {
    const long long n = std::llround(5.0 * std::pow(100.0, j / 11.0));
    lambdas.push_back(xdot / (2.0 * double(n)));
  }
  const PhasePoint Y({0.5}, {0.5});
  const RateFit wk = w_to_k_limit(xdot, 1, Y, lambdas);
  CsvWriter rates(cfg.out_dir + "/asym_rates.csv");
  rates.row({"check", "lambda", "error"});
  for (size_t i = 0; i < wk.params.size(); ++i)
    rates.row({"w_to_k", fmt17(wk.params[i]), fmt17(wk.errors[i])});
  checks.push_back({"w_to_k_slope", wk.slope, 0.45, "ge"});
  checks.push_back({"w_to_k_r2", wk.r2, 0.98, "ge"});

  const RateFit lad = ladder_expansion_check(2, +1, 1.0, lambdas);
  for (size_t i = 0; i < lad.params.size(); ++i)
    rates.row({"ladder_l2", fmt17(lad.params[i]), fmt17(lad.errors[i])});
  checks.push_back({"ladder_slope", lad.slope, 0.45, "ge"});
  checks.push_back({"ladder_r2", lad.r2, 0.98, "ge"});

  const RateFit ht = h_term_limit(1, 1, xdot, 1, lambdas);
  for (size_t i = 0; i < ht.params.size(); ++i)
    rates.row({"h_term_11", fmt17(ht.params[i]), fmt17(ht.errors[i])});
  checks.push_back({"h_term_slope", ht.slope, 0.45, "ge"});
  files.push_back("asym_rates.csv");

  // concentration toward the boundary measure
  std::vector<double> eps_list;
  for (int j = 0; j < 8; ++j) eps_list.push_back(1e-1 * std::pow(0.5, j));
  BoundaryProfile prof;
  prof.psi = [](double x, int k) { return k == 0 ? std::exp(-x) : 0.0; };
  prof.x_support = 26.0;
  prof.k_band = 0;
  const DeviationSequence conc = concentration_limit(prof, Mollifier{}, eps_list);
  CsvWriter cc(cfg.out_dir + "/concentration.csv");
  cc.row({"eps", "value", "deviation"});
  for (size_t i = 0; i < conc.eps.size(); ++i)
    cc.row({fmt17(conc.eps[i]), fmt17(conc.value[i]), fmt17(conc.deviation[i])});
  files.push_back("concentration.csv");
  bool decreasing = true;
  for (size_t i = 3; i < conc.deviation.size(); ++i)
    decreasing &= conc.deviation[i] <= conc.deviation[i - 1] * 1.02;
  checks.push_back({"concentration_final_dev", conc.deviation.back(),
                    jget(p, "concentration_tol", 5e-3), "le"});
  checks.push_back({"concentration_decreasing", decreasing ? 1.0 : 0.0, 1.0, "ge"});

  // horizontal limit for the reference Gaussian against a bump around xdot=1
  BoundaryProfile bump;
  bump.psi = [](double x, int k) {
    if (k != 0) return 0.0;
    const double t = (x - 1.0) / 0.6;
    return (std::abs(t) < 1.0) ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
  };
  bump.x_support = 1.7;
  bump.k_band = 0;
  std::vector<double> eps_h;
  for (int j = 0; j < 8; ++j) eps_h.push_back(1e-1 * std::pow(0.5, j));
  const auto gauss = HorizontalFunction::gaussian(1, 1.0);
  const DeviationSequence hor = horizontal_limit(gauss, 1.0, bump, eps_h);
  CsvWriter hh(cfg.out_dir + "/horizontal.csv");
  hh.row({"eps", "value", "deviation"});
  for (size_t i = 0; i < hor.eps.size(); ++i)
    hh.row({fmt17(hor.eps[i]), fmt17(hor.value[i]), fmt17(hor.deviation[i])});
  files.push_back("horizontal.csv");
  bool hdec = true;
  for (size_t i = 3; i < hor.deviation.size(); ++i)
    hdec &= hor.deviation[i] <= hor.deviation[i - 1] * 1.02;
  checks.push_back({"horizontal_final_dev", hor.deviation.back(),
                    jget(p, "horizontal_tol", 1e-2), "le"});
  checks.push_back({"horizontal_decreasing", hdec ? 1.0 : 0.0, 1.0, "ge"});
}

void cmd_identities(const ExperimentConfig& cfg, std::vector<Check>& checks, Artifacts&) {
  Rng rng(cfg.seed);

  // orthonormality of the rescaled basis by quadrature
  double ortho = 0;
  for (double lam : {0.1, 1.0, 4.0}) {
    const auto rule = make_rule(RuleKind::gauss_hermite, 64);
    const double s = std::sqrt(lam);
    for (int n = 0; n <= 20; ++n)
      for (int m = n; m <= 20; ++m) {
        double acc = 0;
        for (int i = 0; i < rule.size(); ++i) {
          const double x = rule.nodes[i] / s;
          const double hn = hermite_rescaled(MultiIndex({n}), lam, std::span(&x, 1));
          const double hm = hermite_rescaled(MultiIndex({m}), lam, std::span(&x, 1));
          acc += rule.weights[i] / s * hn * hm * std::exp(rule.nodes[i] * rule.nodes[i]);
        }
        ortho = std::max(ortho, std::abs(acc - (n == m ? 1.0 : 0.0)));
      }
  }
  checks.push_back({"orthonormality_dev", ortho, 1e-10, "le"});

  // ladder identities, cancelled in exact path arithmetic
  using Op = LadderOp;
  const LadderChainTerm bracket_defect[] = {
      {{Op::A, Op::C}, +1.0}, {{Op::C, Op::A}, -1.0}, {{}, +2.0}};
  const LadderChainTerm commutator_defect[] = {
      {{Op::C, Op::A, Op::C}, +1.0}, {{Op::A, Op::C, Op::C}, -1.0}, {{Op::C}, -2.0}};
  double bracket = 0, commute = 0;
  for (int n = 0; n <= 20; ++n) {
    const auto v = HermiteCoefficientVector::basis(n);
    bracket = std::max(bracket, ladder_apply_combo(bracket_defect, v).norm());
    commute = std::max(commute, ladder_apply_combo(commutator_defect, v).norm());
  }
  checks.push_back({"ladder_bracket_dev", bracket, 0.0, "le"});
  checks.push_back({"oscillator_commutator_dev", commute, 0.0, "le"});

  // group associativity on seeded triples
  double assoc = 0;
  for (int i = 0; i < 100; ++i) {
    HeisenbergPoint a = HeisenbergPoint::identity(1), b = a, c = a;
    for (HeisenbergPoint* w : {&a, &b, &c}) {
      w->Y.y[0] = rng.uniform(-2, 2);
      w->Y.eta[0] = rng.uniform(-2, 2);
      w->s = rng.uniform(-2, 2);
    }
    const auto lhs = group_mul(group_mul(a, b), c);
    const auto rhs = group_mul(a, group_mul(b, c));
    assoc = std::max({assoc, std::abs(lhs.Y.y[0] - rhs.Y.y[0]),
                      std::abs(lhs.Y.eta[0] - rhs.Y.eta[0]), std::abs(lhs.s - rhs.s)});
  }
  checks.push_back({"associativity_dev", assoc, 1e-12, "le"});

  // Wigner symmetries on seeded admissible points
  double wsym = 0;
  for (int i = 0; i < 10; ++i) {
    const int n = rng.uniform_int(0, 6), m = rng.uniform_int(0, 6);
    const double lam = rng.uniform(0.1, 1.0) * (rng.uniform_int(0, 1) ? 1 : -1);
    const PhasePoint Y({rng.uniform(-1, 1)}, {rng.uniform(-1, 1)});
    const FrequencyPoint w(MultiIndex({n}), MultiIndex({m}), lam);
    wsym = std::max(wsym, wigner_symmetries_check(w, Y).max_dev());
  }
  checks.push_back({"wigner_symmetry_dev", wsym, 1e-10, "le"});

  // kernel symmetries (exact phase identities under the shared rule)
  double ksym = 0;
  for (int k = 0; k <= 4; ++k)
    ksym = std::max(ksym, kernel_identity_suite(1.3, k, 0.7, -0.4).max_symmetry_dev());
  checks.push_back({"kernel_symmetry_dev", ksym, 1e-12, "le"});

  // right/left invariant difference identity: -X~^2 + X^2 - Xi~^2 + Xi^2 = 8 d_s T
  const auto f = GaussHermiteFunction::gaussian(1, 1.0, 1.0);
  auto sq = [&](FieldKind kind, const GaussHermiteFunction& h) {
    return vector_field_apply(kind, 0, vector_field_apply(kind, 0, h));
  };
  GaussHermiteFunction lhs = sq(FieldKind::X, f) - sq(FieldKind::Xtilde, f) +
                             sq(FieldKind::Xi, f) - sq(FieldKind::Xitilde, f);
  GaussHermiteFunction rhs =
      vector_field_apply(FieldKind::T, 0, f).differentiate(2).scaled(8.0);
  GaussHermiteFunction diff = lhs - rhs;
  double fieldid = 0;
  for (const auto& [alpha, c] : diff.terms()) fieldid = std::max(fieldid, std::abs(c));
  checks.push_back({"invariant_fields_identity_dev", fieldid, 0.0, "le"});

  // Young's inequality at sampled points
  const auto g = GaussHermiteFunction::gaussian(1, 0.7, 1.3);
  const double fl1 = f.l1_norm(), gsup = 1.0; // Gaussian peak
  double young = 0;
  for (int i = 0; i < 5; ++i) {
    HeisenbergPoint w = HeisenbergPoint::identity(1);
    w.Y.y[0] = rng.uniform(-1, 1);
    w.Y.eta[0] = rng.uniform(-1, 1);
    w.s = rng.uniform(-1, 1);
    young = std::max(young, std::abs(group_convolve(g, f, w).value));
  }
  checks.push_back({"young_bound_excess", young - gsup * fl1, 0.0, "le"});
}

} // namespace

// ---------------------------------------------------------------------------
// config plumbing
// ---------------------------------------------------------------------------

json to_json(const GaussHermiteFunction& f) {
  json terms = json::array();
  for (const auto& [alpha, c] : f.terms()) {
    json t;
    t["re"] = c.real();
    t["im"] = c.imag();
    t["alpha"] = alpha;
    terms.push_back(t);
  }
  return json{{"d", f.dim()}, {"a", f.width_y()}, {"b", f.width_s()}, {"terms", terms}};
}

GaussHermiteFunction gauss_hermite_from_json(const json& j) {
  try {
    GaussHermiteFunction f(j.at("d").get<int>(), j.at("a").get<double>(),
                           j.at("b").get<double>());
    for (const auto& t : j.at("terms"))
      f.add_term(complexd(t.at("re").get<double>(), t.value("im", 0.0)),
                 t.at("alpha").get<std::vector<int>>());
    return f;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad function record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad function record: ") + e.what());
  }
}

json to_json(const HorizontalFunction& f) {
  json terms = json::array();
  for (const auto& [alpha, c] : f.terms()) {
    json t;
    t["re"] = c.real();
    t["im"] = c.imag();
    t["alpha"] = alpha;
    terms.push_back(t);
  }
  return json{{"d", f.dim()}, {"a", f.width()}, {"terms", terms}};
}

HorizontalFunction horizontal_from_json(const json& j) {
  try {
    HorizontalFunction f(j.at("d").get<int>(), j.at("a").get<double>());
    for (const auto& t : j.at("terms"))
      f.add_term(complexd(t.at("re").get<double>(), t.value("im", 0.0)),
                 t.at("alpha").get<std::vector<int>>());
    return f;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad horizontal record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad horizontal record: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.contains("command") || !j.at("command").is_string())
    throw ConfigError("config key 'command' missing or not a string");
  cfg.command = j.at("command").get<std::string>();
  cfg.d = j.value("d", 1);
  if (cfg.d < 1 || cfg.d > 2) throw ConfigError("config key 'd' must be 1 or 2");
  if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  cfg.threads = j.value("threads", 0);
  cfg.out_dir = j.value("out_dir", std::string("."));
  cfg.raw = j;
  return cfg;
}

int run(const ExperimentConfig& cfg) {
  set_max_threads(cfg.threads);
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<Check> checks;
  Artifacts files;
  if (cfg.command == "transform") cmd_transform(cfg, checks, files);
  else if (cfg.command == "invert") cmd_invert(cfg, checks, files);
  else if (cfg.command == "plancherel") cmd_plancherel(cfg, checks, files);
  else if (cfg.command == "convolve") cmd_convolve(cfg, checks, files);
  else if (cfg.command == "kernel") cmd_kernel(cfg, checks, files);
  else if (cfg.command == "gh") cmd_gh(cfg, checks, files);
  else if (cfg.command == "asymptotics") cmd_asymptotics(cfg, checks, files);
  else if (cfg.command == "identities") cmd_identities(cfg, checks, files);
  else throw ConfigError("unknown command '" + cfg.command + "'");

  json rep;
  rep["command"] = cfg.command;
  rep["config_digest"] = config_digest(cfg.raw);
  rep["version"] = kVersion;
  rep["seed"] = cfg.seed;
  json jchecks = json::array();
  bool all_pass = true;
  for (const auto& c : checks) {
    jchecks.push_back({{"name", c.name},
                       {"value", c.value},
                       {"tolerance", c.tolerance},
                       {"cmp", c.cmp},
                       {"pass", c.pass()}});
    all_pass &= c.pass();
  }
  rep["checks"] = jchecks;
  rep["artifacts"] = files;

  std::ofstream out(cfg.out_dir + "/report.json");
  out << rep.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

} // namespace hfreq::cli
