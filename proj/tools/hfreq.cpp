#include "experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using hfreq::cli::ConfigError;
using hfreq::cli::ExperimentConfig;
using nlohmann::json;

int main(int argc, char** argv) {
  CLI::App app{"hfreq: frequency-space Fourier analysis on the Heisenberg group"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir;
  int64_t seed = -1;
  int threads = -1;
  app.add_option("--config", config_path, "JSON experiment configuration file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--seed", seed, "RNG seed (overrides config)");
  app.add_option("--threads", threads, "worker threads, 0 = all (overrides config)");

  // numeric overrides; flags win over the config file
  double xdot = std::nan(""), lambda_min = std::nan(""), lambda_max = std::nan("");
  double tolerance = std::nan("");
  int kmax = -1, gridres = -1, n_max = -1, panels = -1, nodes_per_panel = -1, samples = -1;
  app.add_option("--xdot", xdot, "kernel/gh base point");
  app.add_option("--kmax", kmax, "kernel/gh k truncation");
  app.add_option("--grid", gridres, "kernel table resolution");
  app.add_option("--samples", samples, "number of sample points");
  app.add_option("--tolerance", tolerance, "main tolerance of the command");
  app.add_option("--n-max", n_max, "frequency grid index cap");
  app.add_option("--lambda-min", lambda_min, "frequency grid puncture");
  app.add_option("--lambda-max", lambda_max, "frequency grid extent");
  app.add_option("--panels", panels, "lambda panels per side");
  app.add_option("--nodes-per-panel", nodes_per_panel, "Gauss-Legendre nodes per panel");

  std::vector<std::string> names{"transform", "invert",      "plancherel", "convolve",
                                 "kernel",    "gh",          "asymptotics", "identities"};
  for (const auto& n : names) app.add_subcommand(n, "run the '" + n + "' experiment");

  CLI11_PARSE(app, argc, argv);

  json j;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "hfreq: cannot open config file '" << config_path << "'\n";
      return 2;
    }
    try {
      in >> j;
    } catch (const json::exception& e) {
      std::cerr << "hfreq: config parse error: " << e.what() << "\n";
      return 2;
    }
  } else {
    j = json::object();
  }

  for (const auto* sub : app.get_subcommands()) j["command"] = sub->get_name();
  if (!out_dir.empty()) j["out_dir"] = out_dir;
  if (seed >= 0) j["seed"] = uint64_t(seed);
  if (threads >= 0) j["threads"] = threads;

  auto set_param = [&](const char* key, double v) {
    if (!std::isnan(v)) j["params"][key] = v;
  };
  set_param("xdot", xdot);
  set_param("tolerance", tolerance);
  if (kmax >= 0) j["params"]["kmax"] = kmax;
  if (gridres >= 0) j["params"]["grid"] = gridres;
  if (samples >= 0) j["params"]["samples"] = samples;
  if (n_max >= 0) j["grid"]["n_max"] = n_max;
  if (!std::isnan(lambda_min)) j["grid"]["lambda_min"] = lambda_min;
  if (!std::isnan(lambda_max)) j["grid"]["lambda_max"] = lambda_max;
  if (panels > 0) j["grid"]["panels"] = panels;
  if (nodes_per_panel > 0) j["grid"]["nodes_per_panel"] = nodes_per_panel;

  try {
    const ExperimentConfig cfg = ExperimentConfig::from_json(j);
    const int status = hfreq::cli::run(cfg);
    std::cout << "report: " << cfg.out_dir << "/report.json (status " << status << ")\n";
    return status;
  } catch (const ConfigError& e) {
    std::cerr << "hfreq: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hfreq: error: " << e.what() << "\n";
    return 1;
  }
}
