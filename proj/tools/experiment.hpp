#pragma once

#include "hfreq/heisenberg.hpp"
#include "hfreq/horizontal.hpp"

#include <json.hpp>

#include <string>

namespace hfreq::cli {

using nlohmann::json;

/// One pass/fail line of a report: value compared against a tolerance,
/// either value <= tol ("le") or value >= tol ("ge").
struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  std::string cmp = "le";
  bool pass() const { return cmp == "ge" ? value >= tolerance : value <= tolerance; }
};

struct ExperimentConfig {
  std::string command;
  int d = 1;
  uint64_t seed = 20240101;
  int threads = 0;
  std::string out_dir = ".";
  json raw; // the full (post-override) configuration tree

  static ExperimentConfig from_json(const json& j);
};

/// Executes the named experiment, writes report.json and the CSV artifacts
/// into out_dir, and returns the process exit status: 0 when every check
/// passes, 1 on a failed check. Configuration errors throw ConfigError and
/// the driver maps them to status 2.
int run(const ExperimentConfig& cfg);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// family record <-> JSON ({d, a, b, terms:[{re, im, alpha:[...]}]})
json to_json(const GaussHermiteFunction& f);
GaussHermiteFunction gauss_hermite_from_json(const json& j);
json to_json(const HorizontalFunction& f);
HorizontalFunction horizontal_from_json(const json& j);

} // namespace hfreq::cli
