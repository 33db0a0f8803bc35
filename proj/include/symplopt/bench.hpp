#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "symplopt/optimize.hpp"
#include "symplopt/problems.hpp"

namespace symplopt::bench {

struct ProblemSpec {
  std::string family;  // least_squares | trace | trace_gyroscopic | quartic_trace
  Index n = 0;
  Index k = 0;
  std::uint64_t seed = 0;
  std::string a_file;  // optional Matrix Market inputs override the generator
  std::string b_file;
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<std::string> methods;      // RGD | RN | RiN | hRN | hRiN
  std::vector<std::string> metrics;      // e | M | c
  std::vector<std::string> retractions;  // SR | Cay
  /// Explicit scheme names ("hRN-SR-M", ...); when non-empty they replace
  /// the methods x retractions x metrics cross product.
  std::vector<std::string> schemes;
  double rho = 1.0;
  double tol = 1e-8;
  double theta = 1e-3;
  int mxit = 1000;
  std::string csv_path = "results.csv";
  std::string history_dir = "history";
};

/// Parses the key/value + [section] config format documented in the README.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

ProblemInstance build_problem(const ProblemSpec& spec);

struct SchemeResult {
  std::string scheme;  // "<method>-<retraction>-<metric>", e.g. "hRN-SR-M"
  RunReport report;
  bool error = false;
  std::string error_message;
  double rel_dist_to_known_min = -1;  // negative when no minimizer is known
};

/// Runs every (method, metric, retraction) triple, writes one CSV row per
/// scheme plus one history file per scheme, and returns the results.
/// Per-scheme failures become status entries; the suite keeps going.
std::vector<SchemeResult> run_suite(const ExperimentConfig& config, std::ostream& log);

/// Number of schemes that ended in an error status (the CLI exit code).
int count_errors(const std::vector<SchemeResult>& results);

std::string csv_header();
std::string csv_row(const SchemeResult& result);

/// Writes the three example configuration files into a directory.
void write_example_configs(const std::string& dir);

}  // namespace symplopt::bench
