#include "symplopt/bench.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "symplopt/mmio.hpp"

namespace symplopt::bench {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    double value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value '" + s + "' for " + key);
  }
}

long to_long(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    long value = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value '" + s + "' for " + key);
  }
}

std::string format_double(double v, int precision = 12) {
  std::ostringstream out;
  out << std::setprecision(precision) << std::scientific << v;
  return out.str();
}

}  // namespace

namespace {

struct SchemeParts {
  std::string method, retraction, metric;
};

SchemeParts parse_scheme(const std::string& name) {
  const auto first = name.find('-');
  const auto second = name.rfind('-');
  if (first == std::string::npos || second == first)
    throw ConfigError("unknown scheme '" + name + "' (expected method-retraction-metric)");
  SchemeParts parts{name.substr(0, first), name.substr(first + 1, second - first - 1),
                    name.substr(second + 1)};
  static const std::vector<std::string> known_methods = {"RGD", "RN", "RiN", "hRN", "hRiN"};
  if (std::find(known_methods.begin(), known_methods.end(), parts.method) ==
      known_methods.end())
    throw ConfigError("unknown scheme '" + name + "': bad method '" + parts.method + "'");
  retraction_from_tag(parts.retraction);
  if (parts.metric != "e" && parts.metric != "M" && parts.metric != "c")
    throw ConfigError("unknown scheme '" + name + "': bad metric '" + parts.metric + "'");
  return parts;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string section, line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_number) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_number) + ": expected key = value");
    sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto get = [&](const std::string& sec, const std::string& key,
                 const std::string& fallback) -> std::string {
    auto s = sections.find(sec);
    if (s == sections.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
  };

  config.problem.family = get("problem", "family", "least_squares");
  config.problem.n = to_long(get("problem", "n", "10"), "problem.n");
  config.problem.k = to_long(get("problem", "k", "2"), "problem.k");
  config.problem.seed =
      static_cast<std::uint64_t>(to_long(get("problem", "seed", "0"), "problem.seed"));
  config.problem.a_file = get("problem", "a_file", "");
  config.problem.b_file = get("problem", "b_file", "");

  config.methods = split_list(get("run", "methods", ""));
  config.schemes = split_list(get("run", "schemes", ""));
  config.metrics = split_list(get("run", "metrics", ""));
  config.retractions = split_list(get("run", "retractions", ""));
  config.rho = to_double(get("run", "rho", "1.0"), "run.rho");
  config.tol = to_double(get("run", "tol", "1e-8"), "run.tol");
  config.theta = to_double(get("run", "theta", "1e-3"), "run.theta");
  config.mxit = static_cast<int>(to_long(get("run", "mxit", "1000"), "run.mxit"));

  config.csv_path = get("output", "csv", "results.csv");
  config.history_dir = get("output", "history_dir", "history");

  static const std::vector<std::string> known_methods = {"RGD", "RN", "RiN", "hRN", "hRiN"};
  for (const auto& m : config.methods)
    if (std::find(known_methods.begin(), known_methods.end(), m) == known_methods.end())
      throw ConfigError("unknown method '" + m + "'");
  for (const auto& m : config.metrics)
    if (m != "e" && m != "M" && m != "c") throw ConfigError("unknown metric '" + m + "'");
  for (const auto& r : config.retractions) retraction_from_tag(r);
  for (const auto& s : config.schemes) parse_scheme(s);
  if (!(config.tol < config.theta))
    throw ConfigError("run.tol must be smaller than run.theta");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  return parse_config(in);
}

ProblemInstance build_problem(const ProblemSpec& spec) {
  if (spec.n < 1 || spec.k < 1 || spec.k > spec.n)
    throw ConfigError("problem sizes must satisfy 1 <= k <= n");
  const bool from_files = !spec.a_file.empty();
  if (spec.family == "least_squares") {
    if (from_files) {
      Matrix a = read_matrix_market(spec.a_file);
      if (spec.b_file.empty()) throw ConfigError("least_squares from files needs b_file");
      Matrix b = read_matrix_market(spec.b_file);
      ProblemInstance inst{least_squares_problem(a, b),
                           random_point({a.rows() / 2, b.cols() / 2}, spec.seed),
                           {a.rows() / 2, b.cols() / 2},
                           "least_squares",
                           std::nullopt,
                           std::nullopt,
                           a,
                           b};
      return inst;
    }
    return make_least_squares_instance(spec.n, spec.k, spec.seed);
  }
  if (spec.family == "trace") {
    if (from_files) {
      Matrix a = read_matrix_market(spec.a_file);
      ProblemInstance inst{trace_problem(a),
                           SymplecticPoint::canonical({a.rows() / 2, spec.k}),
                           {a.rows() / 2, spec.k},
                           "trace",
                           std::nullopt,
                           std::nullopt,
                           a,
                           Matrix()};
      return inst;
    }
    return make_trace_instance(spec.n, spec.k, spec.seed);
  }
  if (spec.family == "trace_gyroscopic")
    return make_gyroscopic_trace_instance(spec.n, spec.k, spec.seed);
  if (spec.family == "quartic_trace") {
    if (spec.k != spec.n) throw ConfigError("quartic_trace requires k = n");
    if (from_files) {
      Matrix a = read_matrix_market(spec.a_file);
      if (spec.b_file.empty()) throw ConfigError("quartic_trace from files needs b_file");
      Matrix b = read_matrix_market(spec.b_file);
      ProblemInstance inst{quartic_trace_problem(a, b),
                           random_point({a.rows() / 2, a.rows() / 2}, spec.seed),
                           {a.rows() / 2, a.rows() / 2},
                           "quartic_trace",
                           std::nullopt,
                           std::nullopt,
                           a,
                           b};
      return inst;
    }
    return make_quartic_instance(spec.n, spec.seed);
  }
  throw ConfigError("unknown problem family '" + spec.family + "'");
}

namespace {

Metric make_metric(const std::string& tag, double rho, const ProblemInstance& instance) {
  if (tag == "e") return Metric::euclidean();
  if (tag == "c") return Metric::canonical_like(rho);
  if (tag == "M") {
    const Matrix* h = instance.cost->constant_hessian();
    if (h == nullptr)
      throw ConfigError("metric M needs a cost with a constant ambient Hessian");
    return Metric::weighted_euclidean(*h);
  }
  throw ConfigError("unknown metric '" + tag + "'");
}

RunReport dispatch(const std::string& method, const OptimizerConfig& config,
                   const ProblemInstance& instance) {
  if (method == "RGD") return rgd(config, *instance.cost, instance.x0);
  if (method == "RN") return newton(config, *instance.cost, instance.x0, NewtonVariant::kExact);
  if (method == "RiN")
    return newton(config, *instance.cost, instance.x0, NewtonVariant::kInexact);
  if (method == "hRN")
    return hybrid(config, *instance.cost, instance.x0, NewtonVariant::kExact);
  if (method == "hRiN")
    return hybrid(config, *instance.cost, instance.x0, NewtonVariant::kInexact);
  throw ConfigError("unknown method '" + method + "'");
}

void write_history(const std::string& dir, const SchemeResult& result) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + result.scheme + ".csv";
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "j,phase,f,grad_norm_rel,step\n";
  for (const auto& rec : result.report.history)
    out << rec.j << "," << rec.phase << "," << format_double(rec.f) << ","
        << format_double(rec.grad_norm_rel) << "," << format_double(rec.step, 6) << "\n";
}

}  // namespace

std::string csv_header() {
  return "scheme,phase1_iters,phase2_iters,phase1_time_s,phase2_time_s,f_star,"
         "grad_norm,rel_dist_to_known_min,feas,status";
}

std::string csv_row(const SchemeResult& result) {
  std::ostringstream out;
  const RunReport& r = result.report;
  out << result.scheme << "," << r.phase1_iterations << "," << r.phase2_iterations << ","
      << format_double(r.phase1_seconds, 6) << "," << format_double(r.phase2_seconds, 6) << ","
      << format_double(r.f_star) << "," << format_double(r.grad_norm) << ",";
  if (result.rel_dist_to_known_min >= 0) out << format_double(result.rel_dist_to_known_min);
  out << "," << format_double(r.feasibility) << ","
      << (result.error ? "error" : run_status_name(r.status));
  return out.str();
}

std::vector<SchemeResult> run_suite(const ExperimentConfig& config, std::ostream& log) {
  ProblemInstance instance = build_problem(config.problem);
  std::vector<SchemeResult> results;

  std::vector<SchemeParts> schemes;
  if (!config.schemes.empty()) {
    for (const auto& name : config.schemes) schemes.push_back(parse_scheme(name));
  } else {
    for (const auto& method : config.methods)
      for (const auto& retraction : config.retractions)
        for (const auto& metric_tag : config.metrics)
          schemes.push_back({method, retraction, metric_tag});
  }

  for (const auto& parts : schemes) {
    const auto& method = parts.method;
    const auto& retraction = parts.retraction;
    const auto& metric_tag = parts.metric;
    {
      {
        SchemeResult result;
        result.scheme = method + "-" + retraction + "-" + metric_tag;
        log << "running " << result.scheme << " on " << instance.family << " (n="
            << instance.dims.n << ", k=" << instance.dims.k << ") ... " << std::flush;
        try {
          OptimizerConfig opt;
          opt.metric = make_metric(metric_tag, config.rho, instance);
          opt.retraction = retraction_from_tag(retraction);
          opt.tol = config.tol;
          opt.theta = config.theta;
          opt.mxit = config.mxit;
          result.report = dispatch(method, opt, instance);
          if (instance.known_minimizer) {
            const Matrix& xmin = *instance.known_minimizer;
            result.rel_dist_to_known_min =
                (result.report.x_star - xmin).norm() / xmin.norm();
          }
          log << run_status_name(result.report.status) << " (f*="
              << format_double(result.report.f_star, 4) << ", "
              << result.report.phase1_iterations << "+"
              << result.report.phase2_iterations << " iters)\n";
        } catch (const std::exception& e) {
          result.error = true;
          result.error_message = e.what();
          result.report.status = RunStatus::kError;
          log << "error: " << e.what() << "\n";
        }
        results.push_back(std::move(result));
      }
    }
  }

  std::ofstream csv(config.csv_path);
  if (!csv) throw IoError("cannot open " + config.csv_path + " for writing");
  csv << csv_header() << "\n";
  for (const auto& result : results) csv << csv_row(result) << "\n";
  for (const auto& result : results)
    if (!result.error) write_history(config.history_dir, result);
  return results;
}

int count_errors(const std::vector<SchemeResult>& results) {
  int errors = 0;
  for (const auto& r : results) errors += r.error ? 1 : 0;
  return errors;
}

void write_example_configs(const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto emit = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir + "/" + name);
    if (!out) throw IoError("cannot write " + dir + "/" + name);
    out << body;
  };
  emit("least_squares.cfg",
       "# symplectic least squares benchmark\n"
       "[problem]\n"
       "family = least_squares\n"
       "n = 50\n"
       "k = 6\n"
       "seed = 0\n"
       "\n"
       "[run]\n"
       "methods = RGD, hRN, hRiN\n"
       "metrics = e, M\n"
       "retractions = SR, Cay\n"
       "tol = 1e-10\n"
       "theta = 1e-4\n"
       "mxit = 6000\n"
       "\n"
       "[output]\n"
       "csv = least_squares_results.csv\n"
       "history_dir = least_squares_history\n");
  emit("trace.cfg",
       "# symplectic trace minimization benchmark\n"
       "[problem]\n"
       "family = trace\n"
       "n = 200\n"
       "k = 5\n"
       "seed = 0\n"
       "\n"
       "[run]\n"
       "methods = RGD, hRiN\n"
       "metrics = c, e, M\n"
       "retractions = SR, Cay\n"
       "tol = 1e-8\n"
       "theta = 1e-3\n"
       "mxit = 5000\n"
       "\n"
       "[output]\n"
       "csv = trace_results.csv\n"
       "history_dir = trace_history\n");
  emit("quartic_trace.cfg",
       "# quartic trace minimization benchmark (square case k = n)\n"
       "[problem]\n"
       "family = quartic_trace\n"
       "n = 10\n"
       "k = 10\n"
       "seed = 0\n"
       "\n"
       "[run]\n"
       "methods = RGD, hRiN\n"
       "metrics = c, e\n"
       "retractions = SR\n"
       "tol = 1e-9\n"
       "theta = 1e-5\n"
       "mxit = 8000\n"
       "\n"
       "[output]\n"
       "csv = quartic_results.csv\n"
       "history_dir = quartic_history\n");
}

}  // namespace symplopt::bench
