#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gmclab/graph.hpp"
#include "gmclab/logfield.hpp"
#include "gmclab/stattest.hpp"

namespace gmclab {

struct ExperimentConfig {
  std::string name;
  double gamma = 0.5;
  double delta = 1.0;
  double epsilon = 0.0;  // 0: delta * 2^-7
  double h = 0.0;        // 0: epsilon / 4
  std::size_t replicas = 1000;
  std::uint64_t seed = 1;
  // Experiment-specific parameters; scalars are one-element lists.
  std::map<std::string, std::vector<double>> params;

  double eps() const noexcept { return epsilon > 0.0 ? epsilon : delta / 128.0; }
  double spacing() const noexcept { return h > 0.0 ? h : eps() / 4.0; }
  double get(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;

  // ValidationError on the first violated range rule.
  void validate() const;
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
  double value = 0.0;  // the statistic that was compared
};

struct Verdict {
  std::string experiment;
  std::string claim;
  bool pass = true;
  bool degenerate = false;  // gamma = 0 and similar: closed-form answer
  std::vector<Check> checks;
  std::vector<Series> series;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;

  void add(std::string name, bool ok, std::string detail = {}, double value = 0.0);
  const Check* check(const std::string& name) const;
};

struct ExperimentInfo {
  std::string name;
  std::string claim;
  ExperimentConfig defaults;
  std::function<Verdict(const ExperimentConfig&)> run;
};

const std::vector<ExperimentInfo>& registry();
const ExperimentInfo& find_experiment(const std::string& name);  // ConfigError if unknown

// Gap graph built from one realization bundle: per-scale inverse values.
struct GapScale {
  double delta_k = 1.0;
  double q_a = 0.0;  // Q^k(a_k)
  double q_b = 0.0;  // Q^k(b_k)
};

Graph build_gap_graph(const std::vector<GapScale>& scales);

// Default scale parameters: delta_k = rho^k, a_k = rho_a rho^k, b_k = rho_b rho^k.
struct GapParameters {
  double rho = 0.5;
  double rho_a = 0.8408964152537145;  // 2^-0.25
  double rho_b = 0.5946035575013605;  // 2^-0.75
};

Verdict exp_delta_smp(const ExperimentConfig& cfg);
Verdict exp_nonlinear_expectation(const ExperimentConfig& cfg);
Verdict exp_inverse_scaling(const ExperimentConfig& cfg);
Verdict exp_ergodic(const ExperimentConfig& cfg);
Verdict exp_lebesgue_rate(const ExperimentConfig& cfg);
Verdict exp_cauchy_rate(const ExperimentConfig& cfg);
Verdict exp_inverse_moments(const ExperimentConfig& cfg);
Verdict exp_ratio_and_dilatation(const ExperimentConfig& cfg);
Verdict exp_decoupling(const ExperimentConfig& cfg);
Verdict exp_multipoint_sanity(const ExperimentConfig& cfg);

// Closed-form helpers used by the experiments and exposed for tests.
double lebesgue_rate_bound(double x, double delta_n, double gamma);
double inverse_moment_left_endpoint(double gamma);  // -(1+gamma^2/2)^2/(2 gamma^2)

}  // namespace gmclab
