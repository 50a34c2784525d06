#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gmclab/config.hpp"
#include "gmclab/errors.hpp"
#include "gmclab/suite.hpp"

namespace {

constexpr int kUsage = 2;

std::optional<std::uint64_t> env_uint(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v, &end, 10);
  if (*end != '\0' || v[0] == '-') throw gmclab::ConfigError(std::string(name) + " must be a non-negative integer");
  return x;
}

void print_list() {
  for (const auto& e : gmclab::registry()) std::cout << e.name << "\t" << e.claim << "\n";
}

void print_describe(const std::string& name) {
  const auto& e = gmclab::find_experiment(name);
  const auto& d = e.defaults;
  std::cout << e.name << "\n\n" << e.claim << "\n\nparameters (defaults):\n";
  std::cout << "  gamma = " << d.gamma << "\n  delta = " << d.delta << "\n  epsilon = " << d.eps()
            << "\n  h = " << d.spacing() << "\n  replicas = " << d.replicas << "\n";
  for (const auto& [k, v] : d.params) {
    std::cout << "  " << k << " = ";
    for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? ", " : "") << v[i];
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments on Gaussian multiplicative chaos and its inverse"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the experiments selected by a config file");
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  run->add_option("config", config_path, "Config file (see docs/config.md)")->required();
  run->add_option("--out", out_dir, "Output directory for CSV series and manifest.json")->required();
  run->add_option("--seed", seed, "Master seed; overrides SEED and the config");
  run->add_option("--jobs", jobs, "Worker threads; overrides JOBS and the config")->check(CLI::Range(1u, 1024u));

  app.add_subcommand("list", "List the available experiments");
  auto* describe = app.add_subcommand("describe", "Show an experiment's claim and default parameters");
  std::string name;
  describe->add_option("experiment", name, "Experiment name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (app.got_subcommand("list")) {
      print_list();
      return 0;
    }
    if (app.got_subcommand("describe")) {
      print_describe(name);
      return 0;
    }
    gmclab::SuiteConfig suite = gmclab::parse_config(config_path);
    if (!seed) seed = env_uint("SEED");
    if (seed) gmclab::override_seed(suite, *seed);
    if (!jobs) {
      if (const auto j = env_uint("JOBS")) {
        if (*j < 1 || *j > 1024) throw gmclab::ConfigError("JOBS must lie in 1..1024");
        jobs = static_cast<unsigned>(*j);
      }
    }
    if (jobs) suite.jobs = *jobs;
    const auto outcomes = gmclab::run_suite(suite, out_dir, &std::cout);
    return gmclab::exit_code(outcomes);
  } catch (const gmclab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
