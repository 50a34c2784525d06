#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gmclab/experiments.hpp"

namespace gmclab {

struct SuiteConfig {
  std::uint64_t master_seed = 20240521;
  unsigned jobs = 1;
  // Resolved, validated configs in execution order.
  std::vector<ExperimentConfig> experiments;
  // Names whose seed was given explicitly in their section.
  std::vector<std::string> pinned_seeds;
};

// Seed of an experiment that does not pin its own: a hash of the master seed
// and the experiment name.
std::uint64_t derive_seed(std::uint64_t master, const std::string& name);

// Grammar in docs/config.md. ParseError carries line and column;
// ValidationError names the violated range rule.
SuiteConfig parse_config_text(const std::string& text);
SuiteConfig parse_config(const std::filesystem::path& path);  // IoError if unreadable

// Replaces the master seed and re-derives every experiment seed, pinned or not.
void override_seed(SuiteConfig& suite, std::uint64_t seed);

}  // namespace gmclab
