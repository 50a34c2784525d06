#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmclab/config.hpp"
#include "gmclab/experiments.hpp"

namespace gmclab {

extern const char* const kToolVersion;

// RFC 4180 with CRLF line ends; doubles with 17 significant digits.
// EmitError on ragged rows or non-finite numbers.
void write_series(std::ostream& out, const Series& series);
// Writes <out_dir>/<series.name>.csv; IoError if the file cannot be written.
std::filesystem::path emit_series(const Series& series, const std::filesystem::path& out_dir);
// Inverse of write_series, cells returned as text.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

struct ExperimentOutcome {
  Verdict verdict;
  std::string error;  // set when the experiment threw
  double seconds = 0.0;
  std::vector<std::string> files;

  bool pass() const noexcept { return error.empty() && verdict.pass; }
};

// 0 if every outcome passes, 1 otherwise.
int exit_code(const std::vector<ExperimentOutcome>& outcomes) noexcept;

// Runs the suite, writing CSV series and manifest.json into out_dir.
// Progress lines go to log when given. Returns the outcomes in config order.
std::vector<ExperimentOutcome> run_suite(const SuiteConfig& suite, const std::filesystem::path& out_dir,
                                         std::ostream* log = nullptr);

}  // namespace gmclab
