#include "gmclab/suite.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <ostream>

#include <json.hpp>

#include "gmclab/parallel.hpp"

namespace gmclab {

const char* const kToolVersion = GMCLAB_VERSION;

namespace {

using nlohmann::ordered_json;

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) throw EmitError("non-finite value in CSV output");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["gamma"] = c.gamma;
  j["delta"] = c.delta;
  j["epsilon"] = c.eps();
  j["h"] = c.spacing();
  j["replicas"] = c.replicas;
  j["seed"] = c.seed;
  ordered_json p = ordered_json::object();
  for (const auto& [k, v] : c.params) p[k] = v.size() == 1 ? ordered_json(v[0]) : ordered_json(v);
  j["params"] = p;
  return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void write_series(std::ostream& out, const Series& s) {
  // Format everything first so a bad value leaves no partial file behind.
  std::string text;
  for (std::size_t i = 0; i < s.columns.size(); ++i) text += (i ? "," : "") + quoted(s.columns[i]);
  text += "\r\n";
  for (const auto& row : s.rows) {
    if (row.size() != s.columns.size()) throw EmitError("ragged row in series " + s.name);
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + quoted(cell_text(row[i]));
    text += "\r\n";
  }
  out << text;
}

std::filesystem::path emit_series(const Series& s, const std::filesystem::path& out_dir) {
  std::ostringstream body;
  write_series(body, s);
  const auto path = out_dir / (s.name + ".csv");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << body.str();
  if (!out) throw IoError("write failed for " + path.string());
  return path;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted_cell = false, any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (quoted_cell) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          cell += '"';
        } else {
          quoted_cell = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted_cell = true;
    } else if (ch == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (ch == '\r' && in.peek() == '\n') {
      in.get();
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      cell += ch;
    }
  }
  if (any) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

int exit_code(const std::vector<ExperimentOutcome>& outcomes) noexcept {
  for (const auto& o : outcomes)
    if (!o.pass()) return 1;
  return 0;
}

std::vector<ExperimentOutcome> run_suite(const SuiteConfig& suite, const std::filesystem::path& out_dir,
                                         std::ostream* log) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir.string());
  set_default_jobs(suite.jobs);

  ordered_json manifest;
  manifest["tool"] = "gmclab";
  manifest["version"] = kToolVersion;
  manifest["master_seed"] = suite.master_seed;
  manifest["jobs"] = suite.jobs;
  ordered_json echo = ordered_json::object();
  for (const auto& c : suite.experiments) echo[c.name] = config_json(c);
  manifest["config"] = echo;
  manifest["status"] = "running";
  // Seeds and configuration are on disk before any sampling starts.
  write_json(out_dir / "manifest.json", manifest);

  const auto suite_start = std::chrono::steady_clock::now();
  std::vector<ExperimentOutcome> outcomes;
  ordered_json results = ordered_json::array();
  for (const auto& cfg : suite.experiments) {
    ExperimentOutcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o.verdict = find_experiment(cfg.name).run(cfg);
      for (const auto& s : o.verdict.series) o.files.push_back(emit_series(s, out_dir).filename().string());
    } catch (const IoError&) {
      throw;
    } catch (const std::exception& e) {
      o.error = e.what();
      o.verdict.experiment = cfg.name;
      o.verdict.pass = false;
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ordered_json r;
    r["experiment"] = cfg.name;
    r["pass"] = o.pass();
    r["degenerate"] = o.verdict.degenerate;
    r["claim"] = find_experiment(cfg.name).claim;
    r["seed"] = cfg.seed;
    r["replicas"] = cfg.replicas;
    r["seconds"] = o.seconds;
    if (!o.error.empty()) r["error"] = o.error;
    ordered_json checks = ordered_json::array();
    for (const auto& c : o.verdict.checks)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"detail", c.detail}});
    r["checks"] = checks;
    r["files"] = o.files;
    results.push_back(r);

    if (log) {
      *log << (o.pass() ? "PASS " : "FAIL ") << cfg.name;
      char buf[32];
      std::snprintf(buf, sizeof buf, " (%.1fs)", o.seconds);
      *log << buf << '\n';
      if (!o.error.empty()) *log << "  error: " << o.error << '\n';
      for (const auto& c : o.verdict.checks) *log << "  " << (c.pass ? "ok   " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
    outcomes.push_back(std::move(o));
  }

  manifest["status"] = "complete";
  manifest["results"] = results;
  manifest["all_pass"] = exit_code(outcomes) == 0;
  manifest["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
  write_json(out_dir / "manifest.json", manifest);
  return outcomes;
}

}  // namespace gmclab
