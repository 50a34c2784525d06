#include "gmclab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace gmclab {
namespace {

struct Entry {
  std::vector<std::string> values;
  std::vector<int> columns;
  int line = 0;
  int column = 0;
};

using Section = std::map<std::string, Entry>;

const std::vector<std::string> kCommon = {"gamma", "delta", "epsilon", "h", "replicas", "seed"};

bool is_key(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Trim in place and report the 0-based offset of the first kept character.
std::size_t trim(std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    s.clear();
    return 0;
  }
  const auto e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
  return b;
}

double to_double(const Entry& e, std::size_t i) {
  const std::string& t = e.values[i];
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw ParseError("invalid number '" + t + "'", e.line, e.columns[i]);
  return v;
}

std::uint64_t to_uint(const Entry& e) {
  const std::string& t = e.values[0];
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t[0] == '-' || end != t.c_str() + t.size() || errno == ERANGE)
    throw ParseError("expected a non-negative integer, got '" + t + "'", e.line, e.columns[0]);
  return v;
}

const Entry& scalar(const std::string& key, const Entry& e) {
  if (e.values.size() != 1) throw ParseError("'" + key + "' takes a single value", e.line, e.columns[1]);
  return e;
}

void apply_common(ExperimentConfig& cfg, const std::string& key, const Entry& e) {
  if (key == "gamma") cfg.gamma = to_double(scalar(key, e), 0);
  else if (key == "delta") cfg.delta = to_double(scalar(key, e), 0);
  else if (key == "epsilon") cfg.epsilon = to_double(scalar(key, e), 0);
  else if (key == "h") cfg.h = to_double(scalar(key, e), 0);
  else if (key == "replicas") cfg.replicas = to_uint(scalar(key, e));
  else if (key == "seed") cfg.seed = to_uint(scalar(key, e));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ull;
  std::uint64_t z = master ^ h;  // splitmix64 finalizer
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

SuiteConfig parse_config_text(const std::string& text) {
  Section top;
  std::vector<std::pair<std::string, Section>> sections;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    const std::size_t lead = trim(line);
    if (line.empty()) continue;
    const int col0 = static_cast<int>(lead) + 1;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no, col0);
      std::string name = line.substr(1, line.size() - 2);
      const int col = col0 + 1 + static_cast<int>(trim(name));
      if (!is_key(name)) throw ParseError("invalid section name '" + name + "'", line_no, col);
      const auto& reg = registry();
      if (std::none_of(reg.begin(), reg.end(), [&](const ExperimentInfo& e) { return e.name == name; }))
        throw ParseError("unknown experiment '" + name + "'", line_no, col);
      for (const auto& s : sections)
        if (s.first == name) throw ParseError("duplicate section '" + name + "'", line_no, col);
      sections.emplace_back(name, Section{});
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, col0);
    std::string key = line.substr(0, eq);
    trim(key);
    if (!is_key(key)) throw ParseError("invalid key '" + key + "'", line_no, col0);

    const std::string& scope = sections.empty() ? std::string() : sections.back().first;
    bool known;
    if (scope.empty()) {
      known = key == "jobs" || std::find(kCommon.begin(), kCommon.end(), key) != kCommon.end();
    } else {
      const auto& params = find_experiment(scope).defaults.params;
      known = key != "jobs" && (std::find(kCommon.begin(), kCommon.end(), key) != kCommon.end() || params.count(key));
    }
    if (!known)
      throw ParseError("unknown key '" + key + "'" + (scope.empty() ? "" : " in [" + scope + "]"), line_no, col0);

    Entry e;
    e.line = line_no;
    e.column = col0;
    std::size_t pos = eq + 1;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      std::string item = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      const int col = col0 + static_cast<int>(pos + trim(item));
      if (item.empty()) throw ParseError("missing value for '" + key + "'", line_no, col);
      e.values.push_back(item);
      e.columns.push_back(col);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    Section& target = sections.empty() ? top : sections.back().second;
    if (target.count(key)) throw ParseError("duplicate key '" + key + "'", line_no, col0);
    target.emplace(key, std::move(e));
  }

  SuiteConfig suite;
  if (auto it = top.find("seed"); it != top.end()) suite.master_seed = to_uint(scalar("seed", it->second));
  if (auto it = top.find("jobs"); it != top.end()) {
    const std::uint64_t j = to_uint(scalar("jobs", it->second));
    if (j < 1 || j > 1024) throw ParseError("jobs must lie in 1..1024", it->second.line, it->second.columns[0]);
    suite.jobs = static_cast<unsigned>(j);
  }

  std::vector<std::pair<std::string, Section>> chosen = sections;
  if (chosen.empty())
    for (const auto& info : registry()) chosen.emplace_back(info.name, Section{});

  for (const auto& [name, sec] : chosen) {
    ExperimentConfig cfg = find_experiment(name).defaults;
    for (const auto& [key, e] : top)
      if (key != "seed" && key != "jobs") apply_common(cfg, key, e);
    cfg.seed = derive_seed(suite.master_seed, name);
    for (const auto& [key, e] : sec) {
      if (std::find(kCommon.begin(), kCommon.end(), key) != kCommon.end()) {
        apply_common(cfg, key, e);
        if (key == "seed") suite.pinned_seeds.push_back(name);
        continue;
      }
      std::vector<double> vals;
      for (std::size_t i = 0; i < e.values.size(); ++i) vals.push_back(to_double(e, i));
      cfg.params[key] = std::move(vals);
    }
    cfg.validate();
    suite.experiments.push_back(std::move(cfg));
  }
  return suite;
}

SuiteConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void override_seed(SuiteConfig& suite, std::uint64_t seed) {
  suite.master_seed = seed;
  suite.pinned_seeds.clear();
  for (auto& cfg : suite.experiments) cfg.seed = derive_seed(seed, cfg.name);
}

}  // namespace gmclab
