#pragma once

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "gmclab/experiments.hpp"
#include "gmclab/gmc.hpp"
#include "gmclab/inverse.hpp"
#include "gmclab/logfield.hpp"
#include "gmclab/parallel.hpp"

namespace gmclab::detail {

// Validates cfg and seeds a verdict with the registry claim.
Verdict begin(const ExperimentConfig& cfg, const std::string& name);

inline std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Cells of width h covering [0, length].
inline Grid domain(double h, double length) {
  const auto cells = static_cast<std::size_t>(std::ceil(length / h - 1e-9));
  return Grid::cells(0.0, h, std::max<std::size_t>(cells, 2));
}

// One sampler reused across replicas.
class Realizer {
 public:
  Realizer(const FieldSpec& spec, const Grid& grid) : sampler_(spec, grid) {}

  const FieldSpec& spec() const noexcept { return sampler_.spec(); }
  const Grid& grid() const noexcept { return sampler_.grid(); }

  void field(std::uint64_t seed, std::uint64_t stream, std::vector<double>& out) const {
    RandomStream rng(seed, stream);
    out.resize(grid().count);
    sampler_.sample_into(rng, out.data());
  }

  GmcMeasure measure(std::uint64_t seed, std::uint64_t stream) const {
    std::vector<double> v;
    field(seed, stream, v);
    return build_measure(grid(), v, spec());
  }

 private:
  FieldSampler sampler_;
};

// Q(x), or +inf when the realization does not carry mass x.
inline double invert_or_inf(const GmcMeasure& m, double x) {
  return x <= m.total() ? invert(m, x) : INFINITY;
}

inline std::vector<double> collect(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

inline Series make_series(std::string name, std::vector<std::string> columns) {
  Series s;
  s.name = std::move(name);
  s.columns = std::move(columns);
  return s;
}

inline std::int64_t as_int(double v) { return static_cast<std::int64_t>(std::llround(v)); }

}  // namespace gmclab::detail
