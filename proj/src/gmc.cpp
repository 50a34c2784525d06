#include "gmclab/gmc.hpp"

#include <algorithm>
#include <cmath>

#include "gmclab/parallel.hpp"
#include "gmclab/simd.hpp"

namespace gmclab {

double GmcMeasure::cumulative_at(double t) const {
  const double lo = begin(), hi = end();
  if (!(t >= lo - 1e-12 * grid.h && t <= hi + 1e-12 * grid.h)) throw OutOfDomain("point outside the measure domain");
  const double u = std::clamp((t - lo) / grid.h, 0.0, static_cast<double>(grid.count));
  const double r = std::nearbyint(u);
  if (std::fabs(u - r) <= 1e-12 * std::max(1.0, u)) return cumulative[static_cast<std::size_t>(r)];
  const std::size_t i = std::min(static_cast<std::size_t>(u), grid.count - 1);
  return cumulative[i] + (u - static_cast<double>(i)) * cell_mass(i);
}

GmcMeasure build_measure(const Grid& grid, std::span<const double> values, const FieldSpec& spec) {
  if (values.size() != grid.count) throw LengthMismatch("field values do not match the grid");
  GmcMeasure m{grid, std::vector<double>(grid.count + 1), spec};
  std::vector<double> w(grid.count);
  simd::kernels().exp_density(values.data(), values.size(), spec.gamma, spec.beta() * spec.variance(), grid.h,
                              w.data());
  m.cumulative[0] = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) m.cumulative[i + 1] = m.cumulative[i] + w[i];
  return m;
}

GmcMeasure build_measure(const FieldSample& sample) { return build_measure(sample.grid, sample.values, sample.spec); }

double mass(const GmcMeasure& measure, double a, double b) {
  if (a > b) throw OutOfDomain("mass(a,b) needs a <= b");
  return measure.cumulative_at(b) - measure.cumulative_at(a);
}

double zeta(double q, double gamma) noexcept { return q - 0.5 * gamma * gamma * (q * q - q); }

std::vector<MomentEstimate> estimate_moments(const FieldSpec& spec, double t, std::span<const double> qs,
                                             std::size_t replicas, std::uint64_t seed, double h) {
  spec.validate();
  if (replicas < 2) throw TooFewSamples("moment estimation needs at least 2 replicas");
  if (h <= 0.0) h = spec.epsilon / 4.0;
  const auto cells = static_cast<std::size_t>(std::llround(t / h));
  if (cells < 2) throw ValidationError("interval shorter than two grid cells");
  const Grid grid = Grid::cells(0.0, t / static_cast<double>(cells), cells);
  const FieldSampler sampler(spec, grid);

  std::vector<double> masses(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    RandomStream rng(seed, substream_id(r, 0));
    std::vector<double> u(grid.count);
    sampler.sample_into(rng, u.data());
    masses[r] = build_measure(grid, u, spec).total();
  });

  std::vector<MomentEstimate> out;
  for (double q : qs) {
    MomentEstimate est{q, {}, std::nullopt};
    if (q == 0.0) {
      est.report = EstimateReport{1.0, 0.0, 1.0, 1.0, replicas, seed};
    } else {
      std::vector<double> v(replicas);
      for (std::size_t r = 0; r < replicas; ++r) v[r] = std::pow(masses[r], q);
      est.report = summarize(v, seed);
      if (spec.beta() > 0.0 && q > 0.8 / spec.beta()) {
        std::sort(v.begin(), v.end());
        v.resize(v.size() - v.size() / 100);
        est.trimmed_mean = pairwise_sum(v) / static_cast<double>(v.size());
      }
    }
    out.push_back(est);
  }
  return out;
}

MomentEstimate estimate_moment(const FieldSpec& spec, double t, double q, std::size_t replicas, std::uint64_t seed,
                               double h) {
  const double qs[] = {q};
  return estimate_moments(spec, t, qs, replicas, seed, h).front();
}

TiltedMeasure build_tilted(const FieldSample& sample, double anchor) {
  TiltedMeasure out{build_measure(sample), {}, anchor};
  const GmcMeasure& base = out.base;
  if (!(anchor >= base.begin() && anchor <= base.end())) throw OutOfDomain("tilt anchor outside the grid");
  const CovarianceKernel kernel(sample.spec);
  const double g2 = sample.spec.gamma * sample.spec.gamma;
  out.tilted = base;
  if (g2 == 0.0) return out;
  for (std::size_t i = 0; i < sample.grid.count; ++i) {
    const double factor = std::exp(g2 * kernel(sample.grid.point(i) - anchor));
    out.tilted.cumulative[i + 1] = out.tilted.cumulative[i] + base.cell_mass(i) * factor;
  }
  return out;
}

}  // namespace gmclab
