#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gmclab/errors.hpp"

namespace gmclab {

struct EstimateReport {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
};

struct TestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  double alpha = 0.01;
  bool reject = false;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

// Fixed-order pairwise summation, so reductions do not depend on scheduling.
double pairwise_sum(std::span<const double> v);

// Mean, standard error sd/sqrt(n) and the 1.96-SE interval.
EstimateReport summarize(std::span<const double> values, std::uint64_t seed = 0);

// Draws sampler(replica) for every replica in parallel and summarizes.
EstimateReport mc_estimate(const std::function<double(std::uint64_t replica)>& sampler, std::size_t replicas,
                           std::uint64_t seed, unsigned jobs = 0);

// Asymptotic Kolmogorov tail P(K > lambda).
double kolmogorov_tail(double lambda);

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha = 0.01);

// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> ranks(std::span<const double> x);

double spearman(std::span<const double> x, std::span<const double> y);

// Spearman correlation with a two-sided permutation p-value (count+1)/(perms+1).
TestReport independence_test(std::span<const double> x, std::span<const double> y, std::size_t permutations,
                             std::uint64_t seed, double alpha = 0.01);

SlopeFit slope_fit(std::span<const double> x, std::span<const double> y);

}  // namespace gmclab
