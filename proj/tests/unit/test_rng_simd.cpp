#include <cmath>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "gmclab/rng.hpp"
#include "gmclab/simd.hpp"

using namespace gmclab;

TEST_CASE("philox known answers") {
  using B = Philox4x32::block_type;
  CHECK(Philox4x32::encrypt(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::encrypt(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::encrypt(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("engine walks the counter block by block") {
  Philox4x32 eng(7, 3);
  const auto first = Philox4x32::encrypt({0, 0, 3, 0}, {7, 0});
  const auto second = Philox4x32::encrypt({1, 0, 3, 0}, {7, 0});
  for (int i = 0; i < 4; ++i) CHECK(eng() == first[i]);
  for (int i = 0; i < 4; ++i) CHECK(eng() == second[i]);
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 5), b(42, 5), c(42, 6), d(43, 5);
  std::set<double> seen;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    seen.insert(x);
  }
  CHECK(seen.size() == 100);
  CHECK(RandomStream(42, 5).normal() != c.normal());
  CHECK(RandomStream(42, 5).normal() != d.normal());
}

TEST_CASE("uniforms are in [0,1) with the right mean") {
  RandomStream r(1);
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
  }
  CHECK(std::fabs(s / 100000 - 0.5) < 5 * std::sqrt(1.0 / 12 / 100000));
}

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  RandomStream r(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = scale * r.normal();
  return v;
}

void compare_tables(const simd::KernelTable& ref, const simd::KernelTable& fast) {
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 257u}) {
    CAPTURE(n);
    const auto a = noise(n, 10 + n), b = noise(n, 20 + n);
    const double x = ref.dot(a.data(), b.data(), n), y = fast.dot(a.data(), b.data(), n);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::fabs(a[i] * b[i]);
    CHECK(std::fabs(x - y) <= 1e-14 * (mag + 1.0));

    const auto packed = noise(n * (n + 1) / 2, 30 + n);
    std::vector<double> o1(n), o2(n);
    ref.lower_tri_matvec(packed.data(), n, a.data(), o1.data());
    fast.lower_tri_matvec(packed.data(), n, a.data(), o2.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(o1[i] - o2[i]) <= 1e-12 * (1.0 + std::fabs(o1[i])));

    const auto u = noise(n, 40 + n, 20.0);
    ref.exp_density(u.data(), n, 0.7, 1.3, 0.25, o1.data());
    fast.exp_density(u.data(), n, 0.7, 1.3, 0.25, o2.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(o1[i] - o2[i]) <= 1e-15 * std::fabs(o1[i]));

    auto c1 = noise(2 * n, 50 + n), c2 = c1;
    const auto f = noise(n, 60 + n);
    ref.scale_complex(c1.data(), f.data(), n);
    fast.scale_complex(c2.data(), f.data(), n);
    CHECK(c1 == c2);
  }
}

}  // namespace

TEST_CASE("scalar reference is exact on simple inputs") {
  const auto& k = simd::scalar_kernels();
  const double a[] = {1, 2, 3}, b[] = {4, 5, 6};
  CHECK(k.dot(a, b, 3) == 32.0);
  const double l[] = {1, 2, 3, 4, 5, 6};  // [[1],[2,3],[4,5,6]]
  double out[3];
  k.lower_tri_matvec(l, 3, a, out);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 8.0);
  CHECK(out[2] == 32.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const auto* fast = simd::avx2_kernels();
  if (fast == nullptr) {
    MESSAGE("avx2 variant unavailable on this machine");
    return;
  }
  compare_tables(simd::scalar_kernels(), *fast);
}

TEST_CASE("vector exp is exact at zero and sane at the extremes") {
  const auto& k = simd::kernels();
  const double u[] = {0.0, 0.0, 0.0, 0.0, 0.0, -1000.0, 1000.0};
  double out[7];
  k.exp_density(u, 7, 1.0, 0.0, 1.0, out);
  for (int i = 0; i < 5; ++i) CHECK(out[i] == 1.0);
  CHECK(out[5] >= 0.0);
  CHECK(out[5] < 1e-300);
  CHECK(out[6] > 1e300);
}

TEST_CASE("dispatch picks a table") {
  const auto& k = simd::kernels();
  CHECK(k.name != nullptr);
  if (simd::avx2_kernels() != nullptr && std::getenv("GMCLAB_SIMD") == nullptr) CHECK(std::string(k.name) == "avx2");
}
