#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace gmclab {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 64-bit key selects the experiment seed and the upper half of the
/// 128-bit counter selects an independent substream, so replica `r` of a run
/// with master seed `s` always sees the same numbers no matter which worker
/// thread draws it or in which order replicas are scheduled.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using block_type = std::array<std::uint32_t, 4>;

  Philox4x32(std::uint64_t key, std::uint64_t substream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Raw bijection; exposed for known-answer tests.
  static block_type encrypt(block_type counter, std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  block_type counter_;
  block_type buffer_{};
  unsigned next_ = 4;
};

/// Convenience wrapper handing out the variates the samplers need.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t substream = 0) : engine_(seed, substream) {}

  double normal() { return normal_(engine_); }
  double uniform() { return std::generate_canonical<double, 53>(engine_); }
  std::uint64_t bits64() {
    const std::uint64_t hi = engine_();
    return (hi << 32) | engine_();
  }

  Philox4x32& engine() noexcept { return engine_; }

 private:
  Philox4x32 engine_;
  std::normal_distribution<double> normal_;
};

/// Substream label for component `component` of replica `replica`.
constexpr std::uint64_t substream_id(std::uint64_t replica, std::uint32_t component) noexcept {
  return (replica << 12) | component;
}

}  // namespace gmclab
