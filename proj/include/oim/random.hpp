#pragma once

// Counter-based random streams. Every stream is addressed by (seed, stream id,
// purpose tag), so draws for sample k never depend on how many other samples
// were processed or on which worker processed them.

#include <array>
#include <cstdint>

namespace oim {

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

enum class StreamPurpose : std::uint32_t {
  EnsembleSample = 1,
  SolverTrial = 2,
  PlantedInstance = 3,
  ErInstance = 4,
  Probe = 5,
  Regularization = 6,
};

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id, StreamPurpose purpose) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) noexcept { return uniform() < p; }

  // UniformRandomBitGenerator interface.
  using result_type = std::uint32_t;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return 0xFFFFFFFFu; }
  result_type operator()() noexcept { return next_u32(); }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  unsigned used_ = 4;
};

}  // namespace oim
