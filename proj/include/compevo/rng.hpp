// Reproducible, splittable random streams.
//
// A stream is identified by (seed, stream_index). The pair is folded into a
// 64-bit key with the SplitMix64 finalizer:
//
//   key = mix64(mix64(seed) ^ (stream_index * 0x9E3779B97F4A7C15))
//
// and the key seeds a xoshiro256** generator through four SplitMix64 steps.
// Everything is integer arithmetic with fixed widths, so a stream produces
// the same sequence on every platform and under any thread schedule.
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace compevo {

// SplitMix64 output finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  // Child stream i of this stream; independent of how much of this stream
  // has been consumed.
  RngStream substream(std::uint64_t i) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next(); }
  std::uint64_t next();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on the open interval (0, 1); safe to pass to log().
  double uniform_open01();
  // Uniform integer in [0, bound), bound >= 1 (Lemire's nearly-divisionless
  // method with rejection, so the result is exactly uniform).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace compevo
