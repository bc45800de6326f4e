#pragma once

#include <cstdint>
#include <random>

namespace sygr {

// Deterministic random streams keyed by (seed, index). Every replicate or
// synthetic student owns one stream, so results do not depend on thread
// count or scheduling. Draw reductions below are written out instead of
// using <random> distributions, whose outputs differ between standard
// libraries.

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index) : engine_(stream_key(seed, index)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, n), n > 0 (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t n);

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sygr
