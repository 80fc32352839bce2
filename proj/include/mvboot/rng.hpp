#pragma once

// Seeded random streams.
//
// Every replicate, repetition, or redraw gets its own stream whose seed is
// derived from the parent seed and an index by child_seed(). Work can then be
// spread over any number of threads and still produce bitwise-identical
// results, because no stream is ever shared.
//
// child_seed(parent, index) = mix64(mix64(parent) + 0x9e3779b97f4a7c15 * (index + 1))
// where mix64 is the splitmix64 finalizer. The engine is std::mt19937_64,
// whose output sequence is fixed by the C++ standard; uniform, index, and
// normal variates are derived from its raw 64-bit output by the functions
// below rather than by <random> distributions, whose algorithms are
// implementation-defined.

#include <cstddef>
#include <cstdint>
#include <random>

namespace mvboot {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t child_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(mix64(parent) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  // Uniform on {0, ..., n-1}; Lemire's multiply-shift with rejection, so
  // there is no modulo bias.
  std::size_t index(std::size_t n);

  // Standard normal by inversion of the normal CDF applied to uniform().
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace mvboot
