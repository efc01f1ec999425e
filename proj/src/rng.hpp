#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aoi {

// One step of the splitmix64 generator. Used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (master seed, stream id). Streams
// with distinct ids are usable concurrently without coordination.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
  std::uint64_t s = master ^ 0x6a09e667f3bcc909ULL;
  (void)splitmix64(s);
  s ^= stream_id * 0x9e3779b97f4a7c15ULL;
  (void)splitmix64(s);
  return splitmix64(s);
}

// Deterministic random stream. The variate transforms are spelled out here
// instead of using std::*_distribution, whose output sequences are
// implementation-defined; mt19937_64 itself is specified by the standard, so
// a given seed yields the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace aoi
