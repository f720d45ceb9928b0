// rng.hpp — counter-based random streams for reproducible noise sampling.
//
// Every (seed, domain, cell) tuple maps to its own stateless stream: draw i is
// a pure function of the key and i (splitmix64 finalizer over key + i·φ64).
// Streams can therefore be consumed in any order — across threads, across
// runs — and still produce identical values, which is what makes sampled
// outputs byte-stable regardless of worker count.
#pragma once

#include <cstdint>

namespace blochsim {

// splitmix64 finalizer: the standard avalanche mix.
std::uint64_t mix64(std::uint64_t x);

class CounterRng {
 public:
  // Key mixes the seed with up to three stream labels (domain tag, cell row,
  // cell column).  Equal tuples give equal streams; any differing label gives
  // an unrelated stream.
  CounterRng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0);

  std::uint64_t next_u64();
  double next_double();  // uniform in [0, 1), 53 bits

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Stream-domain tags: arbitrary fixed constants, one per purpose, so samples
// for different uses never collide even at equal (row, col).
inline constexpr std::uint64_t kDomainCounts = 0xC0C0'0001;
inline constexpr std::uint64_t kDomainBootstrap = 0xB007'0002;

// Poisson draw: exact inversion by multiplication for small means, the PTRS
// transformed-rejection method for mean ≥ 10.  Deterministic given the stream.
std::uint64_t poisson_draw(CounterRng& rng, double mean);

}  // namespace blochsim
