#pragma once

#include <cstdint>
#include <vector>

namespace gibbsinit {

// 64-bit SplitMix step: advances state and returns the mixed output.
// Platform-independent, so seeded results are identical everywhere.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream seed for (master, stream) pairs. Used for replication,
// trajectory, and sub-sampler seeding; streams never share draws.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
  (void)splitmix64(s);
  return splitmix64(s);
}

// All randomness in the artifact flows through explicitly seeded Rng instances;
// there is no ambient RNG. An Rng is owned by exactly one worker at a time.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n), n >= 1 (Lemire multiply-shift rejection).
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; uniforms are consumed in fixed pairs and
  // the spare is cached, so the draw sequence is reproducible.
  double gaussian();

  std::vector<double> gaussian_vector(std::size_t n);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool spare_valid_ = false;
};

}  // namespace gibbsinit
