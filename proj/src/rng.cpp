#include "gibbsinit/rng.hpp"

#include <cmath>

namespace gibbsinit {

std::uint64_t Rng::below(std::uint64_t n) {
  unsigned __int128 m = (unsigned __int128)next_u64() * n;
  std::uint64_t lo = (std::uint64_t)m;
  if (lo < n) {
    std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    while (lo < threshold) {
      m = (unsigned __int128)next_u64() * n;
      lo = (std::uint64_t)m;
    }
  }
  return (std::uint64_t)(m >> 64);
}

double Rng::gaussian() {
  if (spare_valid_) {
    spare_valid_ = false;
    return spare_;
  }
  double u1 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;  // keep log finite
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  spare_valid_ = true;
  return r * std::cos(a);
}

std::vector<double> Rng::gaussian_vector(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = gaussian();
  return out;
}

}  // namespace gibbsinit
