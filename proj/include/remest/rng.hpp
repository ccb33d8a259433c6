#ifndef REMEST_RNG_HPP
#define REMEST_RNG_HPP

#include <cstdint>
#include <random>

namespace remest {

/// splitmix64 step; used to derive independent sub-streams from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for sub-stream `index` of `master`. Distinct indices give decorrelated
/// streams, and the mapping is fixed, so replicate i is reproducible no matter
/// how replicates are scheduled across workers.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

/// Uniform double in [0,1) with 53 random bits. Written out explicitly instead
/// of std::uniform_real_distribution, whose output is implementation-defined;
/// this keeps trajectories bit-identical across compilers.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace remest

#endif
