#pragma once

#include <cstdint>

namespace dipolesim {

// xoshiro256++ with splitmix64 seeding. The std:: engines/distributions are
// not bit-stable across standard library implementations; disorder sweeps
// promise bit-identical realizations for a fixed seed, so the generator and
// the uniform mapping are pinned down here.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [-a, a].
  double uniform_symmetric(double a) { return (2.0 * uniform01() - 1.0) * a; }

  // Decorrelated child seed for realization k of a seeded ensemble.
  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
    std::uint64_t x = base ^ (0x9e3779b97f4a7c15ULL + k * 0xbf58476d1ce4e5b9ULL);
    return splitmix64(x);
  }

private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t s_[4];
};

}  // namespace dipolesim
