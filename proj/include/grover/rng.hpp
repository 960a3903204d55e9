#pragma once

#include <cstdint>
#include <random>

namespace grover::rng {

// splitmix64 step; used to derive independent substream seeds from a master
// seed so per-sample work is reproducible regardless of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return splitmix64(s);
}

// mt19937_64 with rejection-based bounded draws. std::uniform_int_distribution
// is implementation-defined, so datasets would not be byte-reproducible
// across standard libraries if we used it.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t zone = (UINT64_MAX / bound) * bound;
    std::uint64_t r;
    do {
      r = eng_();
    } while (r >= zone);
    return r % bound;
  }

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace grover::rng
