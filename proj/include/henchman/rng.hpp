#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace henchman {

// Deterministic seeded randomness. Substreams are derived from
// (seed, purpose, index) through a splitmix64 chain, so codebook generation,
// encoder randomness and source sampling are independently reproducible.
// The uniform mapping uses raw 53-bit draws instead of std distributions,
// keeping byte-identical output across standard library implementations.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0)
      : gen_(derive_stream_seed(seed, purpose, index)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), rejection sampled.
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return static_cast<int>(v % un);
  }

  // Inverse-CDF sample from a probability mass vector.
  int sample_mass(const std::vector<double>& mass) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      acc += mass[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(mass.size()) - 1;
  }

  static constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t derive_stream_seed(std::uint64_t seed,
                                          std::string_view purpose,
                                          std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the purpose tag
    for (char c : purpose) {
      h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    }
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ h);
    s = splitmix64(s ^ index);
    return s;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace henchman
