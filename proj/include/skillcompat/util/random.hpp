#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace skillcompat {

// splitmix64 finalizer; used to derive independent stream seeds.
constexpr uint64_t mix_seed(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr uint64_t derive_seed(uint64_t parent, uint64_t stream) {
  return mix_seed(parent ^ mix_seed(stream + 0x632BE59BD9B4E019ULL));
}

// FNV-1a, stable across platforms (std::hash is not).
constexpr uint64_t fnv1a(std::string_view text, uint64_t h = 0xCBF29CE484222325ULL) {
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Seeded generator. Only the raw engine output is used, so draws are
// reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(mix_seed(seed)) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return n == 0 ? 0 : engine_() % n; }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace skillcompat
