#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sketchfem {

/// Generator identity recorded alongside reproducible runs. Bump the
/// version whenever the seeding or the draw-to-index mapping changes.
inline constexpr std::string_view kRngName = "mt19937_64+splitmix64/v1";

/// SplitMix64 finalizer; decorrelates nearby seeds (seed, seed ^ 1, ...).
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of query t in a stream: base ^ t.
constexpr std::uint64_t query_seed(std::uint64_t base, std::uint64_t index) { return base ^ index; }

/// Independent sub-stream of a seed (retries, field draws).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(seed ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sketchfem
