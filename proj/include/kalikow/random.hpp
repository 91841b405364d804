#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kalikow {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Derives the seed of a named substream from a root seed. The tag is hashed
/// with FNV-1a and combined with the root through two rounds of mix64, so
/// streams with different tags (or roots) are decorrelated.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag);

/// A deterministic random stream. All engine randomness flows through these.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t root, std::string_view tag) : engine_(derive_seed(root, tag)) {}

  /// Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kalikow
