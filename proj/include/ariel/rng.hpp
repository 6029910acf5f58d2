#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace ariel {

/// Seeded random stream with a portable draw sequence.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. All distributions are implemented here on top of raw 64-bit
/// words (the standard library's distributions are implementation-defined),
/// so the same seed yields the same draws on every platform:
///
///   uniform   = (word >> 11) · 2⁻⁵³                      in [0, 1)
///   bernoulli = uniform < p
///   gaussian  = Box–Muller, √(−2 ln(1 − u₁)) · cos(2π u₂), one value per call
///   below(n)  = rejection sampling on word % n
///   shuffle   = Fisher–Yates from the back using below()
///
/// Streams are not shared across threads; substream() derives an
/// independent stream from the seed and a name.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent stream keyed by (seed, name). Does not advance this stream.
  RngStream substream(std::string_view name) const;
  RngStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  double uniform();
  bool bernoulli(double p);
  double gaussian();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

}  // namespace ariel
