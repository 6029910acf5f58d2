#include "ariel/rng.hpp"

#include <cmath>
#include <numbers>

#include "ariel/error.hpp"

namespace ariel {
namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RngStream RngStream::substream(std::string_view name) const {
  return RngStream(mix64(seed_ ^ mix64(fnv1a(name))));
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(mix64(seed_ ^ mix64(index + 0x5851f42d4c957f2dULL)));
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

bool RngStream::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bernoulli: p must lie in [0,1], got " + std::to_string(p));
  if (p == 0.0) return false;
  if (p == 1.0) return true;
  return uniform() < p;
}

double RngStream::gaussian() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw DomainError("below: n must be positive");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

}  // namespace ariel
