#include <cmath>
#include <numbers>

#include "hatk/bench.hpp"

namespace hatk::bench {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t SplitMix64::mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::at(std::uint64_t counter) const noexcept { return mix(seed_ + (counter + 1) * kGolden); }

double SplitMix64::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t SplitMix64::below(std::uint64_t n) noexcept {
  if (n == 0) return 0;
  // Rejection keeps the draw exactly uniform.
  std::uint64_t limit = (~std::uint64_t{0} / n) * n;
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % n;
}

double SplitMix64::normal() noexcept {
  double u1 = uniform(), u2 = uniform();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t fnv1a(const std::string& text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) noexcept {
  std::uint64_t h = SplitMix64::mix(seed);
  for (auto l : labels) h = SplitMix64::mix(h ^ SplitMix64::mix(l + kGolden));
  return h;
}

}  // namespace hatk::bench
