#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "hatk/bench.hpp"
#include "hatk/grid.hpp"

namespace testing {

using hatk::cplx;
using hatk::GridFunction;
using hatk::SampleGrid;

inline constexpr double kPi = std::numbers::pi;

inline GridFunction random_function(const SampleGrid& g, std::uint64_t seed) {
  hatk::bench::SplitMix64 rng(seed);
  GridFunction f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = cplx{rng.normal(), rng.normal()};
  return f;
}

inline GridFunction random_real(const SampleGrid& g, std::uint64_t seed) {
  hatk::bench::SplitMix64 rng(seed);
  GridFunction f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.normal();
  return f;
}

inline GridFunction plane_wave(const SampleGrid& g, double m) {
  return GridFunction::from_function(g, [&](double x) { return std::polar(1.0, 2 * kPi * m * x / g.period()); });
}

inline double max_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rel_l2(const GridFunction& a, const GridFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// Unitary DFT by direct summation, 1D only.
inline std::vector<cplx> naive_dft(const GridFunction& f) {
  std::size_t n = f.grid().samples();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += f[j] * std::polar(1.0, -2 * kPi * double(k * j % n) / double(n));
    out[k] = s / std::sqrt(double(n));
  }
  return out;
}

// Inner product sum f conj(g) dx.
inline cplx inner(const GridFunction& f, const GridFunction& g) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return s * f.grid().cell_measure();
}

}  // namespace testing
