#include <cmath>
#include <map>
#include <numbers>

#include "hatk/error.hpp"
#include "hatk/operators.hpp"

namespace hatk {

namespace {

void check_padded_support(const GridFunction& f, const char* name) {
  std::size_t n = f.grid().samples();
  std::size_t lo = n / 2 - n / (2 * kBhtPadFactor);
  std::size_t hi = n / 2 + n / (2 * kBhtPadFactor);
  for (std::size_t i = 0; i < n; ++i)
    if ((i < lo || i >= hi) && f[i] != cplx{})
      throw DomainError(std::string("aliasing: support of ") + name + " leaves the central 1/" +
                        std::to_string(kBhtPadFactor) + " of the padded grid (sample " + std::to_string(i) +
                        ")");
}

// Trapezoid rule with step `step` samples on the odd-paired integrand h(t) / t.
std::vector<cplx> bht_trapezoid(const GridFunction& f, const GridFunction& g, std::size_t step) {
  auto n = static_cast<long>(f.grid().samples());
  std::vector<cplx> out(static_cast<std::size_t>(n));
  auto s = static_cast<long>(step);
  for (long i = 0; i < n; ++i) {
    long reach = std::min(i, n - 1 - i);
    auto h = [&](long j) {
      auto a = static_cast<std::size_t>(i - j), b = static_cast<std::size_t>(i + j);
      return f[a] * g[b] - f[b] * g[a];
    };
    cplx acc{};
    for (long m = 1; m * s <= reach; ++m) acc += h(m * s) / static_cast<double>(m);
    // t = 0 node: the even function h(t)/t extrapolated from its first two nodes.
    cplx h1 = s <= reach ? h(s) : cplx{};
    cplx h2 = 2 * s <= reach ? h(2 * s) : cplx{};
    out[static_cast<std::size_t>(i)] = acc + 2.0 / 3.0 * h1 - h2 / 12.0;
  }
  return out;
}

}  // namespace

BhtKernelResult bht_kernel(const GridFunction& f, const GridFunction& g) {
  if (f.grid().dimension() != 1 || !f.is_scalar() || !(f.grid() == g.grid()) || !g.is_scalar())
    throw ShapeError("bht_kernel expects scalar 1D functions on one grid");
  check_padded_support(f, "f");
  check_padded_support(g, "g");
  auto fine = bht_trapezoid(f, g, 1);
  auto coarse = bht_trapezoid(f, g, 2);
  BhtKernelResult r;
  for (std::size_t i = 0; i < fine.size(); ++i)
    r.quadrature_error = std::max(r.quadrature_error, std::abs(fine[i] - coarse[i]));
  r.output = GridFunction(f.grid(), std::move(fine));
  return r;
}

GridFunction bht_spectral(const GridFunction& f, const GridFunction& g) {
  if (f.grid().dimension() != 1 || !f.is_scalar() || !(f.grid() == g.grid()) || !g.is_scalar())
    throw ShapeError("bht_spectral expects scalar 1D functions on one grid");
  const SampleGrid& grid = f.grid();
  auto n = static_cast<long>(grid.samples());
  GridFunction fh = fourier_transform(f), gh = fourier_transform(g);
  auto idx = [n](long m) { return static_cast<std::size_t>(((m % n) + n) % n); };
  std::vector<long> support_f, support_g;
  for (long m = -n / 2; m < n / 2; ++m) {
    if (fh[idx(m)] != cplx{}) support_f.push_back(m);
    if (gh[idx(m)] != cplx{}) support_g.push_back(m);
  }
  GridFunction out_hat(grid);
  const cplx ipi{0.0, std::numbers::pi};
  double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (long m : support_f)
    for (long l : support_g) {
      if (l == m) continue;  // sgn(0) = 0
      double sgn = l > m ? 1.0 : -1.0;
      out_hat[idx(m + l)] += ipi * sgn * norm * fh[idx(m)] * gh[idx(l)];
    }
  return fourier_transform(out_hat, true);
}

GridFunction bht_model(const BHTModelSpec& spec, const GridFunction& f, const GridFunction& g) {
  if (f.grid().dimension() != 1 || !f.is_scalar() || !(f.grid() == g.grid()))
    throw ShapeError("bht_model expects scalar 1D functions on one grid");
  const SampleGrid& grid = f.grid();
  GridFunction out(grid);
  if (spec.tiles.empty()) return out;

  std::map<std::pair<int, std::int64_t>, std::vector<double>> groups;
  for (const auto& P : spec.tiles) {
    auto& counts = groups[{P.spatial.scale, P.freq_index}];
    if (counts.empty()) counts.assign(static_cast<std::size_t>(positions_per_scale(grid, P.spatial.scale)), 0.0);
    counts[static_cast<std::size_t>(wrap_to_torus(grid, P.spatial).position)] += 1.0;
  }
  GridFunction fh = fourier_transform(f), gh = fourier_transform(g);
  for (const auto& [key, counts] : groups) {
    Tritile probe{{key.first, 0}, key.second};
    PacketBank b1(grid, key.first, probe.window(1, spec.margin));
    PacketBank b2(grid, key.first, probe.window(2, spec.margin));
    PacketBank b3(grid, key.first, probe.window(3, spec.margin));
    auto a1 = b1.analyze_spectrum(fh);
    auto a2 = b2.analyze_spectrum(gh);
    double w = 1.0 / std::sqrt(std::ldexp(1.0, -key.first));
    std::vector<cplx> a(counts.size());
    for (std::size_t m = 0; m < a.size(); ++m) a[m] = counts[m] * w * a1[m] * a2[m];
    out += b3.synthesize(a);
  }
  return out;
}

}  // namespace hatk
