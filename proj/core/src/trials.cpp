#include <cmath>
#include <numbers>

#include "hatk/bench.hpp"
#include "hatk/error.hpp"

namespace hatk::bench {

namespace {

GridFunction unit_l2(GridFunction f) {
  double n = l2_norm(f);
  if (n > 0.0) f *= cplx{1.0 / n, 0.0};
  return f;
}

}  // namespace

GridFunction random_band_limited(const SampleGrid& grid, std::uint64_t seed, double band, bool real) {
  if (!(band >= 0.0)) throw DomainError("band must be nonnegative");
  SplitMix64 rng(seed);
  std::size_t n = grid.samples();
  GridFunction spec(grid);
  auto inside = [&](std::size_t i) { return std::abs(grid.frequency(i)) <= band; };
  auto mirror = [n](std::size_t i) { return (n - i) % n; };
  auto draw = [&]() { return cplx{rng.normal(), rng.normal()}; };
  if (grid.dimension() == 1) {
    for (std::size_t i = 0; i < n; ++i)
      if (inside(i)) spec[i] = draw();
    if (real) {
      GridFunction sym = spec;
      for (std::size_t i = 0; i < n; ++i) sym[i] = 0.5 * (spec[i] + std::conj(spec[mirror(i)]));
      spec = sym;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (inside(i) && inside(j)) spec.at(i, j) = draw();
    if (real) {
      GridFunction sym = spec;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sym.at(i, j) = 0.5 * (spec.at(i, j) + std::conj(spec.at(mirror(i), mirror(j))));
      spec = sym;
    }
  }
  return unit_l2(fourier_transform(spec, true));
}

GridFunction random_step_function(const SampleGrid& grid, std::uint64_t seed, int depth) {
  if (depth < 0 || (std::size_t{1} << depth) > grid.samples()) throw DomainError("step depth exceeds the grid");
  SplitMix64 rng(seed);
  std::size_t cells = std::size_t{1} << depth;
  std::size_t w = grid.samples() / cells;
  std::vector<double> v(grid.dimension() == 1 ? cells : cells * cells);
  for (auto& x : v) x = rng.normal();
  GridFunction f(grid);
  std::size_t n = grid.samples();
  if (grid.dimension() == 1) {
    for (std::size_t i = 0; i < n; ++i) f[i] = v[i / w];
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) f.at(i, j) = v[(i / w) * cells + j / w];
  }
  return f;
}

GridFunction random_bump_train(const SampleGrid& grid, std::uint64_t seed, int count) {
  if (grid.dimension() != 1) throw ShapeError("bump trains are 1D");
  if (count < 0) throw DomainError("negative bump count");
  SplitMix64 rng(seed);
  double L = grid.period();
  GridFunction f(grid);
  for (int b = 0; b < count; ++b) {
    double c = rng.uniform() * L;
    double w = L / 64.0 * std::pow(8.0, rng.uniform());
    double a = rng.normal();
    for (std::size_t i = 0; i < grid.samples(); ++i)
      for (int img = -1; img <= 1; ++img) {
        double d = (grid.coordinate(i) - c + img * L) / w;
        f[i] += a * std::exp(-0.5 * d * d);
      }
  }
  return f;
}

MeasurableSet random_dyadic_set(const SampleGrid& grid, std::uint64_t seed, double measure) {
  if (grid.dimension() != 1) throw ShapeError("dyadic sets are generated on 1D grids");
  std::size_t n = grid.samples();
  double cells = measure / grid.spacing();
  if (!(measure >= 0.0) || cells > static_cast<double>(n) + 1e-9 || std::abs(cells - std::round(cells)) > 1e-9)
    throw DomainError("measure " + std::to_string(measure) + " is not a whole number of grid cells in [0, L]");
  auto remaining = static_cast<std::size_t>(std::llround(cells));
  SplitMix64 rng(seed);
  std::vector<char> used(n, 0);
  std::size_t max_block = n;
  while (remaining > 0) {
    while (max_block > remaining) max_block /= 2;
    // Random block size up to max_block, aligned to its own length.
    std::size_t levels = 0;
    for (std::size_t b = max_block; b > 1; b /= 2) ++levels;
    std::size_t size = std::size_t{1} << rng.below(levels + 1);
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      std::size_t start = rng.below(n / size) * size;
      bool free = true;
      for (std::size_t i = start; i < start + size && free; ++i) free = !used[i];
      if (!free) continue;
      for (std::size_t i = start; i < start + size; ++i) used[i] = 1;
      remaining -= size;
      placed = true;
    }
    if (!placed && max_block > 1) max_block /= 2;
    if (!placed && size == 1) {
      // Dense fallback: the k-th free cell.
      std::size_t free_count = 0;
      for (char u : used) free_count += !u;
      std::size_t k = rng.below(free_count);
      for (std::size_t i = 0; i < n; ++i)
        if (!used[i] && k-- == 0) {
          used[i] = 1;
          --remaining;
          break;
        }
    }
  }
  GridFunction ind(grid);
  for (std::size_t i = 0; i < n; ++i) ind[i] = used[i] ? 1.0 : 0.0;
  return MeasurableSet(std::move(ind));
}

GridFunction random_vector_function(const SampleGrid& grid, std::uint64_t seed, std::size_t K, double band) {
  if (K == 0) throw DomainError("at least one component is required");
  std::vector<GridFunction> comps;
  for (std::size_t k = 0; k < K; ++k) comps.push_back(random_band_limited(grid, derive_seed(seed, {k}), band));
  return GridFunction::stack(comps);
}

Trial generate_trial(const TrialParams& p, std::uint64_t seed) {
  SampleGrid grid(p.samples, 1.0, p.dimension);
  if (p.kind == "band-limited") return random_band_limited(grid, seed, p.band);
  if (p.kind == "step") return random_step_function(grid, seed, p.depth);
  if (p.kind == "bump-train") return random_bump_train(grid, seed, p.count);
  if (p.kind == "set") return random_dyadic_set(grid, seed, p.measure);
  if (p.kind == "vector") return random_vector_function(grid, seed, p.components, p.band);
  throw DomainError("unknown trial kind '" + p.kind + "'");
}

}  // namespace hatk::bench
