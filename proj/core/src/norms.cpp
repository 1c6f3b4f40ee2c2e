#include "hatk/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hatk/error.hpp"

namespace hatk {

MeasurableSet::MeasurableSet(GridFunction indicator) : ind_(std::move(indicator)) {
  if (!ind_.is_scalar()) throw ShapeError("set indicators are scalar");
  for (const auto& z : ind_.samples()) {
    if (z.imag() != 0.0 || (z.real() != 0.0 && z.real() != 1.0))
      throw DomainError("indicator samples must be 0 or 1");
    if (z.real() == 1.0) ++count_;
  }
}

MeasurableSet MeasurableSet::empty(const SampleGrid& grid) { return MeasurableSet(GridFunction(grid)); }

MeasurableSet MeasurableSet::full(const SampleGrid& grid) {
  return MeasurableSet(GridFunction::constant(grid, 1.0));
}

MeasurableSet MeasurableSet::from_intervals(const SampleGrid& grid,
                                            const std::vector<DyadicInterval>& intervals) {
  if (grid.dimension() != 1) throw ShapeError("interval sets live on 1D grids");
  GridFunction g(grid);
  double L = grid.period();
  for (const auto& I : intervals) {
    // Half-open [left, right) on the torus; dyadic endpoints make the offsets exact.
    for (std::size_t i = 0; i < grid.samples(); ++i) {
      double t = std::fmod(grid.coordinate(i) - I.left(), L);
      if (t < 0.0) t += L;
      if (t < I.length()) g[i] = 1.0;
    }
  }
  return MeasurableSet(std::move(g));
}

namespace {

template <class Op>
MeasurableSet combine(const MeasurableSet& a, const MeasurableSet& b, Op op) {
  if (!(a.grid() == b.grid())) throw ShapeError("sets on different grids");
  GridFunction g(a.grid());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = op(a.contains(i), b.contains(i)) ? 1.0 : 0.0;
  return MeasurableSet(std::move(g));
}

}  // namespace

MeasurableSet MeasurableSet::set_union(const MeasurableSet& o) const {
  return combine(*this, o, [](bool x, bool y) { return x || y; });
}
MeasurableSet MeasurableSet::set_intersection(const MeasurableSet& o) const {
  return combine(*this, o, [](bool x, bool y) { return x && y; });
}
MeasurableSet MeasurableSet::set_difference(const MeasurableSet& o) const {
  return combine(*this, o, [](bool x, bool y) { return x && !y; });
}
MeasurableSet MeasurableSet::complement() const {
  return combine(*this, *this, [](bool x, bool) { return !x; });
}

bool MeasurableSet::operator==(const MeasurableSet& o) const {
  if (!(grid() == o.grid()) || count_ != o.count_) return false;
  for (std::size_t i = 0; i < ind_.size(); ++i)
    if (contains(i) != o.contains(i)) return false;
  return true;
}

namespace {

double power_sum_norm(const std::vector<double>& mags, double p, double measure) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : mags) m = std::max(m, v);
    return m;
  }
  if (!(p > 0.0)) throw DomainError("norm exponent must be positive");
  double s = 0.0;
  for (double v : mags) s += std::pow(v, p);
  return std::pow(s * measure, 1.0 / p);
}

}  // namespace

double lp_norm(const GridFunction& f, double p) {
  std::vector<double> mags(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mags[i] = std::abs(f[i]);
  return power_sum_norm(mags, p, f.grid().cell_measure());
}

double lp_norm(const GridFunction& f, double p, const GridFunction& weight) {
  if (!(weight.grid() == f.grid()) || !weight.is_scalar()) throw ShapeError("weight shape mismatch");
  std::size_t pts = f.grid().point_count();
  std::vector<double> mags(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mags[i] = std::abs(f[i] * weight[i % pts]);
  return power_sum_norm(mags, p, f.grid().cell_measure());
}

double distribution_function(const GridFunction& f, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  std::size_t c = 0;
  for (const auto& z : f.samples())
    if (std::abs(z) > lambda) ++c;
  return static_cast<double>(c) * f.grid().cell_measure();
}

double weak_lp_norm(const GridFunction& f, double p) {
  if (!(p > 0.0)) throw DomainError("weak norm exponent must be positive");
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = std::abs(f[i]);
  std::sort(v.begin(), v.end(), std::greater<>());
  double dx = f.grid().cell_measure();
  double best = 0.0;
  for (std::size_t i = 0; i < v.size() && v[i] > 0.0; ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    double d = static_cast<double>(i + 1) * dx;
    best = std::max(best, std::isinf(p) ? v[i] : v[i] * std::pow(d, 1.0 / p));
  }
  return best;
}

double mixed_norm(const GridFunction& f, const MixedNormSpec& spec) {
  std::vector<std::size_t> shape = f.shape();
  if (shape.size() != spec.depth())
    throw ShapeError("mixed norm depth " + std::to_string(spec.depth()) + " != axis count " +
                     std::to_string(shape.size()));
  const SampleGrid& g = f.grid();
  std::size_t pts = g.point_count();
  std::size_t comps = f.component_count();
  std::size_t dims = static_cast<std::size_t>(g.dimension());

  // Logical row-major tensor over (spatial..., vector...).
  std::vector<double> t(f.size());
  for (std::size_t s = 0; s < pts; ++s)
    for (std::size_t c = 0; c < comps; ++c) t[s * comps + c] = std::abs(f[c * pts + s]);

  for (std::size_t ax = shape.size(); ax-- > 0;) {
    std::size_t inner = shape[ax];
    std::size_t outer = t.size() / inner;
    double meas = ax < dims ? g.spacing() : 1.0;
    double r = spec[ax].to_double();
    std::vector<double> next(outer);
    std::vector<double> row(inner);
    for (std::size_t o = 0; o < outer; ++o) {
      std::copy(t.begin() + static_cast<std::ptrdiff_t>(o * inner),
                t.begin() + static_cast<std::ptrdiff_t>((o + 1) * inner), row.begin());
      next[o] = power_sum_norm(row, r, meas);
    }
    t.swap(next);
  }
  return t.front();
}

DualizationResult dualize_weak_via_Lr(const GridFunction& f, const MeasurableSet& E, double r,
                                      double p, double C) {
  double mE = E.measure();
  if (!(mE > 0.0)) throw DomainError("dualization needs |E| > 0");
  if (!(r > 0.0) || !(p > 0.0) || r > p) throw DomainError("dualization needs 0 < r <= p");
  if (!f.is_scalar() || !(f.grid() == E.grid())) throw ShapeError("f and E must share a scalar grid");
  DualizationResult out{E, 0.0, 0.0, weak_lp_norm(f, p)};
  out.threshold = C * out.weak_norm / std::pow(mE, 1.0 / p);
  auto omega = MeasurableSet::from_predicate(
      f.grid(), [&](std::size_t i) { return std::abs(f[i]) > out.threshold; });
  out.e_tilde = E.set_difference(omega);
  double achieved = out.e_tilde.measure() / mE;
  if (achieved < 0.5)
    throw MajorSubsetError("E minus Omega is not a major subset of E", achieved);
  GridFunction restricted = f * out.e_tilde.indicator();
  out.ratio = lp_norm(restricted, r) / std::pow(mE, 1.0 / r - 1.0 / p);
  return out;
}

MajorSubsetResult major_subset_L1(const GridFunction& f, const MeasurableSet& E, double p, double C) {
  double mE = E.measure();
  if (!(mE > 0.0)) throw DomainError("major subset needs |E| > 0");
  if (!f.is_scalar() || !(f.grid() == E.grid())) throw ShapeError("f and E must share a scalar grid");
  double A = weak_lp_norm(f, p);
  double thr = C * A / std::pow(mE, 1.0 / p);
  auto omega = MeasurableSet::from_predicate(f.grid(),
                                             [&](std::size_t i) { return std::abs(f[i]) > thr; });
  MajorSubsetResult out{E.set_difference(omega), 0.0};
  double achieved = out.e_prime.measure() / mE;
  if (achieved < 0.5) throw MajorSubsetError("E' is not a major subset of E", achieved);
  cplx pair = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (out.e_prime.contains(i)) pair += f[i];
  pair *= f.grid().cell_measure();
  out.value = std::abs(pair) / std::pow(mE, 1.0 - 1.0 / p);
  return out;
}

}  // namespace hatk
