#include "hatk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "hatk/error.hpp"

namespace hatk {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace

SampleGrid::SampleGrid(std::size_t samples, double period, int dimension)
    : n_(samples), period_(period), dim_(dimension) {
  if (!is_pow2(samples) || samples < 8)
    throw DomainError("sample count must be a power of two >= 8");
  if (!(period > 0.0) || !std::isfinite(period)) throw DomainError("period must be positive");
  if (dimension != 1 && dimension != 2) throw DomainError("dimension must be 1 or 2");
}

double SampleGrid::cell_measure() const noexcept {
  return dim_ == 1 ? spacing() : spacing() * spacing();
}

long SampleGrid::index_frequency(std::size_t i) const noexcept {
  long n = static_cast<long>(n_);
  long m = static_cast<long>(i);
  return m < n / 2 ? m : m - n;
}

int SampleGrid::max_scale() const noexcept {
  double cap = static_cast<double>(n_) / (4.0 * period_);
  int k = -64;
  while (std::ldexp(1.0, k + 1) <= cap) ++k;
  return k;
}

GridFunction::GridFunction(SampleGrid grid, std::vector<std::size_t> vector_extents)
    : grid_(grid), extents_(std::move(vector_extents)) {
  data_.assign(grid_.point_count() * component_count(), cplx{});
}

GridFunction::GridFunction(SampleGrid grid, std::vector<cplx> samples,
                           std::vector<std::size_t> vector_extents)
    : grid_(grid), extents_(std::move(vector_extents)), data_(std::move(samples)) {
  if (data_.size() != grid_.point_count() * component_count())
    throw ShapeError("sample array length does not match grid and vector extents");
  validate();
}

GridFunction GridFunction::from_function(const SampleGrid& grid,
                                         const std::function<cplx(double)>& fn) {
  if (grid.dimension() != 1) throw ShapeError("1D sampler on a 2D grid");
  GridFunction f(grid);
  for (std::size_t i = 0; i < grid.samples(); ++i) f.data_[i] = fn(grid.coordinate(i));
  f.validate();
  return f;
}

GridFunction GridFunction::from_function(const SampleGrid& grid,
                                         const std::function<cplx(double, double)>& fn) {
  if (grid.dimension() != 2) throw ShapeError("2D sampler on a 1D grid");
  GridFunction f(grid);
  std::size_t n = grid.samples();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f.data_[i * n + j] = fn(grid.coordinate(i), grid.coordinate(j));
  f.validate();
  return f;
}

GridFunction GridFunction::constant(const SampleGrid& grid, cplx value) {
  GridFunction f(grid);
  std::fill(f.data_.begin(), f.data_.end(), value);
  return f;
}

GridFunction GridFunction::stack(const std::vector<GridFunction>& components) {
  if (components.empty()) throw ShapeError("cannot stack an empty list");
  const SampleGrid& g = components.front().grid();
  std::vector<cplx> data;
  data.reserve(g.point_count() * components.size());
  for (const auto& c : components) {
    if (!(c.grid() == g) || !c.is_scalar()) throw ShapeError("stack needs scalar functions on one grid");
    data.insert(data.end(), c.data_.begin(), c.data_.end());
  }
  return GridFunction(g, std::move(data), {components.size()});
}

std::size_t GridFunction::component_count() const noexcept {
  std::size_t c = 1;
  for (auto e : extents_) c *= e;
  return c;
}

std::vector<std::size_t> GridFunction::shape() const {
  std::vector<std::size_t> s(static_cast<std::size_t>(grid_.dimension()), grid_.samples());
  s.insert(s.end(), extents_.begin(), extents_.end());
  return s;
}

GridFunction GridFunction::component(std::size_t k) const {
  std::size_t pts = grid_.point_count();
  if (k >= component_count()) throw ShapeError("component index out of range");
  std::vector<cplx> d(data_.begin() + static_cast<std::ptrdiff_t>(k * pts),
                      data_.begin() + static_cast<std::ptrdiff_t>((k + 1) * pts));
  return GridFunction(grid_, std::move(d));
}

void GridFunction::validate() const {
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw DomainError("grid function has a non-finite sample");
}

void GridFunction::check_same_shape(const GridFunction& o) const {
  if (!(grid_ == o.grid_) || extents_ != o.extents_) throw ShapeError("operands differ in shape");
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  check_same_shape(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  check_same_shape(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(const GridFunction& o) {
  check_same_shape(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] *= o.data_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(cplx c) {
  for (auto& z : data_) z *= c;
  return *this;
}

GridFunction GridFunction::abs() const {
  GridFunction r(*this);
  for (auto& z : r.data_) z = std::abs(z);
  return r;
}

GridFunction GridFunction::conj() const {
  GridFunction r(*this);
  for (auto& z : r.data_) z = std::conj(z);
  return r;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }
GridFunction operator*(cplx c, GridFunction a) { return a *= c; }

double l2_norm(const GridFunction& f) {
  double s = 0.0;
  for (const auto& z : f.samples()) s += std::norm(z);
  return std::sqrt(s * f.grid().cell_measure());
}

GridFunction circular_shift(const GridFunction& f, long shift, int axis) {
  const SampleGrid& g = f.grid();
  if (axis < 1 || axis > g.dimension()) throw ShapeError("axis out of range");
  long n = static_cast<long>(g.samples());
  long s = ((shift % n) + n) % n;
  GridFunction out(f);
  std::size_t pts = g.point_count();
  for (std::size_t c = 0; c < f.component_count(); ++c) {
    const cplx* src = f.samples().data() + c * pts;
    cplx* dst = out.samples().data() + c * pts;
    if (g.dimension() == 1) {
      for (long i = 0; i < n; ++i) dst[i] = src[(i + s) % n];
    } else {
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
          long si = axis == 1 ? (i + s) % n : i;
          long sj = axis == 2 ? (j + s) % n : j;
          dst[i * n + j] = src[si * n + sj];
        }
    }
  }
  return out;
}

SpectralMultiplier::SpectralMultiplier(std::vector<cplx> values) : values_(std::move(values)) {}

SpectralMultiplier SpectralMultiplier::from_symbol(const SampleGrid& grid,
                                                   const std::function<cplx(double)>& symbol) {
  long n = static_cast<long>(grid.samples());
  std::vector<cplx> v(static_cast<std::size_t>(n));
  for (long m = -n / 2; m < n / 2; ++m)
    v[static_cast<std::size_t>(m + n / 2)] = symbol(static_cast<double>(m) / grid.period());
  return SpectralMultiplier(std::move(v));
}

cplx SpectralMultiplier::at_frequency(long m) const {
  long n = static_cast<long>(values_.size());
  if (m < -n / 2 || m >= n / 2) throw DomainError("frequency outside multiplier range");
  return values_[static_cast<std::size_t>(m + n / 2)];
}

GridFunction fourier_transform(const GridFunction& f, bool inverse) {
  const SampleGrid& g = f.grid();
  GridFunction out(f);
  std::size_t pts = g.point_count();
  double scale = 1.0 / std::sqrt(static_cast<double>(pts));
  for (std::size_t c = 0; c < f.component_count(); ++c) {
    cplx* d = out.samples().data() + c * pts;
    detail::dft_inplace(d, g.samples(), g.dimension(), inverse ? +1 : -1);
    for (std::size_t i = 0; i < pts; ++i) d[i] *= scale;
  }
  return out;
}

GridFunction apply_multiplier(const GridFunction& f, const SpectralMultiplier& m, int axis) {
  const SampleGrid& g = f.grid();
  if (m.size() != g.samples()) throw ShapeError("multiplier length differs from sample count");
  if (axis < 1 || axis > g.dimension()) throw ShapeError("axis out of range");
  GridFunction spec = fourier_transform(f);
  std::size_t n = g.samples();
  std::size_t pts = g.point_count();
  for (std::size_t c = 0; c < f.component_count(); ++c) {
    cplx* d = spec.samples().data() + c * pts;
    if (g.dimension() == 1) {
      for (std::size_t i = 0; i < n; ++i) d[i] *= m.at_frequency(g.index_frequency(i));
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          d[i * n + j] *= m.at_frequency(g.index_frequency(axis == 1 ? i : j));
    }
  }
  return fourier_transform(spec, true);
}

GridFunction apply_symbol_2d(const GridFunction& f, const std::function<cplx(double, double)>& m) {
  const SampleGrid& g = f.grid();
  if (g.dimension() != 2) throw ShapeError("2D symbol on a 1D grid");
  GridFunction spec = fourier_transform(f);
  std::size_t n = g.samples();
  std::size_t pts = g.point_count();
  for (std::size_t c = 0; c < f.component_count(); ++c) {
    cplx* d = spec.samples().data() + c * pts;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] *= m(g.frequency(i), g.frequency(j));
  }
  return fourier_transform(spec, true);
}

double phi_hat(double xi) noexcept {
  double a = std::abs(xi);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return 1.0 - smooth_step(2.0 * a - 1.0);
}

double psi_hat(double xi) noexcept { return phi_hat(xi / 2.0) - phi_hat(xi); }

double lp_symbol(LpFlavor flavor, int k, double xi) noexcept {
  double p0 = phi_hat(std::ldexp(xi, -k));
  if (flavor == LpFlavor::P) return p0;
  return phi_hat(std::ldexp(xi, -(k + 1))) - p0;
}

void check_scale_budget(const SampleGrid& grid, int k) {
  if (k > grid.max_scale())
    throw ScaleRangeError("scale " + std::to_string(k) + " exceeds the Nyquist budget (max " +
                          std::to_string(grid.max_scale()) + ")");
}

GridFunction littlewood_paley(const GridFunction& f, int k, LpFlavor flavor, long shift_n, int axis) {
  check_scale_budget(f.grid(), k);
  double unit = std::ldexp(1.0, -k);
  auto m = SpectralMultiplier::from_symbol(f.grid(), [&](double xi) {
    cplx s = lp_symbol(flavor, k, xi);
    if (shift_n != 0)
      s *= std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(shift_n) * xi * unit);
    return s;
  });
  return apply_multiplier(f, m, axis);
}

GridFunction fractional_derivative(const GridFunction& f, double alpha, int axis) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  auto m = SpectralMultiplier::from_symbol(f.grid(), [&](double xi) -> cplx {
    if (alpha == 0.0) return 1.0;
    return xi == 0.0 ? 0.0 : std::pow(std::abs(xi), alpha);
  });
  return apply_multiplier(f, m, axis);
}

bool is_band_limited(const GridFunction& f, double band, double tol) {
  GridFunction spec = fourier_transform(f);
  const SampleGrid& g = f.grid();
  std::size_t n = g.samples();
  double peak = spec.max_abs();
  if (peak == 0.0) return true;
  std::size_t pts = g.point_count();
  for (std::size_t c = 0; c < f.component_count(); ++c)
    for (std::size_t i = 0; i < pts; ++i) {
      double fx = g.dimension() == 1 ? g.frequency(i) : g.frequency(i / n);
      double fy = g.dimension() == 1 ? 0.0 : g.frequency(i % n);
      if (std::max(std::abs(fx), std::abs(fy)) > band &&
          std::abs(spec[c * pts + i]) > tol * peak)
        return false;
    }
  return true;
}

}  // namespace hatk
