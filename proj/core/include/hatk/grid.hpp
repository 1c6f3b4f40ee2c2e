#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hatk {

using cplx = std::complex<double>;

/**
 * Uniform periodic sample grid on [0, L) or [0, L)^2.
 *
 * Frequencies are physical: DFT index m corresponds to xi = m / L.
 */
class SampleGrid {
 public:
  SampleGrid(std::size_t samples, double period = 1.0, int dimension = 1);

  std::size_t samples() const noexcept { return n_; }
  double period() const noexcept { return period_; }
  int dimension() const noexcept { return dim_; }
  double spacing() const noexcept { return period_ / static_cast<double>(n_); }

  /// Total number of spatial points, N^dimension.
  std::size_t point_count() const noexcept { return dim_ == 1 ? n_ : n_ * n_; }

  /// Area element: spacing^dimension.
  double cell_measure() const noexcept;

  double coordinate(std::size_t i) const noexcept { return static_cast<double>(i) * spacing(); }

  /// Signed integer frequency of DFT index i, in [-N/2, N/2).
  long index_frequency(std::size_t i) const noexcept;

  /// Physical frequency m / L of DFT index i.
  double frequency(std::size_t i) const noexcept {
    return static_cast<double>(index_frequency(i)) / period_;
  }

  /// Largest k with 2^(k+1) <= N / (2L), the Littlewood-Paley budget.
  int max_scale() const noexcept;

  bool operator==(const SampleGrid& o) const noexcept {
    return n_ == o.n_ && period_ == o.period_ && dim_ == o.dim_;
  }

 private:
  std::size_t n_;
  double period_;
  int dim_;
};

/**
 * Complex samples on a SampleGrid, optionally carrying vector-component axes.
 *
 * Logical axis order is (x[, y], v1, v2, ...). Storage keeps each component
 * contiguous: index = component * point_count + spatial_index, with spatial
 * index = ix * N + iy in 2D.
 */
class GridFunction {
 public:
  /// Zero on the smallest 1D grid; a placeholder for result structs.
  GridFunction() : GridFunction(SampleGrid(8)) {}
  explicit GridFunction(SampleGrid grid, std::vector<std::size_t> vector_extents = {});
  GridFunction(SampleGrid grid, std::vector<cplx> samples,
               std::vector<std::size_t> vector_extents = {});

  static GridFunction from_function(const SampleGrid& grid, const std::function<cplx(double)>& fn);
  static GridFunction from_function(const SampleGrid& grid,
                                    const std::function<cplx(double, double)>& fn);
  static GridFunction constant(const SampleGrid& grid, cplx value);

  /// Stacks scalar functions on a common grid along one new vector axis.
  static GridFunction stack(const std::vector<GridFunction>& components);

  const SampleGrid& grid() const noexcept { return grid_; }
  const std::vector<std::size_t>& vector_extents() const noexcept { return extents_; }
  std::size_t component_count() const noexcept;
  std::size_t axis_count() const noexcept {
    return static_cast<std::size_t>(grid_.dimension()) + extents_.size();
  }
  /// Logical shape (x[, y], v1, ...).
  std::vector<std::size_t> shape() const;

  std::size_t size() const noexcept { return data_.size(); }
  std::span<const cplx> samples() const noexcept { return data_; }
  std::span<cplx> samples() noexcept { return data_; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }
  cplx& operator[](std::size_t i) { return data_[i]; }

  /// 2D access for scalar functions.
  const cplx& at(std::size_t ix, std::size_t iy) const { return data_[ix * grid_.samples() + iy]; }
  cplx& at(std::size_t ix, std::size_t iy) { return data_[ix * grid_.samples() + iy]; }

  GridFunction component(std::size_t k) const;
  bool is_scalar() const noexcept { return extents_.empty(); }

  /// Throws DomainError if any sample is NaN or infinite.
  void validate() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(const GridFunction& o);
  GridFunction& operator*=(cplx c);

  /// Pointwise modulus as a real-valued function.
  GridFunction abs() const;
  GridFunction conj() const;
  double max_abs() const;

 private:
  void check_same_shape(const GridFunction& o) const;

  SampleGrid grid_;
  std::vector<std::size_t> extents_;
  std::vector<cplx> data_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx c, GridFunction a);
inline GridFunction operator*(GridFunction a, cplx c) { return c * std::move(a); }

/// Discrete L2 norm (sum |f|^2 dx)^(1/2) over all samples.
double l2_norm(const GridFunction& f);

/// Circular translation: out(x) = f(x + shift * dx) along the given spatial axis (1 or 2).
GridFunction circular_shift(const GridFunction& f, long shift, int axis = 1);

/// Frequency-indexed multiplier values for frequencies -N/2 .. N/2-1.
class SpectralMultiplier {
 public:
  explicit SpectralMultiplier(std::vector<cplx> values);

  /// Samples fn at the physical frequencies of a grid axis.
  static SpectralMultiplier from_symbol(const SampleGrid& grid,
                                        const std::function<cplx(double)>& symbol);

  std::size_t size() const noexcept { return values_.size(); }
  cplx at_frequency(long m) const;
  const std::vector<cplx>& values() const noexcept { return values_; }

 private:
  std::vector<cplx> values_;
};

/// Unitary DFT over spatial axes of every component.
GridFunction fourier_transform(const GridFunction& f, bool inverse = false);

/// Applies a multiplier along one spatial axis (1 = x, 2 = y).
GridFunction apply_multiplier(const GridFunction& f, const SpectralMultiplier& m, int axis = 1);

/// Applies a separable or general 2D symbol m(xi, eta) in one pass.
GridFunction apply_symbol_2d(const GridFunction& f, const std::function<cplx(double, double)>& m);

/// C-infinity even bump: 1 on [-1/2, 1/2], 0 outside (-1, 1).
double phi_hat(double xi) noexcept;

/// Annular profile phi_hat(xi/2) - phi_hat(xi).
double psi_hat(double xi) noexcept;

enum class LpFlavor { P, Q };

/// Multiplier value of P_k or Q_k at physical frequency xi.
double lp_symbol(LpFlavor flavor, int k, double xi) noexcept;

/**
 * P_k f or Q_k f along an axis, optionally shifted by n * 2^-k:
 * the multiplier is composed with exp(2 pi i n xi / 2^k), so the result
 * equals the unshifted output evaluated at x + n 2^-k.
 */
GridFunction littlewood_paley(const GridFunction& f, int k, LpFlavor flavor, long shift_n = 0,
                              int axis = 1);

/// Throws ScaleRangeError unless 2^(k+1) <= N / (2L).
void check_scale_budget(const SampleGrid& grid, int k);

/// Spectral |xi|^alpha along an axis; frequency 0 maps to 0 when alpha > 0.
GridFunction fractional_derivative(const GridFunction& f, double alpha, int axis = 1);

/// True if every spectral coefficient with |xi| > band is below tol * peak.
bool is_band_limited(const GridFunction& f, double band, double tol = 1e-12);

}  // namespace hatk
