#include "hatk/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "fft.hpp"
#include "hatk/error.hpp"

namespace hatk {

double DyadicInterval::length() const noexcept { return std::ldexp(1.0, -scale); }
double DyadicInterval::left() const noexcept {
  return std::ldexp(static_cast<double>(position), -scale);
}
double DyadicInterval::right() const noexcept {
  return std::ldexp(static_cast<double>(position + 1), -scale);
}

bool DyadicInterval::contains(const DyadicInterval& o) const noexcept {
  if (o.scale < scale) return false;
  return (o.position >> (o.scale - scale)) == position;
}

DyadicInterval DyadicInterval::parent() const noexcept { return {scale - 1, position >> 1}; }

DyadicInterval DyadicInterval::ancestor(int coarser_scale) const noexcept {
  if (coarser_scale >= scale) return *this;
  return {coarser_scale, position >> (scale - coarser_scale)};
}

std::string DyadicInterval::to_string() const {
  return "[" + std::to_string(position) + "*2^" + std::to_string(-scale) + ", " +
         std::to_string(position + 1) + "*2^" + std::to_string(-scale) + ")";
}

DyadicInterval translate_interval(const DyadicInterval& I, std::int64_t n) noexcept {
  return {I.scale, I.position + n};
}

double interval_distance(const DyadicInterval& I, double x) noexcept {
  if (x < I.left()) return I.left() - x;
  if (x >= I.right()) return x - I.right();
  return 0.0;
}

double periodic_interval_distance(const DyadicInterval& I, double x, double period) noexcept {
  double a = I.left();
  double len = I.length();
  if (len >= period) return 0.0;
  double t = std::fmod(x - a, period);
  if (t < 0) t += period;
  if (t < len) return 0.0;
  return std::min(t - len, period - t);
}

double adapted_bump_eval(const AdaptedBump& bump, double x) noexcept {
  double d = interval_distance(bump.interval, x) / bump.interval.length();
  return std::pow(1.0 + d, -bump.decay);
}

GridFunction adapted_bump_samples(const SampleGrid& grid, const AdaptedBump& bump) {
  if (grid.dimension() != 1) throw ShapeError("adapted bumps are sampled on 1D grids");
  GridFunction out(grid);
  double len = bump.interval.length();
  for (std::size_t i = 0; i < grid.samples(); ++i) {
    double d = periodic_interval_distance(bump.interval, grid.coordinate(i) + 0.5 * grid.spacing(), grid.period()) / len;
    out[i] = std::pow(1.0 + d, -bump.decay);
  }
  return out;
}

std::vector<DyadicInterval> localize_collection(const std::vector<DyadicInterval>& family,
                                                const DyadicInterval& I0) {
  std::vector<DyadicInterval> out;
  for (const auto& I : family)
    if (I0.contains(I)) out.push_back(I);
  return out;
}

std::vector<DyadicInterval> collection_plus(const std::vector<DyadicInterval>& family,
                                            std::optional<DyadicInterval> bound, int min_scale) {
  std::set<DyadicInterval> acc;
  for (const auto& I : family) {
    for (int s = I.scale; s >= min_scale; --s) {
      DyadicInterval J = I.ancestor(s);
      if (bound) {
        // J inside 3*I0 = [a - |I0|, b + |I0|), compared on the 2^-max(scale) lattice.
        int fine = std::max(J.scale, bound->scale);
        std::int64_t jl = J.position << (fine - J.scale);
        std::int64_t jr = (J.position + 1) << (fine - J.scale);
        std::int64_t w = std::int64_t{1} << (fine - bound->scale);
        std::int64_t bl = (bound->position << (fine - bound->scale)) - w;
        std::int64_t br = ((bound->position + 1) << (fine - bound->scale)) + w;
        if (jl < bl || jr > br) break;  // coarser ancestors are larger still
      }
      if (!acc.insert(J).second) break;  // ancestors above already present
    }
  }
  return {acc.begin(), acc.end()};
}

std::vector<DyadicInterval> dyadic_subintervals(const DyadicInterval& I0, int depth) {
  std::vector<DyadicInterval> out;
  for (int d = 0; d <= depth; ++d) {
    std::int64_t count = std::int64_t{1} << d;
    for (std::int64_t k = 0; k < count; ++k) out.push_back({I0.scale + d, (I0.position << d) + k});
  }
  return out;
}

std::int64_t positions_per_scale(const SampleGrid& grid, int scale) {
  double p = std::ldexp(grid.period(), scale);
  double r = std::round(p);
  if (r < 1.0 || std::abs(p - r) > 1e-9) throw ScaleRangeError("scale does not tile the torus");
  return static_cast<std::int64_t>(r);
}

DyadicInterval wrap_to_torus(const SampleGrid& grid, const DyadicInterval& I) {
  std::int64_t p = positions_per_scale(grid, I.scale);
  std::int64_t m = ((I.position % p) + p) % p;
  return {I.scale, m};
}

PacketWindow PacketWindow::shrunk(double margin) const noexcept {
  double c = 0.5 * (lo + hi);
  double h = 0.5 * (hi - lo) * margin;
  return {c - h, c + h};
}

namespace {

std::vector<cplx> window_spectrum(const SampleGrid& grid, int scale, PacketWindow w) {
  std::size_t n = grid.samples();
  std::vector<cplx> s(n);
  double len = std::ldexp(1.0, -scale);
  double c = 0.5 * (w.lo + w.hi);
  double h = 0.5 * (w.hi - w.lo);
  double center = 0.5 * len;
  double energy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double xi = grid.frequency(k);
    double a = phi_hat((xi * len - c) / h);
    s[k] = a * std::polar(1.0, -2.0 * std::numbers::pi * xi * center);
    energy += a * a;
  }
  if (energy == 0.0) throw ScaleRangeError("packet window holds no grid frequency");
  double norm = 1.0 / std::sqrt(energy * grid.spacing());
  for (auto& z : s) z *= norm;
  return s;
}

bool scale_resolvable(const SampleGrid& grid, int scale, PacketWindow w) {
  double len = std::ldexp(1.0, -scale);
  if (len < grid.spacing() || len > grid.period()) return false;
  double stride = len / grid.spacing();
  if (std::abs(stride - std::round(stride)) > 1e-9) return false;
  double nyq = static_cast<double>(grid.samples()) / (2.0 * grid.period());
  if (std::max(std::abs(w.hi), std::abs(w.lo)) / len > nyq) return false;
  double c = 0.5 * (w.lo + w.hi);
  double h = 0.5 * (w.hi - w.lo);
  for (std::size_t k = 0; k < grid.samples(); ++k)
    if (phi_hat((grid.frequency(k) * len - c) / h) > 0.0) return true;
  return false;
}

}  // namespace

int packet_max_scale(const SampleGrid& grid, PacketWindow window) {
  int best = -1000;
  for (int j = -30; j <= 40; ++j)
    if (scale_resolvable(grid, j, window)) best = j;
  if (best == -1000) throw ScaleRangeError("no resolvable packet scale on this grid");
  return best;
}

int packet_min_scale(const SampleGrid& grid, PacketWindow window) {
  for (int j = -30; j <= 40; ++j)
    if (scale_resolvable(grid, j, window)) return j;
  throw ScaleRangeError("no resolvable packet scale on this grid");
}

PacketBank::PacketBank(const SampleGrid& grid, int scale, PacketWindow window)
    : grid_(grid), scale_(scale), window_(window) {
  if (grid.dimension() != 1) throw ShapeError("packets live on 1D grids");
  if (!scale_resolvable(grid, scale, window))
    throw ScaleRangeError("packet scale " + std::to_string(scale) + " outside the grid budget");
  positions_ = positions_per_scale(grid, scale);
  stride_ = grid.samples() / static_cast<std::size_t>(positions_);
  base_spectrum_ = window_spectrum(grid, scale, window);
}

std::vector<cplx> PacketBank::analyze(const GridFunction& f) const {
  return analyze_spectrum(fourier_transform(f));
}

std::vector<cplx> PacketBank::analyze_spectrum(const GridFunction& f_hat) const {
  std::size_t n = grid_.samples();
  std::vector<cplx> buf(n);
  for (std::size_t k = 0; k < n; ++k) buf[k] = f_hat[k] * std::conj(base_spectrum_[k]);
  detail::dft_inplace(buf.data(), n, 1, +1);
  std::vector<cplx> out(static_cast<std::size_t>(positions_));
  double dx = grid_.spacing();
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = dx * buf[m * stride_];
  return out;
}

GridFunction PacketBank::synthesize(const std::vector<cplx>& coeffs) const {
  if (coeffs.size() != static_cast<std::size_t>(positions_))
    throw ShapeError("coefficient count differs from packet positions");
  std::size_t n = grid_.samples();
  std::vector<cplx> buf(n);
  for (std::size_t m = 0; m < coeffs.size(); ++m) buf[m * stride_] = coeffs[m];
  detail::dft_inplace(buf.data(), n, 1, -1);
  for (std::size_t k = 0; k < n; ++k) buf[k] *= base_spectrum_[k];
  detail::dft_inplace(buf.data(), n, 1, +1);
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& z : buf) z *= scale;
  return GridFunction(grid_, std::move(buf));
}

GridFunction PacketBank::packet(std::int64_t m) const {
  std::vector<cplx> c(static_cast<std::size_t>(positions_));
  std::int64_t w = ((m % positions_) + positions_) % positions_;
  c[static_cast<std::size_t>(w)] = 1.0;
  return synthesize(c);
}

WavePacketFamily::WavePacketFamily(SampleGrid grid, std::vector<DyadicInterval> intervals,
                                   PacketFlavor flavor)
    : grid_(grid), intervals_(std::move(intervals)), flavor_(flavor) {}

GridFunction WavePacketFamily::packet(const DyadicInterval& I) const {
  PacketBank bank(grid_, I.scale, PacketWindow::of(flavor_));
  return bank.packet(I.position);
}

std::pair<double, double> Tritile::omega(int slot) const {
  if (slot < 1 || slot > 3) throw DomainError("tritile slot must be 1, 2 or 3");
  double w = std::ldexp(1.0, spatial.scale);
  double l = static_cast<double>(freq_index);
  return {(l + slot - 1) * w, (l + slot) * w};
}

PacketWindow Tritile::window(int slot, double margin) const {
  if (slot < 1 || slot > 3) throw DomainError("tritile slot must be 1, 2 or 3");
  double l = static_cast<double>(freq_index);
  return PacketWindow{l + slot - 1, l + slot}.shrunk(margin);
}

std::vector<Tritile> build_rank_one_tiles(const SampleGrid& grid, int scale_lo, int scale_hi,
                                          std::int64_t freq_lo, std::int64_t freq_hi,
                                          double margin) {
  if (scale_lo > scale_hi || freq_lo > freq_hi) throw DomainError("empty tile range");
  std::vector<Tritile> tiles;
  for (int s = scale_lo; s <= scale_hi; ++s) {
    for (std::int64_t l = freq_lo; l <= freq_hi; ++l) {
      Tritile probe{{s, 0}, l};
      for (int slot = 1; slot <= 3; ++slot)
        if (!scale_resolvable(grid, s, probe.window(slot, margin)))
          throw ScaleRangeError("tile scale " + std::to_string(s) + " / frequency " +
                                std::to_string(l) + " outside the grid budget");
      std::int64_t p = positions_per_scale(grid, s);
      for (std::int64_t m = 0; m < p; ++m) tiles.push_back({{s, m}, l});
    }
  }
  return tiles;
}

}  // namespace hatk
