#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hatk/grid.hpp"

namespace hatk {

/// [m 2^-j, (m+1) 2^-j) with exact integer containment queries.
struct DyadicInterval {
  int scale = 0;
  std::int64_t position = 0;

  double length() const noexcept;
  double left() const noexcept;
  double right() const noexcept;
  double center() const noexcept { return 0.5 * (left() + right()); }

  bool contains(const DyadicInterval& o) const noexcept;
  bool disjoint(const DyadicInterval& o) const noexcept {
    return !contains(o) && !o.contains(*this);
  }
  bool contains_point(double x) const noexcept { return left() <= x && x < right(); }
  DyadicInterval parent() const noexcept;
  /// Ancestor at a coarser (smaller) scale.
  DyadicInterval ancestor(int coarser_scale) const noexcept;

  std::string to_string() const;

  auto operator<=>(const DyadicInterval&) const = default;
};

/// I_n = I + n|I|.
DyadicInterval translate_interval(const DyadicInterval& I, std::int64_t n) noexcept;

/// Distance from x to I on the real line.
double interval_distance(const DyadicInterval& I, double x) noexcept;

/// Distance from x to I on the torus of the given period.
double periodic_interval_distance(const DyadicInterval& I, double x, double period) noexcept;

struct AdaptedBump {
  DyadicInterval interval;
  int decay = 10;
};

/// (1 + dist(x, I)/|I|)^(-M) on the line.
double adapted_bump_eval(const AdaptedBump& bump, double x) noexcept;

/// chi-tilde_I^M sampled on a 1D torus, distance taken periodically.
// Sample i holds the bump at the centre of its cell [x_i, x_i + dx).
GridFunction adapted_bump_samples(const SampleGrid& grid, const AdaptedBump& bump);

/// Members contained in I0, order preserved.
std::vector<DyadicInterval> localize_collection(const std::vector<DyadicInterval>& family,
                                                const DyadicInterval& I0);

/**
 * All dyadic J with scale >= min_scale that contain a member of the family,
 * restricted to J inside 3*I0 when a bound is given. Sorted by (scale, position).
 */
std::vector<DyadicInterval> collection_plus(const std::vector<DyadicInterval>& family,
                                            std::optional<DyadicInterval> bound,
                                            int min_scale = 0);

/// Every dyadic subinterval of I0 down to `depth` generations, coarse to fine.
std::vector<DyadicInterval> dyadic_subintervals(const DyadicInterval& I0, int depth);

/// Number of scale-j intervals tiling the torus [0, L).
std::int64_t positions_per_scale(const SampleGrid& grid, int scale);

/// Reduces the position modulo the torus tiling at its scale.
DyadicInterval wrap_to_torus(const SampleGrid& grid, const DyadicInterval& I);

enum class PacketFlavor { lacunary, non_lacunary };

/**
 * Spectral window of a packet in units of 1/|I|: the packet spectrum is
 * phi_hat((xi|I| - c)/h) with c, h the window center and half-width.
 */
struct PacketWindow {
  double lo = 0.0;
  double hi = 1.0;

  static PacketWindow of(PacketFlavor flavor) noexcept {
    return flavor == PacketFlavor::lacunary ? PacketWindow{1.0, 2.0} : PacketWindow{0.0, 1.0};
  }
  /// Same center, width scaled by `margin`.
  PacketWindow shrunk(double margin) const noexcept;
};

/**
 * L2-normalized wave packets at one dyadic scale on a 1D torus, with fast
 * analysis (all positions at once) and synthesis through the DFT.
 */
class PacketBank {
 public:
  PacketBank(const SampleGrid& grid, int scale, PacketWindow window);

  int scale() const noexcept { return scale_; }
  std::int64_t positions() const noexcept { return positions_; }
  const PacketWindow& window() const noexcept { return window_; }

  /// <f, phi_{j,m}> for m = 0 .. positions-1.
  std::vector<cplx> analyze(const GridFunction& f) const;
  /// Same, from a precomputed unitary spectrum of f.
  std::vector<cplx> analyze_spectrum(const GridFunction& f_hat) const;

  /// sum_m a_m phi_{j,m}.
  GridFunction synthesize(const std::vector<cplx>& coeffs) const;

  /// The packet at position m sampled on the grid.
  GridFunction packet(std::int64_t m) const;

 private:
  SampleGrid grid_;
  int scale_;
  PacketWindow window_;
  std::int64_t positions_;
  std::size_t stride_;
  std::vector<cplx> base_spectrum_;  // unitary spectrum of the packet at position 0
};

/// Packets attached to an explicit interval list.
class WavePacketFamily {
 public:
  WavePacketFamily(SampleGrid grid, std::vector<DyadicInterval> intervals, PacketFlavor flavor);

  const std::vector<DyadicInterval>& intervals() const noexcept { return intervals_; }
  PacketFlavor flavor() const noexcept { return flavor_; }
  GridFunction packet(const DyadicInterval& I) const;

 private:
  SampleGrid grid_;
  std::vector<DyadicInterval> intervals_;
  PacketFlavor flavor_;
};

/// Finest and coarsest scales at which packets of a window are resolvable.
int packet_max_scale(const SampleGrid& grid, PacketWindow window);
int packet_min_scale(const SampleGrid& grid, PacketWindow window);

/// Three tiles on one spatial interval with consecutive frequency blocks.
struct Tritile {
  DyadicInterval spatial;
  std::int64_t freq_index = 0;

  /// Block [(l+i-1) 2^j, (l+i) 2^j) for slot i in {1, 2, 3}.
  std::pair<double, double> omega(int slot) const;
  /// Slot-i window in units of 1/|I_P|.
  PacketWindow window(int slot, double margin = 0.9) const;
};

/// One tritile per (scale, frequency index, torus position).
std::vector<Tritile> build_rank_one_tiles(const SampleGrid& grid, int scale_lo, int scale_hi,
                                          std::int64_t freq_lo, std::int64_t freq_hi,
                                          double margin = 0.9);

}  // namespace hatk
