#include "hatk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fft.hpp"
#include "hatk/error.hpp"

namespace hatk {

namespace {

void require_1d(const GridFunction& f) {
  if (f.grid().dimension() != 1 || !f.is_scalar())
    throw ShapeError("analysis operators act on scalar 1D functions");
}

// Samples per interval of the given scale; throws unless it is a positive integer.
std::size_t interval_stride(const SampleGrid& grid, int scale) {
  double s = std::ldexp(1.0, -scale) / grid.spacing();
  double r = std::round(s);
  if (r < 1.0 || std::abs(s - r) > 1e-9)
    throw ScaleRangeError("scale " + std::to_string(scale) + " is finer than the grid");
  return static_cast<std::size_t>(r);
}

// First sample index of I on the torus (requires |I| <= L).
std::size_t first_index(const SampleGrid& grid, const DyadicInterval& I, std::size_t stride) {
  auto per = static_cast<std::int64_t>(grid.samples() / stride);
  std::int64_t m = ((I.position % per) + per) % per;
  return static_cast<std::size_t>(m) * stride;
}

std::vector<int> torus_scales(const SampleGrid& grid) {
  std::vector<int> out;
  for (int s = torus_scale(grid);; ++s) {
    double r = std::ldexp(1.0, -s) / grid.spacing();
    if (r < 1.0 - 1e-12 || std::abs(r - std::round(r)) > 1e-9) break;
    out.push_back(s);
  }
  return out;
}

}  // namespace

int torus_scale(const SampleGrid& grid) {
  for (int s = -60; s <= 60; ++s) {
    double p = std::ldexp(grid.period(), s);
    if (p >= 1.0 - 1e-12 && std::abs(p - std::round(p)) < 1e-9) return s;
  }
  throw ScaleRangeError("torus period is not a dyadic multiple of any interval");
}

AverageTable::AverageTable(const GridFunction& f, int decay) : grid_(f.grid()), decay_(decay) {
  require_1d(f);
  if (decay <= 0) throw DomainError("bump decay must be positive");
  spectrum_.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) spectrum_[i] = std::abs(f[i]);
  detail::dft_inplace(spectrum_.data(), spectrum_.size(), 1, -1);
}

const std::vector<double>& AverageTable::scale_row(int scale) const {
  auto it = rows_.find(scale);
  if (it != rows_.end()) return it->second;
  std::size_t n = grid_.samples();
  double len = std::ldexp(1.0, -scale);
  double L = grid_.period();
  std::vector<cplx> k(n);
  DyadicInterval base{scale, 0};
  for (std::size_t i = 0; i < n; ++i) {
    double d = periodic_interval_distance(base, grid_.coordinate(i) + 0.5 * grid_.spacing(), L) / len;
    k[i] = std::pow(1.0 + d, -decay_);
  }
  detail::dft_inplace(k.data(), n, 1, -1);
  for (std::size_t m = 0; m < n; ++m) k[m] = spectrum_[m] * std::conj(k[m]);
  detail::dft_inplace(k.data(), n, 1, +1);
  std::vector<double> row(n);
  double scale_factor = grid_.spacing() / (len * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) row[i] = std::max(0.0, k[i].real() * scale_factor);
  return rows_.emplace(scale, std::move(row)).first->second;
}

double AverageTable::average(const DyadicInterval& I, long shift) const {
  double len = I.length();
  if (len > grid_.period()) {
    const auto& row = scale_row(torus_scale(grid_));
    return row[0] * grid_.period() / len;
  }
  std::size_t stride = interval_stride(grid_, I.scale);
  const auto& row = scale_row(I.scale);
  return row[first_index(grid_, translate_interval(I, shift), stride)];
}

std::vector<cplx> packet_coefficients(const GridFunction& f, const std::vector<DyadicInterval>& family,
                                      PacketWindow window, long shift) {
  require_1d(f);
  GridFunction fh = fourier_transform(f);
  std::map<int, std::vector<cplx>> per_scale;
  std::vector<cplx> out;
  out.reserve(family.size());
  for (const auto& I : family) {
    auto it = per_scale.find(I.scale);
    if (it == per_scale.end()) {
      PacketBank bank(f.grid(), I.scale, window);
      it = per_scale.emplace(I.scale, bank.analyze_spectrum(fh)).first;
    }
    auto p = static_cast<std::int64_t>(it->second.size());
    std::int64_t m = (((I.position + shift) % p) + p) % p;
    out.push_back(it->second[static_cast<std::size_t>(m)]);
  }
  return out;
}

std::string to_string(SizeFlavor flavor) {
  switch (flavor) {
    case SizeFlavor::lacunary: return "lacunary";
    case SizeFlavor::non_lacunary: return "non-lacunary";
    case SizeFlavor::modified: return "modified";
    case SizeFlavor::bht: return "bht";
    case SizeFlavor::shifted: return "shifted";
  }
  return "unknown";
}

GridFunction localized_square_function(const SampleGrid& grid, const std::vector<DyadicInterval>& family,
                                       const std::vector<cplx>& coefficients, const DyadicInterval& I0) {
  if (coefficients.size() != family.size()) throw ShapeError("one coefficient per interval expected");
  std::vector<double> acc(grid.samples(), 0.0);
  for (std::size_t j = 0; j < family.size(); ++j) {
    const auto& I = family[j];
    if (!I0.contains(I)) continue;
    std::size_t stride = interval_stride(grid, I.scale);
    std::size_t start = first_index(grid, I, stride);
    double v = std::norm(coefficients[j]) / I.length();
    for (std::size_t i = 0; i < stride; ++i) acc[(start + i) % grid.samples()] += v;
  }
  GridFunction out(grid);
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = std::sqrt(acc[i]);
  return out;
}

namespace {

// |I0|^-1 ||S_I0||_{1,inf} for each member I0 of the family.
std::vector<double> lacunary_scores(const GridFunction& f, const std::vector<DyadicInterval>& family) {
  auto c = packet_coefficients(f, family, PacketWindow::of(PacketFlavor::lacunary));
  std::vector<double> out(family.size());
  for (std::size_t j = 0; j < family.size(); ++j) {
    GridFunction s = localized_square_function(f.grid(), family, c, family[j]);
    out[j] = weak_lp_norm(s, 1.0) / family[j].length();
  }
  return out;
}

std::vector<double> non_lacunary_scores(const GridFunction& f, const std::vector<DyadicInterval>& family) {
  auto c = packet_coefficients(f, family, PacketWindow::of(PacketFlavor::non_lacunary));
  std::vector<double> out(family.size());
  for (std::size_t j = 0; j < family.size(); ++j) out[j] = std::abs(c[j]) / std::sqrt(family[j].length());
  return out;
}

SizeReport pick_max(const std::vector<DyadicInterval>& family, const std::vector<double>& scores,
                    SizeFlavor flavor, long shift) {
  SizeReport r{scores[0], family[0], flavor, shift};
  for (std::size_t j = 1; j < family.size(); ++j)
    if (scores[j] > r.value) {
      r.value = scores[j];
      r.witness = family[j];
    }
  return r;
}

}  // namespace

SizeReport size(const GridFunction& f, const std::vector<DyadicInterval>& family, SizeFlavor flavor,
                const SizeOptions& options) {
  require_1d(f);
  if (family.empty()) throw DomainError("size of an empty family");
  std::vector<double> scores(family.size());
  long shift = 0;
  switch (flavor) {
    case SizeFlavor::non_lacunary: scores = non_lacunary_scores(f, family); break;
    case SizeFlavor::lacunary: scores = lacunary_scores(f, family); break;
    case SizeFlavor::shifted: shift = options.shift; [[fallthrough]];
    case SizeFlavor::modified:
    case SizeFlavor::bht: {
      AverageTable t(f, options.decay);
      for (std::size_t j = 0; j < family.size(); ++j) scores[j] = t.average(family[j], shift);
      break;
    }
  }
  return pick_max(family, scores, flavor, shift);
}

SizeReport size_tilde(const GridFunction& f, const std::vector<DyadicInterval>& family,
                      std::optional<DyadicInterval> I0, int decay) {
  require_1d(f);
  if (family.empty()) throw DomainError("size of an empty family");
  auto plus = collection_plus(family, I0, torus_scale(f.grid()));
  if (plus.empty()) throw DomainError("no dyadic ancestor fits the bound");
  AverageTable t(f, decay);
  std::vector<double> scores(plus.size());
  for (std::size_t j = 0; j < plus.size(); ++j) scores[j] = t.average(plus[j]);
  return pick_max(plus, scores, SizeFlavor::modified, 0);
}

SizeReport bht_size(const GridFunction& f, const std::vector<Tritile>& tiles,
                    std::optional<DyadicInterval> I0, int decay) {
  require_1d(f);
  if (tiles.empty() && !I0) throw DomainError("size of an empty tile set");
  AverageTable t(f, decay);
  std::vector<DyadicInterval> spatial;
  for (const auto& P : tiles)
    if (!I0 || I0->contains(P.spatial)) spatial.push_back(P.spatial);
  if (I0) spatial.push_back(*I0);
  if (spatial.empty()) throw DomainError("no tile inside I0");
  std::vector<double> scores(spatial.size());
  for (std::size_t j = 0; j < spatial.size(); ++j) scores[j] = t.average(spatial[j]);
  return pick_max(spatial, scores, SizeFlavor::bht, 0);
}

EnergyReport energy(const GridFunction& f, const std::vector<DyadicInterval>& family, PacketFlavor flavor) {
  require_1d(f);
  if (family.empty()) throw DomainError("energy of an empty family");
  std::vector<double> s = flavor == PacketFlavor::lacunary ? lacunary_scores(f, family)
                                                            : non_lacunary_scores(f, family);
  std::set<int> levels;
  for (double v : s)
    if (v > 0.0) levels.insert(static_cast<int>(std::floor(std::log2(v))));

  // Largest intervals first; ties by position for a canonical witness.
  std::vector<std::size_t> order(family.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return family[a] < family[b]; });

  EnergyReport best;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    int n = *it;
    double thr = std::ldexp(1.0, n);
    std::vector<DyadicInterval> picked;
    double total = 0.0;
    for (std::size_t j : order) {
      if (s[j] < thr) continue;
      const auto& I = family[j];
      bool clash = std::any_of(picked.begin(), picked.end(),
                               [&](const DyadicInterval& J) { return !J.disjoint(I); });
      if (clash) continue;
      picked.push_back(I);
      total += I.length();
    }
    double v = thr * total;
    if (v > best.value) best = {v, n, std::move(picked)};
  }
  return best;
}

GridFunction maximal(const GridFunction& f, long shift_n, int decay) {
  require_1d(f);
  const SampleGrid& g = f.grid();
  AverageTable t(f, decay);
  GridFunction out(g);
  for (int s : torus_scales(g)) {
    std::size_t stride = interval_stride(g, s);
    for (std::size_t i = 0; i < g.samples(); ++i) {
      DyadicInterval I{s, static_cast<std::int64_t>(i / stride)};
      double v = t.average(I, shift_n);
      if (v > out[i].real()) out[i] = v;
    }
  }
  return out;
}

GridFunction shifted_square(const GridFunction& f, long shift_n) {
  require_1d(f);
  const SampleGrid& g = f.grid();
  PacketWindow w = PacketWindow::of(PacketFlavor::lacunary);
  GridFunction fh = fourier_transform(f);
  std::vector<double> acc(g.samples(), 0.0);
  for (int s = packet_min_scale(g, w); s <= packet_max_scale(g, w); ++s) {
    PacketBank bank(g, s, w);
    auto c = bank.analyze_spectrum(fh);
    auto p = bank.positions();
    std::size_t stride = g.samples() / static_cast<std::size_t>(p);
    double len = std::ldexp(1.0, -s);
    for (std::int64_t m = 0; m < p; ++m) {
      std::int64_t src = (((m + shift_n) % p) + p) % p;
      double v = std::norm(c[static_cast<std::size_t>(src)]) / len;
      std::size_t start = static_cast<std::size_t>(m) * stride;
      for (std::size_t i = 0; i < stride; ++i) acc[start + i] += v;
    }
  }
  GridFunction out(g);
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = std::sqrt(acc[i]);
  return out;
}

ExceptionalSet exceptional_set(const MeasurableSet& protect, const std::vector<ExceptionalInput>& inputs,
                               double C, bool require_major) {
  double mE = protect.measure();
  if (!(mE > 0.0)) throw DomainError("exceptional set needs |E| > 0");
  if (!(C > 0.0)) throw DomainError("exceptional-set constant must be positive");
  const SampleGrid& g = protect.grid();
  std::vector<bool> in_omega(g.samples(), false);
  ExceptionalSet out{MeasurableSet::empty(g), protect, {}, 1.0, true};
  for (const auto& in : inputs) {
    if (!(in.function.grid() == g) || !(in.weight.grid() == g)) throw ShapeError("inputs on another grid");
    GridFunction h = in.function * in.weight;
    double thr = C * lp_norm(h, 1.0) / mE;
    out.thresholds.push_back(thr);
    GridFunction mh = maximal(h);
    for (std::size_t i = 0; i < g.samples(); ++i)
      if (mh[i].real() > thr) in_omega[i] = true;
  }
  out.omega = MeasurableSet::from_predicate(g, [&](std::size_t i) { return in_omega[i]; });
  out.e_tilde = protect.set_difference(out.omega);
  out.ratio = out.e_tilde.measure() / mE;
  out.major = out.ratio >= 0.5;
  if (!out.major && require_major)
    throw MajorSubsetError("E minus the exceptional set is not major; raise C", out.ratio);
  return out;
}

}  // namespace hatk
