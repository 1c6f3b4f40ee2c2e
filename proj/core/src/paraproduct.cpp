#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>

#include "fft.hpp"
#include "hatk/error.hpp"
#include "hatk/operators.hpp"

namespace hatk {

namespace {

// Coarsest Littlewood-Paley scale: P_k0 keeps only the zero frequency.
int coarsest_lp_scale(const SampleGrid& g) {
  return static_cast<int>(std::floor(std::log2(1.0 / g.period()) + 1e-12));
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid()) || a.size() != b.size()) throw ShapeError("operands live on different grids");
}

void require_scalar_1d(const GridFunction& f) {
  if (f.grid().dimension() != 1 || !f.is_scalar()) throw ShapeError("operator expects a scalar 1D function");
}

// Per scale, the summed coefficient of each torus position.
std::map<int, std::vector<cplx>> coefficients_by_scale(const SampleGrid& g, const ParaproductSpec& spec) {
  std::map<int, std::vector<cplx>> out;
  for (std::size_t i = 0; i < spec.family.size(); ++i) {
    const auto& I = spec.family[i];
    auto& row = out[I.scale];
    if (row.empty()) row.assign(static_cast<std::size_t>(positions_per_scale(g, I.scale)), cplx{});
    row[static_cast<std::size_t>(wrap_to_torus(g, I).position)] += spec.coefficients[i];
  }
  return out;
}

// Largest |xi| carrying spectral mass above tol * peak.
double spectral_band(const GridFunction& f, double tol = 1e-13) {
  GridFunction s = fourier_transform(f);
  const SampleGrid& g = f.grid();
  std::size_t n = g.samples();
  double peak = s.max_abs();
  if (peak == 0.0) return 0.0;
  double band = 0.0;
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (std::abs(s[c]) <= tol * peak) continue;
    std::size_t local = c % g.point_count();
    double xi = std::abs(g.frequency(g.dimension() == 1 ? local : local / n));
    if (g.dimension() == 2) xi = std::max(xi, std::abs(g.frequency(local % n)));
    band = std::max(band, xi);
  }
  return band;
}

}  // namespace

ParaproductSpec ParaproductSpec::unit(std::vector<DyadicInterval> family) {
  ParaproductSpec s;
  s.coefficients.assign(family.size(), cplx{1.0, 0.0});
  s.family = std::move(family);
  return s;
}

double ParaproductSpec::coefficient_bound() const {
  double b = 0.0;
  for (const auto& c : coefficients) b = std::max(b, std::abs(c));
  return b;
}

void ParaproductSpec::validate() const {
  if (coefficients.size() != family.size()) throw ShapeError("one coefficient per interval is required");
}

std::vector<DyadicInterval> full_dyadic_family(const SampleGrid& grid, const std::array<PacketFlavor, 3>& slots) {
  int lo = -1000, hi = 1000;
  for (auto s : slots) {
    lo = std::max(lo, packet_min_scale(grid, PacketWindow::of(s)));
    hi = std::min(hi, packet_max_scale(grid, PacketWindow::of(s)));
  }
  std::vector<DyadicInterval> fam;
  for (int j = lo; j <= hi; ++j) {
    std::int64_t p = positions_per_scale(grid, j);
    for (std::int64_t m = 0; m < p; ++m) fam.push_back({j, m});
  }
  return fam;
}

GridFunction discretized_paraproduct(const ParaproductSpec& spec, const GridFunction& f, const GridFunction& g) {
  spec.validate();
  require_scalar_1d(f);
  require_same_grid(f, g);
  const SampleGrid& grid = f.grid();
  GridFunction out(grid);
  if (spec.family.empty()) return out;
  GridFunction fh = fourier_transform(f), gh = fourier_transform(g);
  for (const auto& [scale, c] : coefficients_by_scale(grid, spec)) {
    PacketBank b1(grid, scale, PacketWindow::of(spec.slots[0]));
    PacketBank b2(grid, scale, PacketWindow::of(spec.slots[1]));
    PacketBank b3(grid, scale, PacketWindow::of(spec.slots[2]));
    auto a1 = b1.analyze_spectrum(fh);
    auto a2 = b2.analyze_spectrum(gh);
    double w = 1.0 / std::sqrt(std::ldexp(1.0, -scale));
    std::vector<cplx> a(c.size());
    for (std::size_t m = 0; m < c.size(); ++m) a[m] = c[m] * w * a1[m] * a2[m];
    out += b3.synthesize(a);
  }
  return out;
}

cplx trilinear_form(const ParaproductSpec& spec, const GridFunction& f, const GridFunction& g,
                    const GridFunction& h) {
  spec.validate();
  require_scalar_1d(f);
  require_same_grid(f, g);
  require_same_grid(f, h);
  const SampleGrid& grid = f.grid();
  GridFunction fh = fourier_transform(f), gh = fourier_transform(g), hh = fourier_transform(h.conj());
  cplx total{};
  for (const auto& [scale, c] : coefficients_by_scale(grid, spec)) {
    PacketBank b1(grid, scale, PacketWindow::of(spec.slots[0]));
    PacketBank b2(grid, scale, PacketWindow::of(spec.slots[1]));
    PacketBank b3(grid, scale, PacketWindow::of(spec.slots[2]));
    auto a1 = b1.analyze_spectrum(fh);
    auto a2 = b2.analyze_spectrum(gh);
    auto a3 = b3.analyze_spectrum(hh);
    double w = 1.0 / std::sqrt(std::ldexp(1.0, -scale));
    for (std::size_t m = 0; m < c.size(); ++m) total += c[m] * w * a1[m] * a2[m] * std::conj(a3[m]);
  }
  return total;
}

TelescopingTerms telescoping_decomposition(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  if (!f.is_scalar()) throw ShapeError("telescoping expects scalar functions");
  const SampleGrid& grid = f.grid();
  TelescopingTerms t;
  t.k0 = coarsest_lp_scale(grid);
  double band = std::max(spectral_band(f), spectral_band(g));
  int k1 = t.k0;
  while (std::ldexp(1.0, k1 - 1) < band) ++k1;
  t.k1 = k1;
  if (k1 - 1 > grid.max_scale())
    throw ScaleRangeError("inputs are not band-limited within the scale budget (band " + std::to_string(band) +
                          ", needs scale " + std::to_string(k1 - 1) + ", max " +
                          std::to_string(grid.max_scale()) + ")");

  using LP = LpFlavor;
  // Pieces: QP, PQ, QQ at every k, then the coarsest PP block.
  const std::array<std::pair<LP, LP>, 4> kinds{{{LP::Q, LP::P}, {LP::P, LP::Q}, {LP::Q, LP::Q}, {LP::P, LP::P}}};
  auto scales_of = [&](int piece) {
    std::vector<int> ks;
    if (piece == 3)
      ks.push_back(t.k0);
    else
      for (int k = t.k0; k < k1; ++k) ks.push_back(k);
    return ks;
  };
  auto filt = [](const GridFunction& h, LP fl, int k, int axis) { return littlewood_paley(h, k, fl, 0, axis); };

  if (grid.dimension() == 1) {
    t.terms.assign(3, GridFunction(grid));
    t.remainder = GridFunction(grid);
    for (int piece = 0; piece < 4; ++piece)
      for (int k : scales_of(piece)) {
        GridFunction term = filt(f, kinds[static_cast<std::size_t>(piece)].first, k, 1) *
                            filt(g, kinds[static_cast<std::size_t>(piece)].second, k, 1);
        (piece == 3 ? t.remainder : t.terms[static_cast<std::size_t>(piece)]) += term;
      }
    return t;
  }

  // 2D: the x identity and the y identity multiply out into 16 pieces.
  std::array<std::array<GridFunction, 4>, 4> acc{};
  for (auto& row : acc)
    for (auto& a : row) a = GridFunction(grid);
  for (int k = t.k0; k < std::max(k1, t.k0 + 1); ++k) {
    std::map<LP, GridFunction> fx, gx;
    for (LP fl : {LP::P, LP::Q}) {
      fx.emplace(fl, filt(f, fl, k, 1));
      gx.emplace(fl, filt(g, fl, k, 1));
    }
    // y-filtered copies of the x-filtered functions, keyed by (x flavor, l, y flavor).
    using Key = std::tuple<LP, int, LP>;
    std::map<Key, GridFunction> fy, gy;
    auto yf = [&](std::map<Key, GridFunction>& cache, const GridFunction& src, LP xf, int l,
                  LP lf) -> const GridFunction& {
      Key key{xf, l, lf};
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, filt(src, lf, l, 2)).first;
      return it->second;
    };
    for (int px = 0; px < 4; ++px) {
      if (px == 3 ? k != t.k0 : k >= k1) continue;
      auto [ax, bx] = kinds[static_cast<std::size_t>(px)];
      const GridFunction& F = fx.at(ax);
      const GridFunction& G = gx.at(bx);
      for (int py = 0; py < 4; ++py)
        for (int l : scales_of(py)) {
          auto [ay, by] = kinds[static_cast<std::size_t>(py)];
          acc[static_cast<std::size_t>(px)][static_cast<std::size_t>(py)] +=
              yf(fy, F, ax, l, ay) * yf(gy, G, bx, l, by);
        }
    }
  }
  t.remainder = GridFunction(grid);
  for (std::size_t px = 0; px < 4; ++px)
    for (std::size_t py = 0; py < 4; ++py) {
      if (px < 3 && py < 3)
        t.terms.push_back(std::move(acc[px][py]));
      else
        t.remainder += acc[px][py];
    }
  return t;
}

GridFunction classical_paraproduct(const GridFunction& f, const GridFunction& g, int axis) {
  require_same_grid(f, g);
  const SampleGrid& grid = f.grid();
  GridFunction out(grid, f.vector_extents());
  for (int k = coarsest_lp_scale(grid); k <= grid.max_scale(); ++k) {
    GridFunction prod = littlewood_paley(f, k, LpFlavor::P, 0, axis) * littlewood_paley(g, k, LpFlavor::Q, 0, axis);
    out += littlewood_paley(prod, k, LpFlavor::Q, 0, axis);
  }
  return out;
}

GridFunction localized_paraproduct(const ParaproductSpec& spec, const LocalizationSpec& loc, const GridFunction& f,
                                   const GridFunction& g) {
  spec.validate();
  for (const MeasurableSet* s : {&loc.F, &loc.G, &loc.E_tilde})
    if (!(s->grid() == f.grid())) throw ShapeError("localization sets live on another grid");
  ParaproductSpec local;
  local.slots = spec.slots;
  for (std::size_t i = 0; i < spec.family.size(); ++i)
    if (loc.I0.contains(spec.family[i])) {
      local.family.push_back(spec.family[i]);
      local.coefficients.push_back(spec.coefficients[i]);
    }
  return discretized_paraproduct(local, f * loc.F.indicator(), g * loc.G.indicator()) * loc.E_tilde.indicator();
}

GridFunction shifted_paraproduct(long n, const GridFunction& f, const GridFunction& g) {
  require_scalar_1d(f);
  require_same_grid(f, g);
  const SampleGrid& grid = f.grid();
  const std::array<PacketFlavor, 3> slots{PacketFlavor::lacunary, PacketFlavor::lacunary, PacketFlavor::non_lacunary};
  auto fam = full_dyadic_family(grid, slots);
  GridFunction out(grid);
  GridFunction fh = fourier_transform(f), gh = fourier_transform(g);
  int lo = fam.empty() ? 0 : fam.front().scale, hi = fam.empty() ? -1 : fam.back().scale;
  for (int j = lo; j <= hi; ++j) {
    PacketBank lac(grid, j, PacketWindow::of(PacketFlavor::lacunary));
    PacketBank out_bank(grid, j, PacketWindow::of(PacketFlavor::non_lacunary));
    auto a1 = lac.analyze_spectrum(fh);
    auto a2 = lac.analyze_spectrum(gh);
    auto p = static_cast<long>(a1.size());
    double w = 1.0 / std::sqrt(std::ldexp(1.0, -j));
    std::vector<cplx> a(a1.size());
    for (long m = 0; m < p; ++m) {
      auto s = static_cast<std::size_t>(((m + n) % p + p) % p);
      a[static_cast<std::size_t>(m)] = w * a1[s] * a2[s];
    }
    out += out_bank.synthesize(a);
  }
  return out;
}

// ---------------------------------------------------------------- finite-decay paraproduct

namespace {

// Product spectrum of Q_k f . Q_k g sits in |xi| <= 4 * 2^k; the window is 1 there.
constexpr double kAlphaWindow = 8.0;

// Modes up to this index come from Gauss quadrature, higher ones from a DFT.
constexpr int kAlphaQuadratureModes = 512;

double alpha_symbol(double alpha, double v) {  // v = xi / 2^k
  double a = std::abs(v);
  return a == 0.0 ? 0.0 : std::pow(a, alpha) * phi_hat(v / kAlphaWindow);
}

// Composite Gauss-Legendre on [0, b]: uniform pieces plus geometric grading of the first.
template <class F>
double integrate_graded(F&& fn, double b) {
  using Q = boost::math::quadrature::gauss<double, 20>;
  constexpr int pieces = 256;
  double h = b / pieces, total = 0.0;
  for (int i = pieces - 1; i >= 1; --i) total += Q::integrate(fn, i * h, (i + 1) * h);
  double right = h;
  for (int j = 0; j < 60; ++j) {
    total += Q::integrate(fn, right / 2.0, right);
    right /= 2.0;
  }
  return total;
}

double tail_sum_bound(double B, int n_max, double alpha) {
  return 2.0 * B * std::pow(1.0 + n_max, -alpha) / alpha;
}

// w sum_n c_n e^(2 pi i n xi / period) as a symbol on the grid's frequencies. When
// period * L is an integer D the phases depend on n mod D only, so the coefficients
// are folded first and each frequency costs O(D) instead of O(n_max).
std::function<cplx(double)> truncated_series(const std::vector<double>& c, double period, const SampleGrid& grid,
                                             double w) {
  auto n_max = static_cast<long>(c.size() / 2);
  double d = period * grid.period();
  long D = std::lround(d);
  if (D >= 1 && std::abs(d - static_cast<double>(D)) < 1e-9 && D < 2 * n_max + 1) {
    auto bins = std::make_shared<std::vector<double>>(static_cast<std::size_t>(D), 0.0);
    for (long n = -n_max; n <= n_max; ++n) (*bins)[static_cast<std::size_t>(((n % D) + D) % D)] += c[static_cast<std::size_t>(n + n_max)];
    double L = grid.period();
    return [bins, D, L, w](double xi) -> cplx {
      long m = std::lround(xi * L);
      cplx s{};
      for (long r = 0; r < D; ++r)
        s += (*bins)[static_cast<std::size_t>(r)] *
             std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((r * (((m % D) + D) % D)) % D) / static_cast<double>(D));
      return w * s;
    };
  }
  return [&c, n_max, period, w](double xi) -> cplx {
    cplx s{};
    for (long n = -n_max; n <= n_max; ++n)
      s += c[static_cast<std::size_t>(n + n_max)] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(n) * xi / period);
    return w * s;
  };
}

}  // namespace

std::vector<double> alpha_coefficients(double alpha, int n_max, int k) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  // Physical variable at scale k: period T 2^k with T = kAlphaPeriod * 2.
  double unit = std::ldexp(1.0, k);
  double period = 2.0 * kAlphaPeriod * unit;
  std::vector<double> c(2 * static_cast<std::size_t>(n_max) + 1);
  auto put = [&](int n, double v) {
    c[static_cast<std::size_t>(n_max + n)] = v;
    c[static_cast<std::size_t>(n_max - n)] = v;
  };
  int direct = std::min(n_max, kAlphaQuadratureModes);
  for (int n = 0; n <= direct; ++n) {
    auto integrand = [&](double xi) {
      return alpha_symbol(alpha, xi / unit) * std::cos(2.0 * std::numbers::pi * n * xi / period);
    };
    put(n, 2.0 / period * integrate_graded(integrand, kAlphaWindow * unit));
  }
  if (n_max > direct) {
    // High modes from one DFT of symbol samples; aliasing is O((n / M)^(1 + alpha)) relative.
    std::size_t m = 1;
    while (m < 8 * static_cast<std::size_t>(n_max)) m *= 2;
    std::vector<cplx> samples(m);
    for (std::size_t j = 0; j < m; ++j) {
      double v = static_cast<double>(j) / static_cast<double>(m);  // xi / period
      if (v > 0.5) v -= 1.0;
      samples[j] = alpha_symbol(alpha, 2.0 * kAlphaPeriod * v);
    }
    detail::dft_inplace(samples.data(), m, 1, -1);
    for (int n = direct + 1; n <= n_max; ++n) put(n, samples[static_cast<std::size_t>(n)].real() / static_cast<double>(m));
  }
  return c;
}

AlphaParaproduct alpha_paraproduct(double alpha, const GridFunction& f, const GridFunction& g, int n_max,
                                   const AlphaOptions& options) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  require_scalar_1d(f);
  require_same_grid(f, g);
  const SampleGrid& grid = f.grid();

  AlphaParaproduct r;
  r.n_max = n_max;
  r.coefficients = alpha_coefficients(alpha, n_max);
  constexpr int probe = 256;
  auto head = n_max >= probe ? r.coefficients : alpha_coefficients(alpha, probe);
  int hn = static_cast<int>(head.size() / 2);
  for (int n = -probe; n <= probe; ++n)
    r.decay_bound = std::max(r.decay_bound, std::abs(head[static_cast<std::size_t>(n + hn)]) *
                                                std::pow(1.0 + std::abs(n), 1.0 + alpha));
  r.tail_bound = tail_sum_bound(r.decay_bound, n_max, alpha);
  if (options.tolerance && r.tail_bound > *options.tolerance)
    throw DomainError("n_max = " + std::to_string(n_max) + " leaves a multiplier tail bound of " +
                      std::to_string(r.tail_bound) + " above the requested tolerance " +
                      std::to_string(*options.tolerance));

  r.k_lo = coarsest_lp_scale(grid);
  r.k_hi = grid.max_scale();
  r.output = GridFunction(grid);
  r.exact = GridFunction(grid);
  double mass = 0.0;
  for (int k = r.k_lo; k <= r.k_hi; ++k) {
    GridFunction prod = littlewood_paley(f, k, LpFlavor::Q) * littlewood_paley(g, k, LpFlavor::Q);
    double w = options.scale_weights ? std::pow(2.0, k * alpha) : 1.0;
    double unit = std::ldexp(1.0, k);
    double period = 2.0 * kAlphaPeriod * unit;
    auto truncated = SpectralMultiplier::from_symbol(grid, truncated_series(r.coefficients, period, grid, w));
    auto full = SpectralMultiplier::from_symbol(grid, [&](double xi) -> cplx { return w * alpha_symbol(alpha, xi / unit); });
    r.output += apply_multiplier(prod, truncated);
    r.exact += apply_multiplier(prod, full);
    mass += w * l2_norm(prod);
  }
  r.output_error_bound = r.tail_bound * mass;
  return r;
}

int alpha_default_nmax(double alpha, double relative_tail) {
  if (!(alpha > 0.0) || !(relative_tail > 0.0)) throw DomainError("alpha and tail must be positive");
  // Head mass sum_{|n|<=N} (1+|n|)^-(1+alpha) versus the integral bound of the tail.
  double head = 1.0;
  for (int n = 1; n <= 1 << 22; ++n) {
    head += 2.0 * std::pow(1.0 + n, -(1.0 + alpha));
    double tail = 2.0 * std::pow(1.0 + n, -alpha) / alpha;
    if (tail < relative_tail * head) return n;
  }
  throw DomainError("requested tail is unreachable");
}

// ---------------------------------------------------------------- bi-parameter and vector-valued

GridFunction tensor_paraproduct(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  const SampleGrid& grid = f.grid();
  if (grid.dimension() != 2 || !f.is_scalar()) throw ShapeError("tensor paraproduct expects scalar 2D functions");
  GridFunction out(grid);
  for (int k = coarsest_lp_scale(grid); k <= grid.max_scale(); ++k) {
    GridFunction inner = classical_paraproduct(littlewood_paley(f, k, LpFlavor::P, 0, 2),
                                               littlewood_paley(g, k, LpFlavor::Q, 0, 2), 1);
    out += littlewood_paley(inner, k, LpFlavor::Q, 0, 2);
  }
  return out;
}

VectorValuedResult vector_valued_apply(const BilinearOperator& op, const GridFunction& fs, const GridFunction& gs,
                                       const MixedNormSpec& spec_f, const MixedNormSpec& spec_g,
                                       const MixedNormSpec& spec_out) {
  if (!(fs.grid() == gs.grid()) || fs.vector_extents() != gs.vector_extents())
    throw ShapeError("vector axes of the operands disagree");
  std::size_t K = fs.component_count();
  std::size_t pts = fs.grid().point_count();
  GridFunction out(fs.grid(), fs.vector_extents());
  for (std::size_t c = 0; c < K; ++c) {
    GridFunction r = op(fs.component(c), gs.component(c));
    if (!(r.grid() == fs.grid()) || !r.is_scalar()) throw ShapeError("operator changed the grid");
    std::copy(r.samples().begin(), r.samples().end(), out.samples().begin() + static_cast<std::ptrdiff_t>(c * pts));
  }
  VectorValuedResult res;
  res.norm_f = mixed_norm(fs, spec_f);
  res.norm_g = mixed_norm(gs, spec_g);
  res.norm_out = mixed_norm(out, spec_out);
  res.output = std::move(out);
  return res;
}

}  // namespace hatk
