#include <cmath>
#include <numbers>
#include <set>

#include "hatk/analysis.hpp"
#include "hatk/bench.hpp"
#include "hatk/error.hpp"
#include "hatk/operators.hpp"

namespace hatk::bench {

namespace {

using PF = PacketFlavor;

constexpr std::array<PF, 3> kParaSlots{PF::non_lacunary, PF::lacunary, PF::lacunary};

double band_for(std::size_t n) { return static_cast<double>(n) / 16.0; }

SizeFlavor size_flavor(PF f) { return f == PF::lacunary ? SizeFlavor::lacunary : SizeFlavor::non_lacunary; }

GridFunction fn(const SampleGrid& g, const TrialContext& c, std::uint64_t label) {
  return random_band_limited(g, derive_seed(c.seed, {label}), band_for(g.samples()));
}

ParaproductSpec random_phase_spec(std::vector<DyadicInterval> fam, std::uint64_t seed) {
  ParaproductSpec s = ParaproductSpec::unit(std::move(fam));
  SplitMix64 rng(seed);
  for (auto& c : s.coefficients) c = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  return s;
}

DyadicInterval random_I0(const TrialContext& c, int scale = 2) {
  SplitMix64 rng(derive_seed(c.seed, {99}));
  return {scale, static_cast<std::int64_t>(rng.below(std::uint64_t{1} << scale))};
}

MeasurableSet random_set(const SampleGrid& g, const TrialContext& c, std::uint64_t label) {
  SplitMix64 rng(derive_seed(c.seed, {label, 7}));
  std::size_t n = g.samples();
  double cells = static_cast<double>(n / 8 + rng.below(n / 4));
  return random_dyadic_set(g, derive_seed(c.seed, {label}), cells * g.spacing());
}

double tilde_size(const GridFunction& f, const std::vector<DyadicInterval>& fam, const DyadicInterval& I0) {
  return size_tilde(f, fam, I0).value;
}

double chi_norm(const GridFunction& f, const DyadicInterval& I0, double p) {
  return lp_norm(f, p, adapted_bump_samples(f.grid(), {I0, 10}));
}

// Localized paraproduct family and spec on a 1D grid.
struct LocalSetup {
  SampleGrid grid;
  DyadicInterval I0;
  ParaproductSpec spec;
};

LocalSetup local_setup(const TrialContext& c) {
  SampleGrid g(c.samples);
  DyadicInterval I0 = random_I0(c);
  auto fam = localize_collection(full_dyadic_family(g, kParaSlots), I0);
  return {g, I0, random_phase_spec(std::move(fam), derive_seed(c.seed, {50}))};
}

GridFunction stacked(const SampleGrid& g, const TrialContext& c, std::uint64_t label, std::vector<std::size_t> ext) {
  GridFunction out(g, ext);
  std::size_t pts = g.point_count();
  for (std::size_t k = 0; k < out.component_count(); ++k) {
    GridFunction comp = random_band_limited(g, derive_seed(c.seed, {label, k}), band_for(g.samples()));
    std::copy(comp.samples().begin(), comp.samples().end(), out.samples().begin() + static_cast<std::ptrdiff_t>(k * pts));
  }
  return out;
}

MixedNormSpec spec_of(std::initializer_list<const char*> r) {
  std::vector<Exponent> e;
  for (const char* s : r) e.push_back(Exponent::parse(s));
  return MixedNormSpec(std::move(e));
}

std::vector<InequalityTarget> build_registry() {
  std::vector<InequalityTarget> t;
  const std::vector<double> shifts{1, 2, 4, 8, 16, 32, 64};
  const std::vector<double> ks{1, 2, 4, 8, 16};

  t.push_back({"trilinear-size-energy",
               "|Lambda(f,g,h)| <= C prod_j size_j^(2/3) energy_j^(1/3) over the full dyadic family",
               "theta=1/3,1/3,1/3", "", {0.0}, false, {50.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 auto fam = full_dyadic_family(g, kParaSlots);
                 auto spec = random_phase_spec(fam, derive_seed(c.seed, {50}));
                 std::array<GridFunction, 3> fs{fn(g, c, 1), fn(g, c, 2), fn(g, c, 3)};
                 double rhs = 1.0;
                 for (std::size_t j = 0; j < 3; ++j) {
                   double s = size(fs[j], fam, size_flavor(kParaSlots[j])).value;
                   double e = energy(fs[j], fam, kParaSlots[j]).value;
                   rhs *= std::pow(s, 2.0 / 3.0) * std::pow(e, 1.0 / 3.0);
                 }
                 return TrialOutcome{std::abs(trilinear_form(spec, fs[0], fs[1], fs[2])), rhs};
               }});

  t.push_back({"localized-trilinear",
               "|Lambda_I0(f,g,h)| <= C prod_j size~_I0(f_j)^(2/3) ||f_j chi~_I0||_1^(1/3)", "theta=1/3,1/3,1/3", "",
               {0.0}, false, {50.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 auto L = local_setup(c);
                 std::array<GridFunction, 3> fs{fn(L.grid, c, 1), fn(L.grid, c, 2), fn(L.grid, c, 3)};
                 double rhs = 1.0;
                 for (const auto& f : fs)
                   rhs *= std::pow(tilde_size(f, L.spec.family, L.I0), 2.0 / 3.0) *
                          std::pow(chi_norm(f, L.I0, 1.0), 1.0 / 3.0);
                 return TrialOutcome{std::abs(trilinear_form(L.spec, fs[0], fs[1], fs[2])), rhs};
               }});

  t.push_back({"localized-l1",
               "||Pi_I0(f,g) 1_E||_1 <= C size~(f) size~(g) size~(1_E) |I0|", "", "", {0.0}, false,
               {50.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 auto L = local_setup(c);
                 GridFunction f = fn(L.grid, c, 1), g = fn(L.grid, c, 2);
                 MeasurableSet E = random_set(L.grid, c, 3);
                 double lhs = lp_norm(discretized_paraproduct(L.spec, f, g) * E.indicator(), 1.0);
                 double rhs = tilde_size(f, L.spec.family, L.I0) * tilde_size(g, L.spec.family, L.I0) *
                              tilde_size(E.indicator(), L.spec.family, L.I0) * L.I0.length();
                 return TrialOutcome{lhs, rhs};
               }});

  t.push_back({"localized-sub-unit",
               "||Pi_I0(f,g) 1_E||_tau^tau <= C size~(f)^tau size~(g)^tau size~(1_E)^(1-eps) |I0|, tau = 3/4",
               "tau=3/4", "", {0.0}, true, {50.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 auto L = local_setup(c);
                 const double tau = 0.75;
                 GridFunction f = fn(L.grid, c, 1), g = fn(L.grid, c, 2);
                 MeasurableSet E = random_set(L.grid, c, 3);
                 double lhs = std::pow(lp_norm(discretized_paraproduct(L.spec, f, g) * E.indicator(), tau), tau);
                 double rhs = std::pow(tilde_size(f, L.spec.family, L.I0), tau) *
                              std::pow(tilde_size(g, L.spec.family, L.I0), tau) *
                              std::pow(tilde_size(E.indicator(), L.spec.family, L.I0), 1.0 - c.epsilon) *
                              L.I0.length();
                 return TrialOutcome{lhs, rhs};
               }});

  t.push_back({"localization",
               "||Pi_I0^{F,G,E}(f,g)||_r <= C size~(1_F)^(1/r1'-eps) size~(1_G)^(1/r2'-eps) size~(1_E)^(1/r-eps) "
               "||f chi~||_r1 ||g chi~||_r2",
               "r1=3/2 r2=3/2 r=3/4", "", {0.0}, true, {50.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 auto L = local_setup(c);
                 const double r1 = 1.5, r2 = 1.5, r = 0.75;
                 GridFunction f = fn(L.grid, c, 1), g = fn(L.grid, c, 2);
                 LocalizationSpec loc{L.I0, random_set(L.grid, c, 4), random_set(L.grid, c, 5), random_set(L.grid, c, 6)};
                 double lhs = lp_norm(localized_paraproduct(L.spec, loc, f, g), r);
                 double e = c.epsilon;
                 double rhs = std::pow(tilde_size(loc.F.indicator(), L.spec.family, L.I0), 1.0 - 1.0 / r1 - e) *
                              std::pow(tilde_size(loc.G.indicator(), L.spec.family, L.I0), 1.0 - 1.0 / r2 - e) *
                              std::pow(tilde_size(loc.E_tilde.indicator(), L.spec.family, L.I0), 1.0 / r - e) *
                              chi_norm(f, L.I0, r1) * chi_norm(g, L.I0, r2);
                 return TrialOutcome{lhs, rhs};
               }});

  t.push_back({"vector-valued-paraproduct",
               "||Pi(f_k, g_k)||_{L^s(l^r)} <= C ||f||_{L^p(l^r1)} ||g||_{L^q(l^r2)}",
               "p=4 q=4 s=2 r1=3/2 r2=3/2 r=3/4", "K", ks, false, {50.0, GrowthPolicy::none, 0.1},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 auto K = static_cast<std::size_t>(c.param);
                 auto spec = ParaproductSpec::unit(full_dyadic_family(g, kParaSlots));
                 auto op = [&](const GridFunction& a, const GridFunction& b) { return discretized_paraproduct(spec, a, b); };
                 auto r = vector_valued_apply(op, stacked(g, c, 1, {K}), stacked(g, c, 2, {K}), spec_of({"4", "3/2"}),
                                              spec_of({"4", "3/2"}), spec_of({"2", "3/4"}));
                 return TrialOutcome{r.norm_out, r.norm_f * r.norm_g};
               }});

  t.push_back({"vector-valued-depth2",
               "depth-2 mixed norms: ||Pi||_{L^s(l^r(l^r'))} <= C ||f||_{L^p(l^inf(l^r1))} ||g||_{L^q(l^2(l^r2))}",
               "p=4 q=4 s=2 R1=(inf,3/2) R2=(2,3/2) R=(2,3/4)", "K", ks, false, {50.0, GrowthPolicy::bounded, 0.1},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 auto K = static_cast<std::size_t>(c.param);
                 auto spec = ParaproductSpec::unit(full_dyadic_family(g, kParaSlots));
                 auto op = [&](const GridFunction& a, const GridFunction& b) { return discretized_paraproduct(spec, a, b); };
                 auto r = vector_valued_apply(op, stacked(g, c, 1, {K, 2}), stacked(g, c, 2, {K, 2}),
                                              spec_of({"4", "inf", "3/2"}), spec_of({"4", "2", "3/2"}),
                                              spec_of({"2", "2", "3/4"}));
                 return TrialOutcome{r.norm_out, r.norm_f * r.norm_g};
               }});

  t.push_back({"shifted-paraproduct", "||Pi_n(f,g)||_2 <= C log^2(1+|n|) ||f||_4 ||g||_4", "p=4 q=4 s=2", "n",
               shifts, false, {50.0, GrowthPolicy::polylog, 2.5},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 GridFunction f = fn(g, c, 1), h = fn(g, c, 2);
                 return TrialOutcome{l2_norm(shifted_paraproduct(static_cast<long>(c.param), f, h)),
                                     lp_norm(f, 4.0) * lp_norm(h, 4.0)};
               }});

  t.push_back({"shifted-maximal", "||M^n f||_2 <= C log(1+|n|) ||f||_2", "p=2", "n", shifts, false,
               {50.0, GrowthPolicy::polylog, 2.5},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 GridFunction f = random_bump_train(g, derive_seed(c.seed, {1}), 8);
                 return TrialOutcome{l2_norm(maximal(f, static_cast<long>(c.param))), l2_norm(f)};
               }});

  t.push_back({"shifted-square", "||S^n f||_2 <= C log(1+|n|) ||f||_2", "p=2", "n", shifts, false,
               {50.0, GrowthPolicy::polylog, 2.5},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 GridFunction f = random_bump_train(g, derive_seed(c.seed, {1}), 8);
                 return TrialOutcome{l2_norm(shifted_square(f, static_cast<long>(c.param))), l2_norm(f)};
               }});

  t.push_back({"classical-paraproduct", "||sum_k Q_k(P_k f Q_k g)||_2 <= C ||f||_4 ||g||_4", "p=4 q=4 s=2", "",
               {0.0}, false, {50.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 GridFunction f = fn(g, c, 1), h = fn(g, c, 2);
                 return TrialOutcome{l2_norm(classical_paraproduct(f, h)), lp_norm(f, 4.0) * lp_norm(h, 4.0)};
               }});

  t.push_back({"bht-local-l2", "||BHT_P(f,g)||_1 <= C ||f||_2 ||g||_2 for rank-one tritiles",
               "p=2 q=2 s=1", "frequencies", {1, 4, 16}, false, {50.0, GrowthPolicy::bounded, 0.15},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 auto freqs = static_cast<std::int64_t>(c.param);
                 BHTModelSpec spec{build_rank_one_tiles(g, 1, 3, 0, freqs - 1), 0.9};
                 double band = std::min(static_cast<double>(c.samples) / 2.5, 8.0 * (static_cast<double>(freqs) + 3.0));
                 GridFunction f = random_band_limited(g, derive_seed(c.seed, {1}), band);
                 GridFunction h = random_band_limited(g, derive_seed(c.seed, {2}), band);
                 return TrialOutcome{lp_norm(bht_model(spec, f, h), 1.0), l2_norm(f) * l2_norm(h)};
               }});

  t.push_back({"bht-vector-valued",
               "||BHT_P(f_k, g_k)||_{L^s(l^r)} <= C ||f||_{L^p(l^r1)} ||g||_{L^q(l^r2)}",
               "p=4 q=4 s=2 r1=2 r2=2 r=1", "K", ks, false, {50.0, GrowthPolicy::bounded, 0.1},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 auto K = static_cast<std::size_t>(c.param);
                 BHTModelSpec spec{build_rank_one_tiles(g, 1, 3, 0, 3), 0.9};
                 auto op = [&](const GridFunction& a, const GridFunction& b) { return bht_model(spec, a, b); };
                 auto r = vector_valued_apply(op, stacked(g, c, 1, {K}), stacked(g, c, 2, {K}), spec_of({"4", "2"}),
                                              spec_of({"4", "2"}), spec_of({"2", "1"}));
                 return TrialOutcome{r.norm_out, r.norm_f * r.norm_g};
               }});

  t.push_back({"tensor-mixed-norm",
               "||Pi (x) Pi(f,g)||_{L^s1_x L^s2_y} <= C ||f||_{L^p1 L^p2} ||g||_{L^q1 L^q2}",
               "p1=4 p2=4 q1=4 q2=4 s1=2 s2=2", "", {0.0}, false, {50.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples2d, 1.0, 2);
                 GridFunction f = random_band_limited(g, derive_seed(c.seed, {1}), c.samples2d / 8.0);
                 GridFunction h = random_band_limited(g, derive_seed(c.seed, {2}), c.samples2d / 8.0);
                 return TrialOutcome{mixed_norm(tensor_paraproduct(f, h), spec_of({"2", "2"})),
                                     mixed_norm(f, spec_of({"4", "4"})) * mixed_norm(h, spec_of({"4", "4"}))};
               }});

  t.push_back({"leibniz",
               "||D1^a D2^b (fg)||_{L^s1 L^s2} <= C (sum of the four derivative splittings)",
               "alpha=1 beta=1 p=(2,2) q=(2,2) s=(1,1)", "", {0.0}, false, {50.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples2d, 1.0, 2);
                 GridFunction f = random_band_limited(g, derive_seed(c.seed, {1}), c.samples2d / 8.0, true);
                 GridFunction h = random_band_limited(g, derive_seed(c.seed, {2}), c.samples2d / 8.0, true);
                 MixedPair two{Exponent::of(2), Exponent::of(2)};
                 auto s = leibniz_sides(1.0, 1.0, LeibnizExponents::uniform(two, two), f, h);
                 return TrialOutcome{s.lhs, s.rhs_terms[0] + s.rhs_terms[1] + s.rhs_terms[2] + s.rhs_terms[3]};
               }});

  t.push_back({"size-by-average", "size(F) <= C sup_I |I|^-1 int |F| chi~_I (flavor 0 non-lacunary, 1 lacunary)",
               "M=10", "flavor", {0, 1}, false, {4.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 PF fl = c.param > 0.5 ? PF::lacunary : PF::non_lacunary;
                 auto fam = full_dyadic_family(g, {fl, fl, fl});
                 GridFunction F = random_bump_train(g, derive_seed(c.seed, {1}), 8);
                 return TrialOutcome{size(F, fam, size_flavor(fl)).value, size(F, fam, SizeFlavor::modified).value};
               }});

  t.push_back({"energy-by-l1", "energy(F) <= C ||F||_1 (flavor 0 non-lacunary, 1 lacunary)", "", "flavor", {0, 1},
               false, {4.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 PF fl = c.param > 0.5 ? PF::lacunary : PF::non_lacunary;
                 auto fam = full_dyadic_family(g, {fl, fl, fl});
                 GridFunction F = random_bump_train(g, derive_seed(c.seed, {1}), 8);
                 return TrialOutcome{energy(F, fam, fl).value, lp_norm(F, 1.0)};
               }});

  t.push_back({"dualization",
               "sup_E ||f 1_Etilde||_r / |E|^(1/r-1/p) against ||f||_{p,inf}, r = 1/2, p = 1, C = 4", "r=1/2 p=1",
               "", {0.0}, false, {4.0, GrowthPolicy::ignore, 0.0},
               [](const TrialContext& c) {
                 SampleGrid g(c.samples);
                 GridFunction f = random_step_function(g, derive_seed(c.seed, {1}), 6);
                 double weak = weak_lp_norm(f, 1.0);
                 double best = 0.0;
                 std::set<double> levels;
                 for (const auto& z : f.samples()) levels.insert(std::abs(z));
                 for (double v : levels) {
                   if (v <= 0.0) continue;
                   auto E = MeasurableSet::from_predicate(g, [&](std::size_t i) { return std::abs(f[i]) >= v; });
                   best = std::max(best, dualize_weak_via_Lr(f, E, 0.5, 1.0, 4.0).ratio);
                 }
                 for (std::uint64_t k = 0; k < 8; ++k) {
                   MeasurableSet E = random_set(g, c, 10 + k);
                   best = std::max(best, dualize_weak_via_Lr(f, E, 0.5, 1.0, 4.0).ratio);
                 }
                 return TrialOutcome{best, weak};
               }});

  return t;
}

}  // namespace

const std::vector<InequalityTarget>& target_registry() {
  static const std::vector<InequalityTarget> registry = build_registry();
  return registry;
}

const InequalityTarget& find_target(const std::string& id) {
  for (const auto& t : target_registry())
    if (t.id == id) return t;
  throw DomainError("unknown target '" + id + "'");
}

}  // namespace hatk::bench
