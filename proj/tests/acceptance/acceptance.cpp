// One PASS/FAIL line per acceptance criterion; tolerances are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <thread>

#include "hatk/analysis.hpp"
#include "hatk/bench.hpp"
#include "hatk/error.hpp"
#include "hatk/operators.hpp"

using namespace hatk;
using namespace hatk::bench;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_l2(const GridFunction& a, const GridFunction& b) { return l2_norm(a - b) / l2_norm(b); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

TargetSummary campaign(const std::string& target, int trials, const std::string& extra = "") {
  auto c = ExperimentConfig::parse("seed = 20240601\ngrid = 1024\ntrials = " + std::to_string(trials) +
                                   "\ntargets = " + target + "\n" + extra);
  return run_campaign(c).targets.at(0);
}

// 1. Telescoping identity.
Outcome telescoping() {
  SampleGrid g1(4096);
  auto f = random_band_limited(g1, 1, 1000.0), h = random_band_limited(g1, 2, 900.0);
  auto t = telescoping_decomposition(f, h);
  GridFunction sum = t.remainder;
  for (const auto& x : t.terms) sum += x;
  double r1 = rel_l2(sum, f * h);

  SampleGrid g2(256, 1.0, 2);
  auto F = random_band_limited(g2, 3, 60.0), H = random_band_limited(g2, 4, 60.0);
  auto T = telescoping_decomposition(F, H);
  GridFunction sum2 = T.remainder;
  for (const auto& x : T.terms) sum2 += x;
  double r2 = rel_l2(sum2, F * H);
  bool ok = r1 <= 1e-10 && r2 <= 1e-9 && t.terms.size() == 3 && T.terms.size() == 9;
  return {ok, "1D residual " + fmt("%.2e", r1) + " (<= 1e-10), 2D residual " + fmt("%.2e", r2) + " (<= 1e-9)"};
}

// 2. Dualization sandwich, r = 1/2, p = 1, C = 4.
Outcome dualization() {
  SampleGrid g(1024);
  double worst_hi = 0.0, worst_lo = 1e300;
  int minor = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    GridFunction f = random_step_function(g, derive_seed(2, {s}), 6);
    double weak = weak_lp_norm(f, 1.0);
    std::vector<MeasurableSet> sets;
    std::set<double> levels;
    for (const auto& z : f.samples()) levels.insert(std::abs(z));
    for (double v : levels)
      sets.push_back(MeasurableSet::from_predicate(g, [&](std::size_t i) { return std::abs(f[i]) >= v; }));
    for (std::uint64_t k = 0; k < 16; ++k)
      sets.push_back(random_dyadic_set(g, derive_seed(3, {s, k}), double(16 + 32 * k) / 1024.0));
    double best = 0.0;
    for (const auto& E : sets) {
      try {
        best = std::max(best, dualize_weak_via_Lr(f, E, 0.5, 1.0, 4.0).ratio);
      } catch (const MajorSubsetError&) {
        ++minor;
      }
    }
    worst_hi = std::max(worst_hi, best / weak);
    worst_lo = std::min(worst_lo, best / weak);
  }
  bool ok = minor == 0 && worst_hi <= 4.0 && worst_lo >= 0.25;
  return {ok, "sup/weak in [" + fmt("%.3f", worst_lo) + ", " + fmt("%.3f", worst_hi) + "] (within [1/4, 4]), " +
                  std::to_string(minor) + " non-major subsets"};
}

// 3. Stopping-time invariants, with an ancestor-enumeration oracle for the selections.
double direct_average(const GridFunction& f, const DyadicInterval& I, int M = 10) {
  const auto& g = f.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.samples(); ++i) {
    double d = periodic_interval_distance(I, g.coordinate(i) + 0.5 * g.spacing(), g.period()) / I.length();
    s += std::abs(f[i]) * std::pow(1 + d, -M);
  }
  return s * g.spacing() / I.length();
}

std::vector<DyadicInterval> ancestors(DyadicInterval I, int top_scale) {
  std::vector<DyadicInterval> out;
  for (; I.scale >= top_scale; I = I.parent()) out.push_back(I);
  return out;
}

// Every member goes to the first level any ancestor's average brackets, owned by the
// coarsest ancestor at that level. Averages within 1e-9 of a power of two make the bracket
// depend on rounding; members whose decision touches one are counted in `ties` and skipped.
bool near_power_of_two(double a) {
  double l = std::log2(a);
  return std::abs(l - std::round(l)) < 1e-9;
}

int stopping_oracle_mismatches(const StoppingForest& forest, const std::array<const GridFunction*, 3>& sets,
                               int& checked, int& ties) {
  int bad = 0;
  for (const auto& [d, stock] : forest.buckets)
    for (int j = 0; j < 3; ++j) {
      std::map<DyadicInterval, double> avg;
      for (const auto& I : stock)
        for (const auto& J : ancestors(I, forest.I0.scale))
          if (!avg.count(J)) avg[J] = direct_average(*sets[j], J);
      double top = 0.0;
      for (const auto& [J, a] : avg) top = std::max(top, a);
      int n0 = int(std::floor(-std::log2(top)));
      while (std::ldexp(1.0, -n0) < top) --n0;
      for (const auto& I : stock) {
        bool tie = near_power_of_two(top);
        for (const auto& J : ancestors(I, forest.I0.scale)) tie = tie || near_power_of_two(avg[J]);
        if (tie) {
          ++ties;
          continue;
        }
        ++checked;
        int level = std::numeric_limits<int>::max();
        DyadicInterval owner;
        for (const auto& J : ancestors(I, forest.I0.scale)) {
          int n = std::max(n0, int(std::ceil(-std::log2(avg[J]) - 1.0)));
          if (n < level || (n == level && J.scale < owner.scale)) {
            level = n;
            owner = J;
          }
        }
        bool found = false;
        for (const auto& sel : forest.selections)
          if (sel.d == d && sel.set == j + 1 && std::find(sel.members.begin(), sel.members.end(), I) != sel.members.end())
            found = sel.level == level && sel.interval == owner;
        bad += !found;
      }
    }
  return bad;
}

Outcome stopping() {
  SampleGrid g(256);
  int failures = 0, oracle_bad = 0, checked = 0, ties = 0, exhaustive = 0, configs = 0, minor = 0;
  double achieved_C = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    SplitMix64 rng(derive_seed(4, {s}));
    DyadicInterval I0 = rng.below(2) ? DyadicInterval{0, 0} : DyadicInterval{1, std::int64_t(rng.below(2))};
    int depth = 1 + int(rng.below(5));
    std::vector<DyadicInterval> fam;
    for (const auto& I : dyadic_subintervals(I0, depth))
      if (I.scale >= 1 && rng.uniform() < 0.6) fam.push_back(I);
    if (fam.empty()) fam.push_back({I0.scale + 1, 2 * I0.position});
    // Unions of runs with arbitrary sample endpoints, so averages rarely sit on powers of two.
    auto random_runs = [&](std::uint64_t k) {
      SplitMix64 r(derive_seed(5, {s, k}));
      std::vector<char> in(g.samples(), 0);
      for (int run = 0, runs = 1 + int(r.below(4)); run < runs; ++run) {
        std::size_t a = r.below(g.samples()), len = 1 + r.below(g.samples() / 3);
        for (std::size_t i = 0; i < len; ++i) in[(a + i) % g.samples()] = 1;
      }
      return MeasurableSet::from_predicate(g, [&](std::size_t i) { return in[i] != 0; });
    };
    auto E1 = random_runs(1), E2 = random_runs(2), E3 = random_runs(3);
    StoppingForest forest;
    try {
      forest = stopping_decompose(fam, E1, E2, E3, I0, 8.0);
    } catch (const MajorSubsetError&) {
      ++minor;
      continue;
    }
    ++configs;
    auto chi0 = adapted_bump_samples(g, {I0, 10});
    auto ex = exceptional_set(E3, {{E1.indicator(), chi0}, {E2.indicator(), chi0}}, 8.0);
    std::array<const GridFunction*, 3> sets{&E1.indicator(), &E2.indicator(), &ex.e_tilde.indicator()};

    // (1) exact partition of the family into cells.
    std::multiset<DyadicInterval> in(fam.begin(), fam.end()), out;
    for (const auto& c : forest.cells) out.insert(c.members.begin(), c.members.end());
    failures += in != out;
    // (2) disjointness per (d, set, level); (3) brackets; (4) measure bound.
    std::map<std::tuple<int, int, int>, double> length;
    for (std::size_t a = 0; a < forest.selections.size(); ++a) {
      const auto& x = forest.selections[a];
      double avg = direct_average(*sets[std::size_t(x.set - 1)], x.interval);
      if (avg < std::ldexp(1.0, -x.level - 1) * (1 - 1e-9) || avg > std::ldexp(1.0, -x.level) * (1 + 1e-9)) ++failures;
      for (const auto& I : x.members)
        if (direct_average(*sets[std::size_t(x.set - 1)], I) > std::ldexp(2.0, -x.level) * (1 + 1e-9)) ++failures;
      length[{x.d, x.set, x.level}] += x.interval.length();
      for (std::size_t b = a + 1; b < forest.selections.size(); ++b) {
        const auto& y = forest.selections[b];
        if (x.d == y.d && x.set == y.set && x.level == y.level && !x.interval.disjoint(y.interval)) ++failures;
      }
    }
    for (const auto& [key, len] : length) {
      double mass = forest.mass[std::get<1>(key) - 1];
      achieved_C = std::max(achieved_C, len / (std::ldexp(1.0, std::get<2>(key)) * mass));
    }
    oracle_bad += stopping_oracle_mismatches(forest, sets, checked, ties);
    exhaustive += depth <= 3;
  }
  bool ok = failures == 0 && oracle_bad == 0 && checked > 10 * ties && achieved_C <= 8.0 && minor == 0 && exhaustive > 0;
  return {ok, std::to_string(configs) + " configurations, " + std::to_string(failures) + " invariant failures, " +
                  std::to_string(oracle_bad) + " oracle mismatches in " + std::to_string(checked) + " checks (" +
                  std::to_string(ties) + " power-of-two ties skipped, " + std::to_string(exhaustive) +
                  " configurations at depth <= 3), achieved C " + fmt("%.3f", achieved_C) + " (<= 8), " + std::to_string(minor) +
                  " non-major"};
}

// 4. Size and energy bounds, and far-support energy decay.
Outcome size_energy() {
  auto s = campaign("size-by-average", 50, "cap.size-by-average = 4\n");
  auto e = campaign("energy-by-l1", 50, "cap.energy-by-l1 = 4\n");
  SampleGrid g(1024);
  DyadicInterval I0{4, 0};
  bool monotone = true;
  std::string decay;
  for (auto flavor : {PacketFlavor::non_lacunary, PacketFlavor::lacunary}) {
    auto fam = localize_collection(full_dyadic_family(g, {flavor, flavor, flavor}), I0);
    // Energy is a sup over dyadic levels, so consecutive values can tie; require no increase
    // and a strict drop across the sweep.
    double prev = 1e300, first = 0.0;
    for (int k = 0; k <= 3; ++k) {
      // Indicator of an interval of length |I0| at distance 2^k |I0| to the right of I0.
      double left = I0.length() * (1.0 + std::ldexp(1.0, k));
      auto F = MeasurableSet::from_predicate(g, [&](std::size_t i) {
                 double x = g.coordinate(i);
                 return x >= left && x < left + I0.length();
               }).indicator();
      double en = energy(F, fam, flavor).value;
      if (k == 0) first = en;
      monotone = monotone && en <= prev && (k < 3 || en < first);
      prev = en;
      decay += (decay.empty() ? "" : " ") + fmt("%.3g", en);
    }
  }
  bool ok = s.passed && e.passed && monotone;
  return {ok, "size C " + fmt("%.3f", s.aggregate.max_ratio) + ", energy C " + fmt("%.3f", e.aggregate.max_ratio) +
                  " (<= 4, " + std::to_string(s.aggregate.rows + e.aggregate.rows) + " trials), far energies " + decay +
                  (monotone ? " non-increasing" : " NOT decaying")};
}

// 5. Vector-valued paraproduct, K in {1, ..., 16}, 40 seeds.
Outcome vector_valued() {
  auto t = campaign("vector-valued-paraproduct", 40);
  bool ok = t.passed && std::abs(t.aggregate.growth) <= 0.1;
  return {ok, "max ratio " + fmt("%.3f", t.aggregate.max_ratio) + " (cap " + fmt("%.0f", t.policy.cap) +
                  "), slope " + fmt("%+.4f", t.aggregate.growth) + " (within +-0.1), " +
                  std::to_string(t.aggregate.rows) + " rows" + (t.error.empty() ? "" : ", error: " + t.error)};
}

// 6. Alpha coefficient decay, scale independence.
Outcome alpha_coefficients_check() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.25, 0.5, 1.0}) {
    auto base = alpha_coefficients(alpha, 256, 0);
    double bound = 0.0, drift = 0.0;
    for (int n = -256; n <= 256; ++n)
      bound = std::max(bound, std::abs(base[std::size_t(n + 256)]) * std::pow(1.0 + std::abs(n), 1.0 + alpha));
    for (int k : {-3, 2, 6}) {
      auto other = alpha_coefficients(alpha, 256, k);
      for (std::size_t i = 0; i < base.size(); ++i) drift = std::max(drift, std::abs(base[i] - other[i]));
    }
    ok = ok && std::isfinite(bound) && drift <= 1e-10;
    detail += (detail.empty() ? "" : "; ") + std::string("alpha ") + fmt("%.2f", alpha) + ": bound " +
              fmt("%.4f", bound) + ", scale drift " + fmt("%.1e", drift);
  }
  return {ok, detail};
}

// 7. Shifted operators, log^kappa growth.
Outcome shifted() {
  bool ok = true;
  std::string detail;
  for (const char* id : {"shifted-maximal", "shifted-square", "shifted-paraproduct"}) {
    auto t = campaign(id, 8);
    ok = ok && t.passed && t.aggregate.growth <= 2.5;
    detail += (detail.empty() ? "" : "; ") + std::string(id) + " kappa " + fmt("%.3f", t.aggregate.growth) +
              " max " + fmt("%.3f", t.aggregate.max_ratio);
  }
  return {ok, detail + " (kappa <= 2.5)"};
}

// 8. BHT multiplier: modulus pi, sign flip, zeros.
GridFunction bht_window(const SampleGrid& g, double centre, double half, double freq) {
  return GridFunction::from_function(g, [=](double x) -> cplx {
    double u = (x - centre) / half;
    double w = std::abs(u) < 1.0 ? std::pow(std::cos(0.5 * kPi * u), 4) : 0.0;
    return std::polar(w, 2 * kPi * freq * x);
  });
}

Outcome bht_multiplier() {
  SampleGrid g(4096, 64.0);
  const std::size_t c = 2048;
  double worst = 0.0;
  bool signs = true;
  for (auto [a, b] : {std::pair{3.0, 5.0}, std::pair{5.0, 3.0}, std::pair{-2.0, 2.0}, std::pair{2.0, -2.0}}) {
    auto out = bht_kernel(bht_window(g, 32.0, 7.5, a), bht_window(g, 32.0, 7.5, b)).output[c];
    cplx unit = std::polar(1.0, 2 * kPi * (a + b) * g.coordinate(c));
    cplx q = out / unit;  // expect i pi sgn(b - a)
    worst = std::max(worst, std::abs(std::abs(q) - kPi) / kPi);
    signs = signs && (q.imag() > 0) == (b > a) && std::abs(q.real()) < 0.03 * kPi;
  }
  double diag = std::abs(bht_kernel(bht_window(g, 32.0, 7.5, 4.0), bht_window(g, 32.0, 7.5, 4.0)).output[c]);
  double even = std::abs(bht_kernel(bht_window(g, 32.0, 7.5, 0.0), bht_window(g, 32.0, 5.0, 0.0)).output[c]);
  bool ok = worst <= 0.03 && signs && diag <= 1e-8 && even <= 1e-8;
  return {ok, "modulus error " + fmt("%.2e", worst) + " (<= 3%), sign flip " + (signs ? "ok" : "WRONG") +
                  ", a = b centre " + fmt("%.1e", diag) + ", even centre " + fmt("%.1e", even) + " (<= 1e-8)"};
}

// 9. BHT local L2.
Outcome bht_local() {
  auto t = campaign("bht-local-l2", 100);
  std::string by;
  for (const auto& [p, m] : t.aggregate.max_by_param) by += " " + fmt("%.0f", p) + ":" + fmt("%.3f", m);
  return {t.passed, "max ratio " + fmt("%.3f", t.aggregate.max_ratio) + ", slope " + fmt("%+.4f", t.aggregate.growth) +
                        " (<= " + fmt("%.2f", t.policy.tolerance) + "), by frequency count" + by +
                        (t.error.empty() ? "" : ", error: " + t.error)};
}

// 10. Range calculator.
bool theta_oracle(const std::array<Rational, 3>& a, const std::array<Rational, 3>& x) {
  Rational sum(0);
  for (std::size_t i = 0; i < 3; ++i) {
    Rational l = std::max(2 * a[i] - 1, 2 * x[i] - 1);
    if (!(l < 1)) return false;
    sum += std::max(l, Rational(0));
  }
  return sum < 1;
}

Outcome range() {
  const Rational step(1, 24), one(1);
  long total = 0, bad = 0;
  for (int i1 = 1; i1 < 24; ++i1)
    for (int i2 = 1; i2 < 24; ++i2)
      for (int j1 = 0; j1 < 24; ++j1)
        for (int j2 = 0; j2 < 24; ++j2) {
          if (j1 + j2 == 0) continue;
          RangeQuery q;
          q.p = Exponent::from_reciprocal(j1 * step);
          q.q = Exponent::from_reciprocal(j2 * step);
          q.s = Exponent::from_reciprocal((j1 + j2) * step);
          q.levels.push_back({Exponent::from_reciprocal(i1 * step), Exponent::from_reciprocal(i2 * step),
                              Exponent::from_reciprocal((i1 + i2) * step)});
          ++total;
          try {
            bool m = bht_range_membership(q).member;
            bad += m != theta_oracle({i1 * step, i2 * step, one - (i1 + i2) * step},
                                     {j1 * step, j2 * step, one - (j1 + j2) * step});
          } catch (const ConsistencyError&) {
            ++bad;
          }
        }
  auto e1 = bht_range_membership(RangeQuery::parse("p=2 q=2 s=1 r1=2 r2=2 r=1"));
  auto e2 = bht_range_membership(RangeQuery::parse("p=4 q=2 s=4/3 r1=4/3 r2=4 r=1"));
  auto e3 = bht_range_membership(RangeQuery::parse("p=8 q=5/4 r1=4/3 r2=4 r=1"));
  bool examples = e1.member && e1.levels[0].case_label == "i" && e2.member && e2.levels[0].case_label == "ii" &&
                  !e3.member;
  return {bad == 0 && examples, std::to_string(total) + " grid queries, " + std::to_string(bad) +
                                    " disagreements; examples " + (examples ? "reproduce" : "DIFFER")};
}

// 11. Leibniz rule.
Outcome leibniz() {
  const std::size_t n = 256;
  SampleGrid g(n, 1.0, 2);
  MixedPair two{Exponent::of(2), Exponent::of(2)};
  auto exps = LeibnizExponents::uniform(two, two);
  auto dilate = [&](const GridFunction& f, std::size_t m) {  // f(m x, y)
    GridFunction out(g);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.at(i, j) = f.at((m * i) % n, j);
    return out;
  };
  double max_ratio = 0.0, drift = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto f = random_band_limited(g, derive_seed(11, {s, 1}), 6.0, true);
    auto h = random_band_limited(g, derive_seed(11, {s, 2}), 6.0, true);
    double base = leibniz_sides(1.0, 1.0, exps, f, h).ratio;
    max_ratio = std::max(max_ratio, base);
    for (std::size_t m : {2, 4, 8}) {
      double r = leibniz_sides(1.0, 1.0, exps, dilate(f, m), dilate(h, m)).ratio;
      drift = std::max(drift, std::abs(r / base - 1.0));
    }
  }
  // s2 = 1/2 sits on the excluded boundary max(1/(1+alpha), 1/(1+beta)).
  bool rejected = false;
  MixedPair edge{Exponent::of(2), Exponent::of(1)};
  try {
    check_leibniz_exponents(1.0, 1.0, LeibnizExponents::uniform(edge, edge));
  } catch (const DomainError& e) {
    rejected = std::string(e.what()).find("s2 > max") != std::string::npos;
  }
  bool ok = std::isfinite(max_ratio) && max_ratio <= 50.0 && drift <= 0.25 && rejected;
  return {ok, "max ratio " + fmt("%.4f", max_ratio) + " (cap 50), dilation drift " + fmt("%.2e", drift) +
                  " (<= 25%), boundary s2 " + (rejected ? "rejected" : "ACCEPTED")};
}

}  // namespace

int main() {
  if (!std::getenv("HATK_THREADS")) {
    // Campaign output does not depend on the worker count.
    std::string n = std::to_string(std::max(1u, std::thread::hardware_concurrency()));
    setenv("HATK_THREADS", n.c_str(), 1);
  }
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "telescoping identity", 10, telescoping},
      {2, "dualization sandwich", 30, dualization},
      {3, "stopping-time invariants", 60, stopping},
      {4, "size and energy bounds", 30, size_energy},
      {5, "vector-valued paraproduct", 180, vector_valued},
      {6, "alpha coefficient decay", 10, alpha_coefficients_check},
      {7, "shifted operator growth", 120, shifted},
      {8, "BHT multiplier", 10, bht_multiplier},
      {9, "BHT local L2", 120, bht_local},
      {10, "range calculator", 10, range},
      {11, "mixed-norm Leibniz rule", 180, leibniz},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass && secs <= c.budget_s;
    failed += !pass;
    std::printf("%s %2d %s: %s [%.1f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
