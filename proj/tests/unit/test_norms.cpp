#include <algorithm>
#include <set>

#include "doctest.h"
#include "support.hpp"

#include "hatk/error.hpp"
#include "hatk/exponents.hpp"
#include "hatk/norms.hpp"

using namespace hatk;
using namespace testing;

namespace {

GridFunction step(const SampleGrid& g, std::uint64_t seed, int depth) { return bench::random_step_function(g, seed, depth); }

// sup over sample levels v of v |{|f| >= v}|^(1/p).
double weak_oracle(const GridFunction& f, double p) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double v = std::abs(f[i]);
    std::size_t c = 0;
    for (std::size_t j = 0; j < f.size(); ++j) c += std::abs(f[j]) >= v;
    best = std::max(best, v * std::pow(double(c) * f.grid().cell_measure(), 1.0 / p));
  }
  return best;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-4/3") == Rational(-4, 3));
  CHECK(parse_rational("0.75") == Rational(3, 4));
  CHECK(parse_rational(" 6/8 ") == Rational(3, 4));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
}

TEST_CASE("exponents and Hoelder tuples") {
  CHECK(Exponent::parse("inf").is_infinite());
  CHECK(Exponent::parse("4/3").reciprocal() == Rational(3, 4));
  CHECK_THROWS_AS(Exponent::parse("0"), DomainError);
  ExponentTuple t(Exponent::of(4), Exponent::of(4));
  CHECK(t.s().reciprocal() == Rational(1, 2));
  CHECK(t.admissible());
  CHECK_THROWS_AS(ExponentTuple(Exponent::of(4), Exponent::of(4), Exponent::of(3)), DomainError);
  // 1/p + 1/q + 1/s' = 1 holds identically; s < 1 gives a negative third entry.
  CHECK(ExponentTuple(Exponent::of(2), Exponent::of(2)).admissible());
  CHECK(ExponentTuple(Exponent::of(3, 2), Exponent::of(3, 2)).admissible());   // 1/s' = -1/3
  CHECK_FALSE(ExponentTuple(Exponent::of(1), Exponent::of(1)).admissible());  // 1/s' = -1
  CHECK_FALSE(ExponentTuple(Exponent::of(4, 3), Exponent::infinity()).admissible() == false);
}

TEST_CASE("property: admissibility by exhaustive rational grid") {
  // Oracle straight from the definition.
  for (int a = 1; a <= 12; ++a)
    for (int b = 1; b <= 12; ++b) {
      Rational x(a, 12), y(b, 12);
      ExponentTuple t(Exponent::from_reciprocal(x), Exponent::from_reciprocal(y));
      Rational z = Rational(1) - x - y;
      int nonpos = (x <= Rational(0)) + (y <= Rational(0)) + (z <= Rational(0));
      bool want = x > Rational(-1) && x < Rational(1) && y > Rational(-1) && y < Rational(1) && z > Rational(-1) &&
                  z < Rational(1) && nonpos <= 1;
      CHECK(t.admissible() == want);
    }
}

TEST_CASE("mixed norm spec and subadditive exponent") {
  auto spec = [](std::vector<Rational> r) {
    std::vector<Exponent> e;
    for (auto v : r) e.push_back(Exponent::of(v));
    return MixedNormSpec(e);
  };
  CHECK(min_subadditive_exponent(spec({2, 3})) == Rational(1));
  CHECK(min_subadditive_exponent(spec({2, Rational(3, 4)})) == Rational(3, 4));
  CHECK(min_subadditive_exponent(spec({Rational(3, 5), Rational(7, 10)})) == Rational(3, 5));
  CHECK(spec({Rational(3, 4), 2, Rational(3, 4)}).min_index() == 0);
  CHECK_THROWS_AS(spec({Rational(1, 2)}), DomainError);
}

TEST_CASE("lp norms") {
  SampleGrid g(64, 2.0);
  auto ind = MeasurableSet::from_intervals(g, {{0, 0}}).indicator();
  CHECK(lp_norm(ind, 2.0) == doctest::Approx(1.0));
  GridFunction f(g);
  f[5] = cplx(0, -3);
  CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == 3.0);

  // Weighted: 1 against chi~_[0,1) on a fine grid, compared with midpoint quadrature of the formula.
  SampleGrid fine(4096, 8.0);
  auto w = adapted_bump_samples(fine, {{0, 0}, 10});
  double quad = 0.0;
  int n = 200000;
  for (int i = 0; i < n; ++i) {
    double x = (i + 0.5) * 8.0 / n;
    double d = std::min(interval_distance({0, 0}, x), interval_distance({0, 0}, x - 8.0));
    quad += std::pow(1 + d, -10) * 8.0 / n;
  }
  CHECK(lp_norm(GridFunction::constant(fine, 1.0), 1.0, w) == doctest::Approx(quad).epsilon(1e-3));
}

TEST_CASE("distribution function and layer cake") {
  SampleGrid g(64, 2.0);
  auto f = 2.0 * MeasurableSet::from_intervals(g, {{0, 0}}).indicator();
  CHECK(distribution_function(f, 1.0) == doctest::Approx(1.0));
  CHECK(distribution_function(f, 2.5) == 0.0);

  SampleGrid u(256);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto h = step(u, s, 4);
    for (double p : {0.5, 1.0, 3.0}) {
      double top = h.max_abs(), acc = 0.0;
      int steps = 20000;
      double dl = top / steps;
      for (int i = 0; i < steps; ++i) {
        double lam = (i + 0.5) * dl;
        acc += p * std::pow(lam, p - 1) * distribution_function(h, lam) * dl;
      }
      CHECK(acc == doctest::Approx(std::pow(lp_norm(h, p), p)).epsilon(0.02));
    }
  }
}

TEST_CASE("weak Lp norm") {
  SampleGrid g(128);
  auto E = MeasurableSet::from_intervals(g, {{2, 1}});
  CHECK(weak_lp_norm(3.0 * E.indicator(), 2.0) == doctest::Approx(3.0 * std::sqrt(0.25)));

  SampleGrid fine(1 << 14);
  auto x = GridFunction::from_function(fine, [&](double t) -> cplx { return 1.0 / std::sqrt(t + fine.spacing()); });
  CHECK(weak_lp_norm(x, 2.0) == doctest::Approx(1.0).epsilon(0.05));

  for (std::uint64_t s = 1; s <= 10; ++s) {
    auto h = step(g, s, 5);
    CHECK(weak_lp_norm(h, 1.0) == doctest::Approx(weak_oracle(h, 1.0)).epsilon(1e-12));
    CHECK(weak_lp_norm(h, 0.5) == doctest::Approx(weak_oracle(h, 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("property: weak norm is dominated by the strong norm") {
  SampleGrid g(256);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    auto h = random_function(g, s);
    for (double p : {0.75, 1.0, 2.0}) CHECK(weak_lp_norm(h, p) <= lp_norm(h, p) * (1 + 1e-12));
  }
}

TEST_CASE("mixed norms") {
  SampleGrid g(32, 1.0, 2);
  MixedNormSpec r22({Exponent::of(2), Exponent::of(2)});
  CHECK(mixed_norm(GridFunction::constant(g, 1.0), r22) == doctest::Approx(1.0));

  SampleGrid g1(32);
  auto a = random_function(g1, 1), b = random_function(g1, 2);
  auto ab = GridFunction::from_function(g, [&](double x, double y) {
    return a[std::size_t(std::lround(x * 32))] * b[std::size_t(std::lround(y * 32))];
  });
  for (auto [p1, p2] : {std::pair{1.0, 3.0}, std::pair{0.75, 2.0}, std::pair{4.0, 1.5}}) {
    MixedNormSpec spec({Exponent::of(Rational(std::lround(p1 * 4), 4)), Exponent::of(Rational(std::lround(p2 * 2), 2))});
    CHECK(mixed_norm(ab, spec) == doctest::Approx(lp_norm(a, p1) * lp_norm(b, p2)).epsilon(1e-10));
  }
}

TEST_CASE("mixed norm over a 3-axis tensor matches nested loops") {
  SampleGrid g(16, 1.0, 2);
  std::vector<GridFunction> comps;
  for (std::uint64_t k = 0; k < 3; ++k) comps.push_back(random_function(g, 10 + k));
  auto f = GridFunction::stack(comps);
  MixedNormSpec spec({Exponent::of(1), Exponent::of(3, 4), Exponent::of(2)});
  double dx = g.spacing(), outer = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    double mid = 0.0;
    for (std::size_t j = 0; j < 16; ++j) {
      double in = 0.0;
      for (std::size_t k = 0; k < 3; ++k) in += std::norm(comps[k].at(i, j));
      mid += std::pow(std::sqrt(in), 0.75) * dx;
    }
    outer += std::pow(mid, 1 / 0.75) * dx;
  }
  CHECK(mixed_norm(f, spec) == doctest::Approx(outer).epsilon(1e-12));
  CHECK_THROWS_AS(mixed_norm(f, MixedNormSpec({Exponent::of(2)})), ShapeError);
}

TEST_CASE("dualization via Lr") {
  SampleGrid g(128);
  auto E = MeasurableSet::full(g);
  auto one = dualize_weak_via_Lr(E.indicator(), E, 0.5, 1.0, 4.0);
  CHECK(one.e_tilde == E);
  CHECK(one.ratio == doctest::Approx(1.0));
  auto zero = dualize_weak_via_Lr(GridFunction(g), E, 0.5, 1.0, 4.0);
  CHECK(zero.ratio == 0.0);
  CHECK(zero.e_tilde == E);
  CHECK_THROWS_AS(dualize_weak_via_Lr(GridFunction(g), MeasurableSet::empty(g), 0.5, 1.0), DomainError);
}

TEST_CASE("property: dualization keeps a major subset and the pairing stays below 4A") {
  SampleGrid g(256);
  for (std::uint64_t s = 1; s <= 30; ++s) {
    auto f = step(g, s, 5);
    auto E = bench::random_dyadic_set(g, s + 100, 0.25 + 0.25 * double(s % 3));
    auto d = dualize_weak_via_Lr(f, E, 0.5, 1.0, 4.0);
    CHECK(d.e_tilde.measure() >= 0.5 * E.measure());
    auto m = major_subset_L1(f, E, 1.0, 4.0);
    CHECK(m.value <= 4.0 * weak_lp_norm(f, 1.0) + 1e-12);
  }
}

TEST_CASE("major subset pairing") {
  SampleGrid g(128);
  auto E = MeasurableSet::from_intervals(g, {{1, 0}});
  auto m = major_subset_L1(E.indicator(), E, 2.0);
  CHECK(m.value == doctest::Approx(std::sqrt(0.5)));
  auto off = major_subset_L1(E.complement().indicator(), E, 2.0);
  CHECK(off.value == 0.0);
}

TEST_CASE("measurable set algebra") {
  SampleGrid g(64);
  auto A = MeasurableSet::from_intervals(g, {{1, 0}});
  auto B = MeasurableSet::from_intervals(g, {{2, 1}, {2, 2}});
  CHECK(A.set_union(B).measure() == doctest::Approx(0.75));
  CHECK(A.set_intersection(B).measure() == doctest::Approx(0.25));
  CHECK(A.set_difference(B).measure() == doctest::Approx(0.25));
  CHECK(A.complement().measure() == doctest::Approx(0.5));
  CHECK(MeasurableSet::from_intervals(g, {{1, 3}}) == MeasurableSet::from_intervals(g, {{1, 1}}));
}
