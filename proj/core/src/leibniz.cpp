#include <algorithm>
#include <cmath>

#include "hatk/error.hpp"
#include "hatk/operators.hpp"

namespace hatk {

LeibnizExponents LeibnizExponents::uniform(MixedPair p, MixedPair q) {
  LeibnizExponents e;
  e.s1 = Exponent::from_reciprocal(p.x.reciprocal() + q.x.reciprocal());
  e.s2 = Exponent::from_reciprocal(p.y.reciprocal() + q.y.reciprocal());
  e.f_side.fill(p);
  e.g_side.fill(q);
  return e;
}

void check_leibniz_exponents(double alpha, double beta, const LeibnizExponents& e) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("alpha and beta must be positive");
  for (std::size_t j = 0; j < 4; ++j) {
    const auto& p = e.f_side[j];
    const auto& q = e.g_side[j];
    std::string term = "term " + std::to_string(j + 1);
    if (p.x.reciprocal() + q.x.reciprocal() != e.s1.reciprocal())
      throw DomainError("Hölder scaling 1/p + 1/q = 1/s1 fails in the x exponents of " + term);
    if (p.y.reciprocal() + q.y.reciprocal() != e.s2.reciprocal())
      throw DomainError("Hölder scaling 1/p + 1/q = 1/s2 fails in the y exponents of " + term);
  }
  if (e.s1.is_infinite()) throw DomainError("s1 must be finite");
  if (e.s2.is_infinite()) throw DomainError("s2 must be finite");
  if (!(e.s1.to_double() > 1.0 / (1.0 + alpha)))
    throw DomainError("constraint violated: s1 > 1/(1+alpha) (s1 = " + e.s1.to_string() + ")");
  double bound2 = std::max(1.0 / (1.0 + alpha), 1.0 / (1.0 + beta));
  if (!(e.s2.to_double() > bound2))
    throw DomainError("constraint violated: s2 > max(1/(1+alpha), 1/(1+beta)) (s2 = " + e.s2.to_string() + ")");
  for (std::size_t j = 0; j < 4; ++j)
    for (const auto* side : {&e.f_side[j], &e.g_side[j]})
      for (const auto* r : {&side->x, &side->y})
        if (r->reciprocal() >= 1)
          throw DomainError("constraint violated: every p and q in term " + std::to_string(j + 1) +
                            " must exceed 1 (got " + r->to_string() + ")");
}

LeibnizSides leibniz_sides(double alpha, double beta, const LeibnizExponents& exps, const GridFunction& f,
                           const GridFunction& g) {
  check_leibniz_exponents(alpha, beta, exps);
  if (f.grid().dimension() != 2 || !f.is_scalar() || !(f.grid() == g.grid()) || !g.is_scalar())
    throw ShapeError("leibniz_sides expects scalar 2D functions on one grid");

  auto dx = [&](const GridFunction& h) { return fractional_derivative(h, alpha, 1); };
  auto dy = [&](const GridFunction& h) { return fractional_derivative(h, beta, 2); };
  auto norm = [](const GridFunction& h, const MixedPair& r) { return mixed_norm(h, MixedNormSpec({r.x, r.y})); };

  LeibnizSides s;
  s.lhs = mixed_norm(dy(dx(f * g)), MixedNormSpec({exps.s1, exps.s2}));
  GridFunction dxy_f = dy(dx(f)), dxy_g = dy(dx(g));
  s.rhs_terms[0] = norm(dxy_f, exps.f_side[0]) * norm(g, exps.g_side[0]);
  s.rhs_terms[1] = norm(f, exps.f_side[1]) * norm(dxy_g, exps.g_side[1]);
  s.rhs_terms[2] = norm(dx(f), exps.f_side[2]) * norm(dy(g), exps.g_side[2]);
  s.rhs_terms[3] = norm(dy(f), exps.f_side[3]) * norm(dx(g), exps.g_side[3]);
  double total = s.rhs_terms[0] + s.rhs_terms[1] + s.rhs_terms[2] + s.rhs_terms[3];
  s.ratio = total > 0.0 ? s.lhs / total : (s.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return s;
}

}  // namespace hatk
