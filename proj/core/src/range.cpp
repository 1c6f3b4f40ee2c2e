#include <algorithm>
#include <sstream>

#include "hatk/error.hpp"
#include "hatk/operators.hpp"

namespace hatk {

namespace {

using R3 = std::array<Rational, 3>;

// sum_j c_j t_j > b (strict) or >= b.
struct Ineq {
  std::vector<Rational> c;
  Rational b;
  bool strict = false;
};

// Fourier-Motzkin elimination, last variable first; stage[v] holds the system over t_0..t_v.
std::optional<std::vector<Rational>> fm_solve(std::vector<Ineq> sys, std::size_t vars) {
  std::vector<std::vector<Ineq>> stage(vars);
  for (std::size_t v = vars; v-- > 0;) {
    stage[v] = sys;
    std::vector<Ineq> pos, neg, next;
    for (auto& q : sys) {
      if (q.c[v] > 0)
        pos.push_back(q);
      else if (q.c[v] < 0)
        neg.push_back(q);
      else
        next.push_back(q);
    }
    for (const auto& p : pos)
      for (const auto& n : neg) {
        Rational wp = -n.c[v], wn = p.c[v];
        Ineq r{std::vector<Rational>(vars), wp * p.b + wn * n.b, p.strict || n.strict};
        for (std::size_t j = 0; j < vars; ++j) r.c[j] = wp * p.c[j] + wn * n.c[j];
        r.c[v] = 0;
        next.push_back(std::move(r));
      }
    sys = std::move(next);
  }
  for (const auto& q : sys)
    if (q.strict ? !(0 > q.b) : !(0 >= q.b)) return std::nullopt;

  std::vector<Rational> t(vars, Rational(0));
  for (std::size_t v = 0; v < vars; ++v) {
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& q : stage[v]) {
      if (q.c[v] == Rational(0)) continue;
      Rational rest = q.b;
      for (std::size_t j = 0; j < v; ++j) rest -= q.c[j] * t[j];
      Rational bound = rest / q.c[v];
      if (q.c[v] > 0) {
        if (!lo || bound > *lo || (bound == *lo && q.strict)) {
          lo_strict = (lo && bound == *lo) ? (lo_strict || q.strict) : q.strict;
          lo = bound;
        }
      } else if (!hi || bound < *hi || (bound == *hi && q.strict)) {
        hi_strict = (hi && bound == *hi) ? (hi_strict || q.strict) : q.strict;
        hi = bound;
      }
    }
    if (lo && hi)
      t[v] = (*lo == *hi) ? *lo : (*lo + *hi) / 2;
    else if (lo)
      t[v] = *lo + 1;
    else if (hi)
      t[v] = *hi - 1;
    if (lo && hi && *lo == *hi && (lo_strict || hi_strict)) return std::nullopt;
  }
  return t;
}

Ineq ineq(Rational c1, Rational c2, Rational b, bool strict) { return {{c1, c2}, b, strict}; }

struct Reciprocals {
  R3 a;  // (1/r1, 1/r2, 1 - 1/r)
  R3 x;  // (1/p, 1/q, 1 - 1/s)
};

Reciprocals reciprocals(const RangeLevel& lv, const Exponent& p, const Exponent& q, const Exponent& s) {
  return {{lv.r1.reciprocal(), lv.r2.reciprocal(), Rational(1) - lv.r.reciprocal()},
          {p.reciprocal(), q.reciprocal(), Rational(1) - s.reciprocal()}};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

RangeVerdict evaluate_level(const R3& a, const R3& x) {
  RangeVerdict v;
  v.theta = theta_witness(a, x);
  bool table = range_case_table(a, x, v.case_label, v.printed_member);
  if (table != v.theta.has_value())
    throw ConsistencyError("case table (" + v.case_label + ") and theta feasibility disagree at a = (" +
                           to_string(a[0]) + ", " + to_string(a[1]) + ", " + to_string(a[2]) + "), x = (" +
                           to_string(x[0]) + ", " + to_string(x[1]) + ", " + to_string(x[2]) + ")");
  v.member = table;
  v.printed_disagrees = v.printed_member != table;
  return v;
}

}  // namespace

std::optional<R3> theta_witness(const R3& a, const R3& x) {
  // Variables (t1, t2); t3 = 1 - t1 - t2.
  std::vector<Ineq> sys;
  const Rational one(1), zero(0);
  for (int i = 0; i < 2; ++i) {
    Rational e1 = i == 0 ? one : zero, e2 = i == 0 ? zero : one;
    sys.push_back(ineq(e1, e2, zero, false));                          // t_i >= 0
    sys.push_back(ineq(-e1, -e2, -one, true));                         // t_i < 1
    sys.push_back(ineq(e1, e2, 2 * a[static_cast<std::size_t>(i)] - 1, true));  // t_i > 2a_i - 1
    sys.push_back(ineq(e1, e2, 2 * x[static_cast<std::size_t>(i)] - 1, true));  // t_i > 2x_i - 1
  }
  // t3 constraints, rewritten as -t1 - t2 (op) b - 1.
  sys.push_back(ineq(-one, -one, -one, false));
  sys.push_back(ineq(one, one, zero, true));
  sys.push_back(ineq(-one, -one, 2 * a[2] - 2, true));
  sys.push_back(ineq(-one, -one, 2 * x[2] - 2, true));
  auto t = fm_solve(sys, 2);
  if (!t) return std::nullopt;
  return R3{(*t)[0], (*t)[1], one - (*t)[0] - (*t)[1]};
}

bool range_case_table(const R3& a, const R3& x, std::string& label, bool& printed_member) {
  const Rational half(1, 2), one(1), three_half(3, 2);
  const Rational& a1 = a[0];
  const Rational& a2 = a[1];
  const Rational& a3 = a[2];
  const Rational& px = x[0];
  const Rational& py = x[1];
  const Rational& pz = x[2];
  Rational inv_r = one - a3;
  bool in_range = px >= 0 && px < one && py >= 0 && py < one && pz > -half && pz < one;
  bool valid = a1 >= 0 && a1 < one && a2 >= 0 && a2 < one && a3 > -half && a3 < one;

  bool member = false;
  printed_member = false;
  if (!valid) {
    label = "none";
  } else if (a1 <= half && a2 <= half && a3 <= half) {
    label = "i";
    member = printed_member = in_range;
  } else if (a1 > half && a2 <= half && a3 >= 0 && a3 <= half) {
    label = "ii";
    printed_member = in_range && py < three_half - a1;
    member = printed_member && pz < three_half - a1;
  } else if (a2 > half && a1 <= half && a3 >= 0 && a3 <= half) {
    label = "iii";
    printed_member = in_range && px < three_half - a2;
    member = printed_member && pz < three_half - a2;
  } else if (a1 <= half && a2 <= half && a3 > half) {
    label = "iv";
    member = printed_member = in_range && px < half + inv_r && py < half + inv_r && pz > -inv_r && pz < one;
  } else if (a1 > half && a2 <= half && a3 < 0) {
    label = "v";
    member = printed_member = in_range && py < three_half - a1 && pz < three_half - a1;
  } else if (a2 > half && a1 <= half && a3 < 0) {
    label = "vi";
    member = printed_member = in_range && px < three_half - a2 && pz < three_half - a2;
  } else if (a1 > half && a2 > half && a3 < 0) {
    label = "vii";
    member = printed_member =
        in_range && px < three_half - a2 && py < three_half - a1 && pz < 2 * one - inv_r;
  } else {
    label = "none";
  }
  return member;
}

RangeQuery RangeQuery::parse(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  std::optional<Exponent> p, q, s;
  std::vector<Exponent> r1, r2, r;
  auto list = [](const std::string& v) {
    std::vector<Exponent> out;
    for (const auto& part : split(v, ',')) out.push_back(Exponent::parse(part));
    return out;
  };
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok + "'");
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (val.empty()) throw ParseError("missing value for '" + key + "'");
    if (key == "p")
      p = Exponent::parse(val);
    else if (key == "q")
      q = Exponent::parse(val);
    else if (key == "s")
      s = Exponent::parse(val);
    else if (key == "r1")
      r1 = list(val);
    else if (key == "r2")
      r2 = list(val);
    else if (key == "r")
      r = list(val);
    else
      throw ParseError("unknown key '" + key + "'");
  }
  if (!p || !q) throw ParseError("query needs p and q");
  if (r1.empty() || r2.empty()) throw ParseError("query needs r1 and r2");
  if (r1.size() != r2.size() || (!r.empty() && r.size() != r1.size()))
    throw ParseError("r1, r2 and r must have the same depth");

  RangeQuery out;
  out.p = *p;
  out.q = *q;
  Rational inv_s = p->reciprocal() + q->reciprocal();
  if (s && s->reciprocal() != inv_s)
    throw DomainError("Hölder scaling violated: 1/p + 1/q != 1/s");
  if (inv_s == Rational(0)) throw DomainError("s must be finite");
  out.s = Exponent::from_reciprocal(inv_s);
  for (std::size_t j = 0; j < r1.size(); ++j) {
    Rational inv_r = r1[j].reciprocal() + r2[j].reciprocal();
    if (!r.empty() && r[j].reciprocal() != inv_r)
      throw DomainError("Hölder scaling violated at level " + std::to_string(j + 1) + ": 1/r1 + 1/r2 != 1/r");
    if (inv_r == Rational(0)) throw DomainError("r must be finite at level " + std::to_string(j + 1));
    out.levels.push_back({r1[j], r2[j], Exponent::from_reciprocal(inv_r)});
  }
  return out;
}

std::string RangeQuery::to_string() const {
  auto join = [&](auto get) {
    std::string out;
    for (std::size_t j = 0; j < levels.size(); ++j) out += (j ? "," : "") + get(levels[j]).to_string();
    return out;
  };
  return "p=" + p.to_string() + " q=" + q.to_string() + " s=" + s.to_string() +
         " r1=" + join([](const RangeLevel& l) { return l.r1; }) +
         " r2=" + join([](const RangeLevel& l) { return l.r2; }) +
         " r=" + join([](const RangeLevel& l) { return l.r; });
}

RangeResult bht_range_membership(const RangeQuery& query) {
  if (query.levels.empty()) throw DomainError("range query has no levels");
  if (query.p.reciprocal() + query.q.reciprocal() != query.s.reciprocal())
    throw DomainError("Hölder scaling violated: 1/p + 1/q != 1/s");
  RangeResult res;
  res.member = true;
  for (std::size_t j = 0; j < query.levels.size(); ++j) {
    const auto& lv = query.levels[j];
    if (lv.r1.reciprocal() + lv.r2.reciprocal() != lv.r.reciprocal())
      throw DomainError("Hölder scaling violated at level " + std::to_string(j + 1));
    auto rc = reciprocals(lv, query.p, query.q, query.s);
    res.levels.push_back(evaluate_level(rc.a, rc.x));
    res.member = res.member && res.levels.back().member;
    if (j + 1 < query.levels.size()) {
      // Level j's exponents must lie in the range of level j+1.
      auto inner = reciprocals(query.levels[j + 1], lv.r1, lv.r2, lv.r);
      if (!evaluate_level(inner.a, inner.x).member) res.chain_ok = false;
    }
  }
  return res;
}

std::string RangeResult::summary() const {
  std::ostringstream os;
  os << (member ? "member" : "non-member");
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const auto& v = levels[j];
    os << "\nlevel " << j + 1 << ": case " << v.case_label << ", " << (v.member ? "member" : "non-member");
    if (v.theta)
      os << ", theta = (" << to_string((*v.theta)[0]) << ", " << to_string((*v.theta)[1]) << ", "
         << to_string((*v.theta)[2]) << ")";
    if (v.printed_disagrees) os << ", printed table says " << (v.printed_member ? "member" : "non-member");
  }
  if (levels.size() > 1) os << "\nchain " << (chain_ok ? "ok" : "broken");
  return os.str();
}

}  // namespace hatk
