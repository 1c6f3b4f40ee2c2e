#include "hatk/exponents.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "hatk/error.hpp"

namespace hatk {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_int(const std::string& s) {
  if (s.empty()) throw ParseError("empty integer");
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("bad integer '" + s + "'");
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string t = trim(text);
  auto slash = t.find('/');
  if (slash != std::string::npos) {
    std::int64_t den = parse_int(trim(t.substr(slash + 1)));
    if (den == 0) throw ParseError("zero denominator in '" + t + "'");
    return Rational(parse_int(trim(t.substr(0, slash))), den);
  }
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    std::string ip = t.substr(0, dot);
    std::string fp = t.substr(dot + 1);
    if (fp.empty() || fp.size() > 15 ||
        !std::all_of(fp.begin(), fp.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw ParseError("bad decimal '" + t + "'");
    bool neg = !ip.empty() && ip[0] == '-';
    std::int64_t den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    std::int64_t whole = ip.empty() || ip == "-" || ip == "+" ? 0 : parse_int(ip);
    std::int64_t frac = parse_int(fp);
    Rational r = Rational(std::abs(whole)) + Rational(frac, den);
    return neg ? -r : r;
  }
  return Rational(parse_int(t));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) noexcept {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

Exponent Exponent::of(Rational value) {
  if (value <= 0) throw DomainError("exponent must be positive");
  Exponent e;
  e.inv_ = Rational(1) / value;
  return e;
}

Exponent Exponent::from_reciprocal(Rational inv) {
  if (inv < 0) throw DomainError("exponent reciprocal must be nonnegative");
  Exponent e;
  e.inv_ = inv;
  return e;
}

Exponent Exponent::parse(const std::string& text) {
  std::string t = trim(text);
  std::string low;
  for (char c : t) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "inf" || low == "infinity" || t == "∞") return infinity();
  return of(parse_rational(t));
}

Rational Exponent::value() const {
  if (is_infinite()) throw DomainError("infinite exponent has no rational value");
  return Rational(1) / inv_;
}

double Exponent::to_double() const noexcept {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(inv_.denominator()) / static_cast<double>(inv_.numerator());
}

std::string Exponent::to_string() const {
  if (is_infinite()) return "inf";
  return hatk::to_string(value());
}

ExponentTuple::ExponentTuple(Exponent p, Exponent q)
    : p_(p), q_(q), s_(Exponent::from_reciprocal(p.reciprocal() + q.reciprocal())) {}

ExponentTuple::ExponentTuple(Exponent p, Exponent q, Exponent s) : p_(p), q_(q), s_(s) {
  if (p.reciprocal() + q.reciprocal() != s.reciprocal())
    throw DomainError("Hölder scaling violated: 1/" + p.to_string() + " + 1/" + q.to_string() +
                      " != 1/" + s.to_string());
}

bool ExponentTuple::admissible() const {
  Rational a[3] = {p_.reciprocal(), q_.reciprocal(), s_dual_reciprocal()};
  if (a[0] + a[1] + a[2] != Rational(1)) return false;
  int nonpos = 0;
  for (const auto& v : a) {
    if (v <= -1 || v >= 1) return false;
    if (v <= 0) ++nonpos;
  }
  return nonpos <= 1;
}

MixedNormSpec::MixedNormSpec(std::vector<Exponent> exponents) : r_(std::move(exponents)) {
  if (r_.empty()) throw DomainError("mixed norm needs at least one exponent");
  for (const auto& r : r_)
    if (r.reciprocal() >= 2) throw DomainError("mixed norm exponents must exceed 1/2");
}

std::size_t MixedNormSpec::min_index() const {
  std::size_t best = 0;
  for (std::size_t j = 1; j < r_.size(); ++j)
    if (r_[j].reciprocal() > r_[best].reciprocal()) best = j;
  return best;
}

Rational min_subadditive_exponent(const MixedNormSpec& spec) {
  const Exponent& m = spec[spec.min_index()];
  if (m.reciprocal() <= 1) return Rational(1);
  return m.value();
}

}  // namespace hatk
