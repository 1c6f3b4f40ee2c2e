#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <vector>

namespace hatk {

using Rational = boost::rational<std::int64_t>;

/// Parses "3", "-4/3" or "0.75" (finite decimals) into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r) noexcept;

/**
 * A Lebesgue exponent stored through its exact reciprocal; reciprocal 0 is infinity.
 */
class Exponent {
 public:
  Exponent() = default;
  /// Exponent with the given (positive) value.
  static Exponent of(Rational value);
  static Exponent of(std::int64_t num, std::int64_t den = 1) { return of(Rational(num, den)); }
  static Exponent infinity() { return from_reciprocal(Rational(0)); }
  static Exponent from_reciprocal(Rational inv);
  /// Accepts "inf", "∞" or a rational literal.
  static Exponent parse(const std::string& text);

  bool is_infinite() const noexcept { return inv_ == Rational(0); }
  const Rational& reciprocal() const noexcept { return inv_; }
  Rational value() const;
  double to_double() const noexcept;
  std::string to_string() const;

  bool operator==(const Exponent& o) const noexcept { return inv_ == o.inv_; }

 private:
  Rational inv_{1};
};

/**
 * Hölder triple with 1/p + 1/q = 1/s held exactly. p, q may be infinite.
 */
class ExponentTuple {
 public:
  /// Derives s from p and q.
  ExponentTuple(Exponent p, Exponent q);
  /// Throws DomainError unless 1/p + 1/q = 1/s exactly.
  ExponentTuple(Exponent p, Exponent q, Exponent s);

  const Exponent& p() const noexcept { return p_; }
  const Exponent& q() const noexcept { return q_; }
  const Exponent& s() const noexcept { return s_; }
  /// 1/s' = 1 - 1/s.
  Rational s_dual_reciprocal() const { return Rational(1) - s_.reciprocal(); }

  /// (1/p, 1/q, 1/s') sum to 1, each lies in (-1, 1), at most one is <= 0.
  bool admissible() const;

 private:
  Exponent p_, q_, s_;
};

/// Tuple R = (r^1, ..., r^n), each r in (1/2, inf]; r^n acts on the innermost axis.
class MixedNormSpec {
 public:
  explicit MixedNormSpec(std::vector<Exponent> exponents);

  std::size_t depth() const noexcept { return r_.size(); }
  const std::vector<Exponent>& exponents() const noexcept { return r_; }
  const Exponent& operator[](std::size_t j) const { return r_[j]; }
  /// First index attaining the minimal exponent.
  std::size_t min_index() const;

 private:
  std::vector<Exponent> r_;
};

/// min(1, min_j r^j).
Rational min_subadditive_exponent(const MixedNormSpec& spec);

}  // namespace hatk
