#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mwold {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact value of a finite double (every finite double is a dyadic rational).
Rational to_rational(double x);

/// Parses "p", "p/q", or a decimal literal such as "2.5" exactly.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);
std::string to_string(const Rational& r);

/// Polynomial with rational coefficients, ascending powers.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coeffs);

  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const Rational& leading() const { return coeffs_.back(); }

  Rational operator()(const Rational& x) const;

  RationalPolynomial derivative() const;
  /// p(x + shift).
  RationalPolynomial shifted(const Rational& shift) const;

  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b);
  friend RationalPolynomial operator+(const RationalPolynomial& a, const RationalPolynomial& b);

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Smallest integer n >= start with p(n) <= 0, or nullopt if p is positive on
/// every integer >= start. Decided exactly: Cauchy root bound, leading-sign
/// check past the bound, and an integer scan below it that skips root-free
/// stretches by Sturm counting. The zero polynomial yields `start`.
std::optional<BigInt> first_nonpositive_integer(const RationalPolynomial& p, const BigInt& start);

/// Cauchy bound: every real root r satisfies |r| < 1 + max |a_i / a_d|.
Rational cauchy_root_bound(const RationalPolynomial& p);

}  // namespace mwold
