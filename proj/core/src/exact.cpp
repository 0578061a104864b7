#include "mwold/exact.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mwold/errors.hpp"

namespace mwold {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw ArgumentError("to_rational: non-finite value");
  // boost converts doubles exactly (mantissa times a power of two).
  return Rational(x);
}

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw ArgumentError("empty rational literal");
  auto parse_int = [](std::string_view s) {
    if (s.empty()) throw ArgumentError("empty integer in rational literal");
    std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (i == s.size()) throw ArgumentError("malformed integer '" + std::string(s) + "'");
    for (std::size_t k = i; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') throw ArgumentError("malformed integer '" + std::string(s) + "'");
    return BigInt(std::string(s.front() == '+' ? s.substr(1) : s));
  };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_int(trim(text.substr(0, slash)));
    const BigInt den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0) throw ArgumentError("zero denominator in rational literal");
    return Rational(num, den);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    const bool negative = !whole.empty() && whole.front() == '-';
    const BigInt w = (whole.empty() || whole == "-" || whole == "+") ? BigInt(0) : parse_int(whole);
    if (frac.empty()) return Rational(w);
    const BigInt f = parse_int(frac);
    if (f < 0) throw ArgumentError("malformed decimal literal");
    BigInt scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    Rational r(w);
    const Rational part(f, scale);
    return negative ? Rational(r - part) : Rational(r + part);
  }
  return Rational(parse_int(text));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) { return r.str(); }

RationalPolynomial::RationalPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void RationalPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RationalPolynomial RationalPolynomial::derivative() const {
  std::vector<Rational> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(coeffs_[k] * static_cast<long>(k));
  return RationalPolynomial(std::move(d));
}

RationalPolynomial RationalPolynomial::shifted(const Rational& shift) const {
  // Horner in polynomial arithmetic: p(x + s) = (...(a_d (x+s) + a_{d-1})(x+s) + ...).
  const RationalPolynomial linear({shift, Rational(1)});
  RationalPolynomial acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * linear + RationalPolynomial({*it});
  return acc;
}

RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return RationalPolynomial(std::move(c));
}

RationalPolynomial operator+(const RationalPolynomial& a, const RationalPolynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return RationalPolynomial(std::move(c));
}

Rational cauchy_root_bound(const RationalPolynomial& p) {
  if (p.degree() <= 0) return Rational(1);
  Rational worst = 0;
  for (int i = 0; i < p.degree(); ++i) {
    const Rational ratio = abs(p.coeffs()[static_cast<std::size_t>(i)] / p.leading());
    if (ratio > worst) worst = ratio;
  }
  return 1 + worst;
}

namespace {

int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

/// Remainder of a / b, both nonzero.
RationalPolynomial remainder(RationalPolynomial a, const RationalPolynomial& b) {
  std::vector<Rational> r = a.coeffs();
  const int db = b.degree();
  while (static_cast<int>(r.size()) - 1 >= db && !r.empty()) {
    const int dr = static_cast<int>(r.size()) - 1;
    const Rational factor = r.back() / b.leading();
    for (int k = 0; k <= db; ++k) r[static_cast<std::size_t>(dr - db + k)] -= factor * b.coeffs()[static_cast<std::size_t>(k)];
    r.pop_back();
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  return RationalPolynomial(std::move(r));
}

class SturmChain {
 public:
  explicit SturmChain(const RationalPolynomial& p) {
    chain_.push_back(p);
    if (p.degree() <= 0) return;
    chain_.push_back(p.derivative());
    while (true) {
      RationalPolynomial r = remainder(chain_[chain_.size() - 2], chain_.back());
      if (r.is_zero()) break;
      chain_.push_back(r * RationalPolynomial({Rational(-1)}));
    }
  }

  int sign_changes(const Rational& x) const {
    int changes = 0;
    int last = 0;
    for (const auto& q : chain_) {
      const int s = sign(q(x));
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

 private:
  std::vector<RationalPolynomial> chain_;
};

std::optional<BigInt> scan(const RationalPolynomial& p, const SturmChain& sturm, const BigInt& lo, const BigInt& hi) {
  const Rational plo(lo);
  if (p(plo) <= 0) return lo;
  if (hi <= lo) return std::nullopt;
  const Rational phi(hi);
  const Rational value_hi = p(phi);
  // p(lo) > 0 and p(hi) > 0 with no root in between: positive on [lo, hi].
  if (value_hi > 0 && sturm.sign_changes(plo) == sturm.sign_changes(phi)) return std::nullopt;
  if (hi - lo == 1) return value_hi <= 0 ? std::optional<BigInt>(hi) : std::nullopt;
  const BigInt mid = lo + (hi - lo) / 2;
  if (auto left = scan(p, sturm, lo, mid)) return left;
  return scan(p, sturm, mid, hi);
}

}  // namespace

std::optional<BigInt> first_nonpositive_integer(const RationalPolynomial& p, const BigInt& start) {
  if (p.is_zero()) return start;
  if (p.degree() == 0) return p.leading() > 0 ? std::nullopt : std::optional<BigInt>(start);
  const Rational bound = cauchy_root_bound(p);
  // Integers above the bound carry the sign of the leading coefficient.
  BigInt top = numerator(bound) / denominator(bound) + 2;
  if (top < start) top = start;
  const SturmChain sturm(p);
  return scan(p, sturm, start, top);
}

}  // namespace mwold
