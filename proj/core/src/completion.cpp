#include "mwold/completion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mwold/errors.hpp"

namespace mwold {

namespace {
constexpr double kDifferenceRoundoff = 16 * std::numeric_limits<double>::epsilon();
}  // namespace

std::vector<double> forward_differences(const std::vector<double>& g) {
  if (g.empty()) throw ArgumentError("forward_differences: empty sequence");
  std::vector<double> row = g;
  std::vector<double> out;
  out.reserve(g.size());
  while (!row.empty()) {
    out.push_back(row.front());
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
    row.pop_back();
  }
  return out;
}

std::int64_t falling_factorial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0) throw ArgumentError("falling_factorial: n and k must be non-negative");
  std::int64_t out = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    if (n - i == 0) return 0;
    if (out > std::numeric_limits<std::int64_t>::max() / (n - i)) throw ArgumentError("falling_factorial: overflow");
    out *= n - i;
  }
  return out;
}

void GammaSequence::validate() const {
  if (values.empty()) throw ArgumentError("GammaSequence: no values");
  if (values.front() != 1.0) throw ArgumentError("GammaSequence: gamma_0 must equal 1");
  for (std::size_t n = 0; n < values.size(); ++n)
    if (!(std::isfinite(values[n]) && values[n] > 0.0))
      throw ArgumentError("GammaSequence: gamma_" + std::to_string(n) + " must be positive and finite");
}

GammaSequence GammaSequence::from_weights(const std::vector<double>& xi) {
  GammaSequence g;
  g.values.push_back(1.0);
  for (std::size_t k = 0; k < xi.size(); ++k) {
    if (!(std::isfinite(xi[k]) && xi[k] > 0.0))
      throw ArgumentError("initial weight xi_" + std::to_string(k) + " must be positive and finite");
    g.values.push_back(g.values.back() * xi[k] * xi[k]);
  }
  return g;
}

NewtonExtension::NewtonExtension(GammaSequence gamma, std::size_t m) : gamma_(std::move(gamma)) {
  if (gamma_.values.size() != m) {
    std::ostringstream os;
    os << "newton_extend: expected " << m << " gamma values, got " << gamma_.values.size();
    throw ArgumentError(os.str());
  }
  gamma_.validate();
  coeffs_ = forward_differences(gamma_.values);
  const double scale = *std::max_element(gamma_.values.begin(), gamma_.values.end());
  double factorial = 1.0;
  double roundoff = kDifferenceRoundoff * scale;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    // A k-th difference of floats carries error up to ~2^k eps max(gamma);
    // anything inside that band is indistinguishable from zero.
    if (k > 0) {
      factorial *= static_cast<double>(k);
      roundoff *= 2.0;
      if (std::abs(coeffs_[k]) <= roundoff) coeffs_[k] = 0.0;
    }
    coeffs_[k] /= factorial;
  }
}

double NewtonExtension::polynomial(double n) const {
  double sum = 0.0;
  double ff = 1.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    sum += coeffs_[k] * ff;
    ff *= n - static_cast<double>(k);
  }
  return sum;
}

double NewtonExtension::operator()(std::int64_t n) const {
  if (n < 0) throw ArgumentError("W(n) requires n >= 0");
  if (static_cast<std::size_t>(n) < gamma_.values.size()) return gamma_.values[static_cast<std::size_t>(n)];
  return polynomial(static_cast<double>(n));
}

namespace {

RationalPolynomial monomial_form(const std::vector<double>& newton_coeffs) {
  RationalPolynomial sum;
  RationalPolynomial ff({Rational(1)});
  for (std::size_t k = 0; k < newton_coeffs.size(); ++k) {
    sum = sum + ff * RationalPolynomial({to_rational(newton_coeffs[k])});
    ff = ff * RationalPolynomial({Rational(-static_cast<long>(k)), Rational(1)});
  }
  return sum;
}

std::int64_t clamp_to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
  return v.convert_to<std::int64_t>();
}

}  // namespace

RationalPolynomial NewtonExtension::exact_polynomial() const { return monomial_form(coeffs_); }

NewtonExtension newton_extend(const GammaSequence& g, std::size_t m) { return NewtonExtension(g, m); }

PositivityResult positivity_horizon(const std::vector<double>& newton_coeffs) {
  for (double c : newton_coeffs)
    if (!std::isfinite(c)) throw ArgumentError("positivity_horizon: non-finite coefficient");
  const auto first = first_nonpositive_integer(monomial_form(newton_coeffs), BigInt(0));
  if (!first) return {true, std::nullopt};
  return {false, clamp_to_int64(*first)};
}

PositivityResult positivity_horizon(const NewtonExtension& w) { return positivity_horizon(w.newton_coeffs()); }

WeightGenerator::WeightGenerator(ComplexMatrix basis, std::vector<NewtonExtension> atoms)
    : basis_(std::move(basis)), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ArgumentError("WeightGenerator: no atoms");
  if (basis_.rows() != basis_.cols() || basis_.rows() != static_cast<Index>(atoms_.size()))
    throw ArgumentError("WeightGenerator: basis must be square with one column per atom");
  for (const auto& a : atoms_)
    if (a.m() != atoms_.front().m()) throw ArgumentError("WeightGenerator: atoms disagree on m");
}

PolynomialFamily WeightGenerator::family() const {
  PolynomialFamily f;
  f.m = m();
  for (std::size_t x = 0; x < atoms_.size(); ++x) f.atoms.push_back({static_cast<Index>(x), atoms_[x].newton_coeffs()});
  return f;
}

ComplexMatrix WeightGenerator::weight(std::int64_t n) const {
  if (n < 0) throw ArgumentError("weight index must be non-negative");
  Eigen::VectorXd diag(static_cast<Index>(atoms_.size()));
  for (std::size_t x = 0; x < atoms_.size(); ++x) diag(static_cast<Index>(x)) = std::sqrt(atoms_[x](n + 1) / atoms_[x](n));
  if (atoms_.size() == 1 && basis_(0, 0) == Complex(1.0)) return ComplexMatrix::Constant(1, 1, diag(0));
  return basis_ * diag.cast<Complex>().asDiagonal() * basis_.adjoint();
}

ShiftSpec WeightGenerator::materialize(Index N) const {
  if (N < 1) throw ArgumentError("materialize: N must be >= 1");
  ShiftSpec spec;
  spec.d = d();
  spec.N = N;
  for (Index n = 0; n + 1 < N; ++n) spec.weights.push_back(weight(n));
  return spec;
}

std::pair<double, double> WeightGenerator::ratio_bounds(std::int64_t horizon) const {
  double hi = 1.0;
  double lo = 1.0;
  for (const auto& a : atoms_)
    for (std::int64_t n = 0; n <= horizon; ++n) {
      const double r = a(n + 1) / a(n);
      hi = std::max(hi, r);
      lo = std::min(lo, r);
    }
  return {hi, lo};
}

namespace {

NewtonExtension extend_atom(const std::vector<double>& xi, std::size_t m, std::size_t atom) {
  NewtonExtension ext(GammaSequence::from_weights(xi), m);
  const auto pos = positivity_horizon(ext);
  if (!pos.ok) throw CompletionInfeasible(atom, *pos.witness);
  return ext;
}

}  // namespace

WeightGenerator complete_scalar(const std::vector<double>& xi, std::size_t m) {
  if (m < 2) throw ArgumentError("complete_scalar: m must be >= 2");
  if (xi.size() != m - 1) {
    std::ostringstream os;
    os << "complete_scalar: expected " << m - 1 << " initial weights, got " << xi.size();
    throw ArgumentError(os.str());
  }
  std::vector<NewtonExtension> atoms{extend_atom(xi, m, 0)};
  return WeightGenerator(ComplexMatrix::Identity(1, 1), std::move(atoms));
}

WeightGenerator complete_operator(const std::vector<ComplexMatrix>& initial, std::size_t m,
                                  const ToleranceConfig& tol, std::uint64_t seed) {
  if (m < 2) throw ArgumentError("complete_operator: m must be >= 2");
  if (initial.size() != m - 1) {
    std::ostringstream os;
    os << "complete_operator: expected " << m - 1 << " initial weights, got " << initial.size();
    throw ArgumentError(os.str());
  }
  const auto jd = joint_diagonalize(initial, tol, seed);
  const Index d = initial.front().rows();
  std::vector<NewtonExtension> atoms;
  for (Index x = 0; x < d; ++x) {
    std::vector<double> xi;
    for (std::size_t n = 0; n < initial.size(); ++n) {
      const double v = jd.spectra[n][static_cast<std::size_t>(x)];
      if (!(v > tol.tol_rank * std::max(1.0, spectral_norm(initial[n])))) {
        std::ostringstream os;
        os << "complete_operator: weight " << n << " is not positive definite (eigenvalue " << v << ")";
        throw PreconditionError(os.str());
      }
      xi.push_back(v);
    }
    atoms.push_back(extend_atom(xi, m, static_cast<std::size_t>(x)));
  }
  return WeightGenerator(jd.unitary, std::move(atoms));
}

double verify_uniqueness(const WeightGenerator& a, const WeightGenerator& b, std::int64_t horizon) {
  if (a.d() != b.d()) throw ArgumentError("verify_uniqueness: generators have different fiber dimensions");
  double worst = 0.0;
  for (std::int64_t n = 0; n <= horizon; ++n) worst = std::max(worst, spectral_norm(a.weight(n) - b.weight(n)));
  return worst;
}

PolynomialFamily recover_family(const ShiftSpec& spec, std::size_t m, const ToleranceConfig& tol,
                                std::uint64_t seed) {
  if (m < 1) throw ArgumentError("recover_family: m must be >= 1");
  spec.validate(tol);
  if (spec.N < static_cast<Index>(m) + 2) {
    std::ostringstream os;
    os << "recover_family: need N >= m + 2 = " << m + 2 << " sites, got " << spec.N;
    throw PreconditionError(os.str());
  }
  std::vector<std::vector<double>> xi_per_atom(static_cast<std::size_t>(spec.d));
  if (spec.d == 1) {
    for (const auto& w : spec.weights) {
      const Complex v = w(0, 0);
      if (std::abs(v.imag()) > tol.tol_identity * std::abs(v) || !(v.real() > 0))
        throw PreconditionError("recover_family: scalar weights must be positive");
      xi_per_atom[0].push_back(v.real());
    }
  } else {
    const auto jd = joint_diagonalize(spec.weights, tol, seed);
    for (std::size_t n = 0; n < spec.weights.size(); ++n)
      for (Index x = 0; x < spec.d; ++x) {
        const double v = jd.spectra[n][static_cast<std::size_t>(x)];
        if (!(v > 0)) throw PreconditionError("recover_family: weights must be positive definite");
        xi_per_atom[static_cast<std::size_t>(x)].push_back(v);
      }
  }
  PolynomialFamily family;
  family.m = m;
  double worst = 0.0;
  double worst_abs = 0.0;
  for (std::size_t x = 0; x < xi_per_atom.size(); ++x) {
    const GammaSequence gamma = GammaSequence::from_weights(xi_per_atom[x]);
    const auto& g = gamma.values;
    for (std::size_t s = 0; s + m < g.size(); ++s) {
      double diff = 0.0;
      double scale = 0.0;
      for (std::size_t p = 0; p <= m; ++p) {
        const double sign = ((m - p) % 2 == 0) ? 1.0 : -1.0;
        double c = 1.0;
        for (std::size_t i = 1; i <= p; ++i) c = c * static_cast<double>(m - p + i) / static_cast<double>(i);
        diff += sign * std::round(c) * g[s + p];
        scale = std::max(scale, g[s + p]);
      }
      worst = std::max(worst, std::abs(diff) / scale);
      worst_abs = std::max(worst_abs, std::abs(diff));
    }
    const std::vector<double> head(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(m));
    family.atoms.push_back({static_cast<Index>(x), NewtonExtension(GammaSequence{head}, m).newton_coeffs()});
  }
  if (worst > tol.tol_identity) throw NotMIsometric(m, worst_abs);
  return family;
}

}  // namespace mwold
