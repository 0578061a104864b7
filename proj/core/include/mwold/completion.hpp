#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mwold/exact.hpp"
#include "mwold/linalg.hpp"
#include "mwold/operators.hpp"

namespace mwold {

/// ((Delta^0 g)_0, (Delta^1 g)_0, ..., (Delta^{len-1} g)_0).
std::vector<double> forward_differences(const std::vector<double>& g);

/// (n)_k = n (n-1) ... (n-k+1); 1 for k = 0.
std::int64_t falling_factorial(std::int64_t n, std::int64_t k);

/// Leading weight Gramians (gamma_0, ..., gamma_{m-1}) of one spectral atom.
struct GammaSequence {
  std::vector<double> values;

  /// gamma_0 == 1 exactly and every value positive and finite.
  void validate() const;
  /// gamma = (1, xi_0^2, xi_0^2 xi_1^2, ...).
  static GammaSequence from_weights(const std::vector<double>& xi);
};

/// W(n) = sum_k coeffs[k] (n)_k with coeffs[k] = (Delta^k gamma)_0 / k!,
/// returning the stored nodes exactly for n < m. Differences within the
/// floating-point roundoff of their computation are set to zero.
class NewtonExtension {
 public:
  NewtonExtension(GammaSequence gamma, std::size_t m);

  std::size_t m() const noexcept { return gamma_.values.size(); }
  const std::vector<double>& newton_coeffs() const noexcept { return coeffs_; }
  const GammaSequence& gamma() const noexcept { return gamma_; }

  double operator()(std::int64_t n) const;
  /// Newton form evaluated at n, without the node override.
  double polynomial(double n) const;
  /// The same polynomial in monomial form with exact rational coefficients.
  RationalPolynomial exact_polynomial() const;

 private:
  GammaSequence gamma_;
  std::vector<double> coeffs_;
};

NewtonExtension newton_extend(const GammaSequence& g, std::size_t m);

struct PositivityResult {
  bool ok = false;
  std::optional<std::int64_t> witness;
};

/// Decides W(n) > 0 for every n >= 0 exactly from the Newton coefficients.
PositivityResult positivity_horizon(const NewtonExtension& w);
PositivityResult positivity_horizon(const std::vector<double>& newton_coeffs);

struct PolynomialAtom {
  Index eigvector_index = 0;
  std::vector<double> newton_coeffs;
};

struct PolynomialFamily {
  std::size_t m = 0;
  std::vector<PolynomialAtom> atoms;
};

/// S_n = U diag(sqrt(W(n+1,x) / W(n,x))) U*.
class WeightGenerator {
 public:
  WeightGenerator(ComplexMatrix basis, std::vector<NewtonExtension> atoms);

  Index d() const noexcept { return basis_.rows(); }
  std::size_t m() const noexcept { return atoms_.front().m(); }
  const ComplexMatrix& basis() const noexcept { return basis_; }
  const std::vector<NewtonExtension>& atoms() const noexcept { return atoms_; }
  PolynomialFamily family() const;

  ComplexMatrix weight(std::int64_t n) const;
  /// Shift prefix with N sites (weights S_0..S_{N-2}).
  ShiftSpec materialize(Index N) const;

  /// (C, c): sup and inf of W(n+1,x)/W(n,x) over n <= horizon, every atom,
  /// and the limit 1 as n grows.
  std::pair<double, double> ratio_bounds(std::int64_t horizon = 64) const;

 private:
  ComplexMatrix basis_;
  std::vector<NewtonExtension> atoms_;
};

/// Scalar completion from the initial weights xi_0..xi_{m-2}. Throws
/// CompletionInfeasible carrying the first n with W(n) <= 0.
WeightGenerator complete_scalar(const std::vector<double>& xi, std::size_t m);

/// Completion for positive, pairwise commuting initial weights S_0..S_{m-2}.
WeightGenerator complete_operator(const std::vector<ComplexMatrix>& initial, std::size_t m,
                                  const ToleranceConfig& tol = {}, std::uint64_t seed = 0x5eed);

/// max_{n <= horizon} ||a.weight(n) - b.weight(n)||.
double verify_uniqueness(const WeightGenerator& a, const WeightGenerator& b, std::int64_t horizon);

/// Recovers the per-atom Newton coefficients from a stored shift prefix.
/// Throws NotMIsometric when the m-th differences of gamma do not vanish.
PolynomialFamily recover_family(const ShiftSpec& spec, std::size_t m, const ToleranceConfig& tol = {},
                                std::uint64_t seed = 0x5eed);

}  // namespace mwold
