#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mwold/exact.hpp"
#include "mwold/linalg.hpp"
#include "mwold/operators.hpp"

namespace mwold {

/// A point of a one-circuit graph: circuit(i), 1 <= i <= kappa, or
/// branch(i, j), 1 <= i <= eta, j >= 1.
struct GraphPoint {
  enum class Kind { Circuit, Branch };
  Kind kind = Kind::Circuit;
  Index i = 1;
  Index j = 0;

  static GraphPoint circuit(Index i) { return {Kind::Circuit, i, 0}; }
  static GraphPoint branch(Index i, Index j) { return {Kind::Branch, i, j}; }

  bool is_circuit() const noexcept { return kind == Kind::Circuit; }
  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;
  /// Circuit points first by index, then branch points by (i, j).
  friend bool operator<(const GraphPoint& a, const GraphPoint& b);
};

std::string to_string(const GraphPoint& p);

/// Measure data for one branch: either polynomial coefficients w(j) in
/// ascending powers, or an explicit prefix mu(x_{i,1}), mu(x_{i,2}), ...
struct BranchMeasure {
  std::optional<RationalPolynomial> poly;
  std::vector<Rational> values;

  static BranchMeasure polynomial(std::vector<Rational> coeffs);
  static BranchMeasure explicit_values(std::vector<Rational> values);

  bool is_polynomial() const noexcept { return poly.has_value(); }
  /// Number of known points; empty for polynomial data.
  std::optional<Index> length() const;
  Rational at(Index j) const;
};

struct OneCircuitGraph {
  Index kappa = 1;
  std::vector<Rational> circuit_measures;
  std::vector<BranchMeasure> branches;

  Index eta() const noexcept { return static_cast<Index>(branches.size()); }

  /// Positivity of every measure; polynomial branches are checked on all of N.
  void validate() const;
  void check_point(const GraphPoint& p) const;
  Rational mu(const GraphPoint& p) const;
  /// Shortest explicit branch prefix, or empty when every branch is polynomial.
  std::optional<Index> known_depth() const;
};

GraphPoint phi(const OneCircuitGraph& g, const GraphPoint& p);

/// {z : phi^i(z) = p}, sorted.
std::vector<GraphPoint> preimage(const OneCircuitGraph& g, const GraphPoint& p, Index i);

/// h(p) = mu(phi^{-1}({p})) / mu(p).
Rational h_value(const OneCircuitGraph& g, const GraphPoint& p);

struct HViolation {
  Index i = 0;
  GraphPoint target;
  GraphPoint first;
  GraphPoint second;
  Rational h_first;
  Rational h_second;
};

struct GraphKernelReport {
  Index k = 0;
  bool verdict = true;
  std::vector<HViolation> violations;
  /// Smallest h over the probe set; positive h keeps C_phi bounded below there.
  Rational min_h;
};

/// k-kernel condition via constancy of h on i-fold preimages, i <= k.
GraphKernelReport kernel_condition_graph(const OneCircuitGraph& g, Index k);

struct BranchFit {
  /// Monomial coefficients of the degree <= m-2 interpolant through j = 1..m-1.
  RationalPolynomial fitted;
  bool matches = false;
  /// First j where the data leaves the fitted polynomial.
  std::optional<Index> mismatch_at;
};

struct GraphMIsometryReport {
  Index m = 0;
  bool verdict = false;
  std::vector<BranchFit> branches;
};

/// m-isometry criterion for kappa = 1: every branch measure is a polynomial of
/// degree at most m-2 in j.
GraphMIsometryReport is_m_isometry_graph(const OneCircuitGraph& g, Index m);

/// Parameters (a, b) of a model with kappa = eta = 1, w(j) = a j + b, a, b > 0
/// and mu(x_1) = (a+b)^2 / a. Throws PreconditionError for any other graph.
std::pair<Rational, Rational> linear_branch_parameters(const OneCircuitGraph& g);

/// <f, g> for f in M_k, g in M_l with f(x_1) = 1 = g(x_1), exactly.
Rational mk_inner_product_exact(const OneCircuitGraph& g, Index k, Index l);

enum class ArithmeticMode { Exact, Float };

Complex mk_inner_product(const OneCircuitGraph& g, Index k, Index l, Complex scale_f, Complex scale_g,
                         ArithmeticMode mode = ArithmeticMode::Exact);

/// Index of a point in the truncation basis: circuit points first, then
/// branch i occupying a block of J consecutive indices.
Index point_index(const OneCircuitGraph& g, Index J, const GraphPoint& p);
GraphPoint point_at(const OneCircuitGraph& g, Index J, Index index);

/// Truncation of C_phi to circuit points and branch points with j <= J, in the
/// orthonormal basis chi_y / sqrt(mu(y)).
FiniteOperator assemble_composition(const OneCircuitGraph& g, Index J);

/// Orthonormal coordinates of the canonical element of M_k (f(x_1) = 1) in the
/// truncation basis. Requires k + 1 <= J.
ComplexVector mk_closed_form_vector(const OneCircuitGraph& g, Index k, Index J);

}  // namespace mwold
