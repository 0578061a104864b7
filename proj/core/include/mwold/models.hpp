#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mwold/exact.hpp"
#include "mwold/graphops.hpp"
#include "mwold/operators.hpp"

namespace mwold::models {

/// Scalar shift with S_n = sqrt(s(n+1)/s(n)) on N sites; s must be positive on 0..N-1.
ShiftSpec polynomial_shift(const std::vector<double>& s_coeffs, Index N);

/// Same weights from an arbitrary positive sequence s(n).
ShiftSpec ratio_shift(const std::function<double(Index)>& s, Index N);

/// W(n) = 1 + n: S_n = sqrt((n+2)/(n+1)).
ShiftSpec dirichlet_shift(Index N);

/// Unweighted truncated shift with fiber C^d.
ShiftSpec unweighted_shift(Index N, Index d = 1);

/// Operator on l^2 truncated to N coordinates: the first two coordinates are
/// mixed by a rotation, the rest is the scalar shift with weights
/// s_n = sqrt(s(n+1)/s(n)). Ker T* is spanned by (i, 1, 0, ...).
FiniteOperator rotation_mixed_shift(const std::vector<double>& s_coeffs, Index N);

/// Shift whose weights are U diag(sqrt(W_x(n+1)/W_x(n))) U* for per-atom
/// polynomials W_x (ascending monomial coefficients, W_x(0) = 1).
ShiftSpec operator_polynomial_shift(const std::vector<std::vector<double>>& atom_polys, const ComplexMatrix& basis,
                                    Index N);

/// 2x2 unitary (1/sqrt 2) [[1, 1], [1, -1]].
ComplexMatrix hadamard();

/// kappa = eta = 1, w(j) = a j + b, mu(x_1) = (a+b)^2 / a.
OneCircuitGraph linear_branch_graph(const Rational& a, const Rational& b);
/// Same branch with an explicit circuit measure.
OneCircuitGraph linear_branch_graph(const Rational& a, const Rational& b, const Rational& circuit_measure);

/// kappa = eta = 1, mu(x_{1,j}) = 2^j for j <= length, mu(x_1) = 2.
OneCircuitGraph geometric_graph(Index length);

/// kappa = eta = 1, constant branch measure c and circuit measure mu1.
OneCircuitGraph constant_measure_graph(const Rational& c, const Rational& mu1);

/// Unitary on C^d, diagonal with the given phases, as an explicit operator.
FiniteOperator diagonal_unitary(const std::vector<double>& phases);

/// A named member of the verification corpus with the expected m.
struct CorpusEntry {
  std::string name;
  FiniteOperator op;
  Index m = 2;
  bool is_shift = false;
};

/// Shifts, composition truncations, and negative controls used by the
/// Wold-type agreement checks.
std::vector<CorpusEntry> wold_corpus(std::uint64_t seed = 7);

}  // namespace mwold::models
