#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mwold/linalg.hpp"

namespace mwold {

/// Unilateral operator-valued weighted shift on sites 0..N-1 with fiber C^d.
/// weights[n] maps site n to site n+1.
struct ShiftSpec {
  Index d = 1;
  Index N = 0;
  std::vector<ComplexMatrix> weights;
  std::optional<std::pair<double, double>> uniform_bounds;

  /// Checks shapes, finiteness, invertibility and the optional (c, M) bounds.
  void validate(const ToleranceConfig& tol = {}) const;
};

enum class Provenance { ShiftTruncation, CompositionTruncation, Explicit };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// A square matrix standing for an operator on a finite truncation.
///
/// `levels[i]` is the site (distance from the root of the model) of basis
/// vector i. Identities that use at most m forward powers are exact on basis
/// vectors with level <= exact_support + 1 - m. `exact_support` is empty when
/// the matrix is not a truncation of anything larger.
struct FiniteOperator {
  ComplexMatrix matrix;
  Provenance provenance = Provenance::Explicit;
  std::optional<Index> exact_support;
  std::vector<Index> levels;

  Index size() const noexcept { return matrix.rows(); }

  /// Throws ArgumentError unless the matrix is square, finite, and the level
  /// bookkeeping is consistent.
  void validate() const;

  /// Wraps a matrix with no truncation information (every level 0).
  static FiniteOperator explicit_matrix(ComplexMatrix m);

  /// Default support bound for identities using m forward powers:
  /// exact_support + 1 - m, or the largest level when no truncation is recorded.
  Index default_support_bound(Index m) const;

  /// Basis indices whose level is <= bound.
  std::vector<Index> safe_indices(Index bound) const;
  /// Coordinate subspace on safe_indices(bound).
  Subspace safe_subspace(Index bound) const;
  Index max_level() const;
};

FiniteOperator assemble_shift(const ShiftSpec& spec, const ToleranceConfig& tol = {});

/// (T^k)* T^k; identity for k = 0.
ComplexMatrix bracket(const FiniteOperator& t, Index k);
ComplexMatrix matrix_power(const ComplexMatrix& m, Index k);

/// Compression frame* T frame onto a reducing subspace. Each new basis
/// vector inherits the largest level in the support of its frame column.
FiniteOperator restrict_to(const FiniteOperator& t, const Subspace& m, const ToleranceConfig& tol = {});

/// Max of ||(I-P) T P|| and ||(I-P) T* P||.
double reducing_residual(const ComplexMatrix& t, const Subspace& m);

/// U T U*. The result is Explicit unless U preserves every level set.
FiniteOperator conjugate(const FiniteOperator& t, const ComplexMatrix& u, const ToleranceConfig& tol = {});

/// Block diagonal A (+) B with concatenated levels.
FiniteOperator direct_sum(const FiniteOperator& a, const FiniteOperator& b);

}  // namespace mwold
