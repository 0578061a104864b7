#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mwold {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every verdict in the library.
///
/// `tol_rank` is a singular-value cutoff relative to the largest singular
/// value (or to an explicit reference norm). `tol_orth` bounds the departure
/// of a frame from orthonormality. `tol_identity` bounds spectral-norm
/// residuals of identities under test.
struct ToleranceConfig {
  double tol_rank = 1e-10;
  double tol_orth = 1e-10;
  double tol_identity = 1e-9;

  /// Throws ArgumentError unless every field lies in (0, 1).
  void validate() const;
};

/// Largest singular value. Zero for empty matrices.
double spectral_norm(const ComplexMatrix& m);

ComplexMatrix adjoint(const ComplexMatrix& m);

/// True if every entry is finite.
bool all_finite(const ComplexMatrix& m);

/// A closed subspace of C^n held as an orthonormal frame (n x r).
class Subspace {
 public:
  /// The zero subspace of C^ambient_dim.
  explicit Subspace(Index ambient_dim = 0);

  /// Wraps a frame whose columns are orthonormal within `tol_orth`;
  /// throws ArgumentError otherwise.
  Subspace(ComplexMatrix frame, double tol_orth);

  static Subspace full(Index ambient_dim);
  /// Span of the listed coordinate axes.
  static Subspace coordinate(Index ambient_dim, std::span<const Index> axes);

  Index ambient_dim() const noexcept { return ambient_; }
  Index dim() const noexcept { return frame_.cols(); }
  const ComplexMatrix& frame() const noexcept { return frame_; }

 private:
  Index ambient_;
  ComplexMatrix frame_;
};

/// Numerical null space: right singular vectors with sigma <= tol_rank * ref,
/// where ref is the largest singular value unless `reference_norm` is given.
Subspace kernel(const ComplexMatrix& m, const ToleranceConfig& tol,
                std::optional<double> reference_norm = std::nullopt);

/// Column space at the numerical rank fixed by tol_rank.
Subspace range(const ComplexMatrix& m, const ToleranceConfig& tol,
               std::optional<double> reference_norm = std::nullopt);

/// Numerical rank under the same cutoff as kernel/range.
Index numerical_rank(const ComplexMatrix& m, const ToleranceConfig& tol,
                     std::optional<double> reference_norm = std::nullopt);

Subspace subspace_intersection(const Subspace& a, const Subspace& b, const ToleranceConfig& tol);

/// Closed span of a family of subspaces of a common ambient space.
Subspace subspace_span(std::span<const Subspace> parts, const ToleranceConfig& tol);

ComplexMatrix orthogonal_projection(const Subspace& s);

/// max(||(I - P_b) F_a||, ||(I - P_a) F_b||). Zero iff the spans coincide.
double span_residual(const Subspace& a, const Subspace& b);

/// ||P_a P_b||, the cosine of the smallest principal angle.
double projector_product_norm(const Subspace& a, const Subspace& b);

struct JointDiagonalization {
  ComplexMatrix unitary;
  /// spectra[j][x] = <u_x, mats[j] u_x> for the x-th common eigenvector u_x.
  std::vector<std::vector<double>> spectra;
};

/// Common eigenbasis of pairwise commuting Hermitian matrices.
///
/// Diagonalizes a random real combination of the inputs and accepts the basis
/// once every input is diagonal in it; a fresh combination is drawn up to
/// three more times. Throws PreconditionError for non-Hermitian input and
/// CommutatorError for a non-commuting pair.
JointDiagonalization joint_diagonalize(std::span<const ComplexMatrix> mats, const ToleranceConfig& tol,
                                       std::uint64_t seed = 0x5eed);

/// Haar-distributed unitary of size n.
ComplexMatrix random_unitary(Index n, std::uint64_t seed);

}  // namespace mwold
