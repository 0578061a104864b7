#include <gtest/gtest.h>

#include <array>

#include "mwold/errors.hpp"
#include "mwold/linalg.hpp"
#include "oracles.hpp"

namespace mwold {
namespace {

using testing::Gen;

ComplexMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  ComplexMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

Subspace axes(Index n, std::vector<Index> ids) { return Subspace::coordinate(n, ids); }

TEST(Tolerance, RejectsOutOfRange) {
  ToleranceConfig tol;
  EXPECT_NO_THROW(tol.validate());
  tol.tol_rank = 0.0;
  EXPECT_THROW(tol.validate(), ArgumentError);
  tol = {};
  tol.tol_identity = 1.5;
  EXPECT_THROW(tol.validate(), ArgumentError);
}

TEST(Adjoint, ConjugateTranspose) {
  ComplexMatrix a(1, 1);
  a(0, 0) = Complex(0, 1);
  EXPECT_EQ(adjoint(a)(0, 0), Complex(0, -1));
  EXPECT_TRUE(adjoint(ComplexMatrix::Identity(4, 4)).isIdentity());
  EXPECT_EQ(adjoint(real_matrix({{0, 1}, {0, 0}})), real_matrix({{0, 0}, {1, 0}}));
}

TEST(SpectralNorm, MatchesEigenOracle) {
  Gen gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = gen.matrix(gen.count(1, 9), gen.count(1, 9));
    EXPECT_NEAR(spectral_norm(m), testing::spectral(m), 1e-12 * (1 + testing::spectral(m)));
  }
  EXPECT_EQ(spectral_norm(ComplexMatrix(0, 0)), 0.0);
}

TEST(Subspace, RejectsNonOrthonormalFrame) {
  EXPECT_THROW(Subspace(real_matrix({{1, 1}, {0, 1}}), 1e-10), ArgumentError);
  EXPECT_EQ(Subspace(real_matrix({{1}, {0}}), 1e-10).dim(), 1);
}

TEST(Kernel, Examples) {
  const ToleranceConfig tol;
  const Subspace k = kernel(real_matrix({{1, 0}, {0, 0}}), tol);
  ASSERT_EQ(k.dim(), 1);
  EXPECT_LT(span_residual(k, axes(2, {1})), 1e-12);

  EXPECT_EQ(kernel(real_matrix({{2, 1, 0}, {0, 3, 1}, {1, 0, 4}}), tol).dim(), 0);

  ComplexMatrix shift = ComplexMatrix::Zero(5, 5);
  for (Index i = 0; i + 1 < 5; ++i) shift(i + 1, i) = 1.0;
  const Subspace ks = kernel(shift.adjoint(), tol);
  ASSERT_EQ(ks.dim(), 1);
  EXPECT_LT(span_residual(ks, axes(5, {0})), 1e-12);
}

TEST(Range, Examples) {
  const ToleranceConfig tol;
  EXPECT_EQ(range(ComplexMatrix::Zero(3, 3), tol).dim(), 0);
  EXPECT_EQ(range(ComplexMatrix::Identity(4, 4), tol).dim(), 4);

  Gen gen(3);
  const ComplexVector u = gen.matrix(5, 1).col(0);
  const ComplexVector v = gen.matrix(4, 1).col(0);
  const Subspace r = range(u * v.adjoint(), tol);
  ASSERT_EQ(r.dim(), 1);
  EXPECT_LT(span_residual(r, Subspace(u / u.norm(), 1e-10)), 1e-12);
}

TEST(Intersection, Examples) {
  const ToleranceConfig tol;
  const Subspace a = axes(3, {0, 1});
  EXPECT_LT(span_residual(subspace_intersection(a, a, tol), a), 1e-12);
  EXPECT_EQ(subspace_intersection(axes(3, {0}), axes(3, {1}), tol).dim(), 0);
  const Subspace i = subspace_intersection(a, axes(3, {1, 2}), tol);
  ASSERT_EQ(i.dim(), 1);
  EXPECT_LT(span_residual(i, axes(3, {1})), 1e-12);
  EXPECT_THROW(subspace_intersection(axes(3, {0}), axes(4, {0}), tol), ArgumentError);
}

TEST(Projection, Examples) {
  EXPECT_TRUE(orthogonal_projection(Subspace::full(3)).isIdentity(1e-14));
  EXPECT_TRUE(orthogonal_projection(Subspace(3)).isZero());
  ComplexMatrix v(2, 1);
  v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const ComplexMatrix p = orthogonal_projection(Subspace(v, 1e-10));
  EXPECT_TRUE(p.isApprox(real_matrix({{.5, .5}, {.5, .5}}), 1e-14));
}

TEST(JointDiagonalize, Examples) {
  const ToleranceConfig tol;
  const std::array<ComplexMatrix, 2> diag{real_matrix({{1, 0}, {0, 2}}), real_matrix({{5, 0}, {0, 7}})};
  const JointDiagonalization d = joint_diagonalize(diag, tol);
  for (std::size_t j = 0; j < diag.size(); ++j) {
    const ComplexMatrix rebuilt =
        d.unitary * Eigen::VectorXd::Map(d.spectra[j].data(), 2).cast<Complex>().asDiagonal() * d.unitary.adjoint();
    EXPECT_LT(testing::spectral(rebuilt - diag[j]), 1e-12);
  }

  const std::array<ComplexMatrix, 1> one{real_matrix({{2, 1}, {1, 2}})};
  auto s = joint_diagonalize(one, tol).spectra[0];
  std::sort(s.begin(), s.end());
  EXPECT_NEAR(s[0], 1.0, 1e-12);
  EXPECT_NEAR(s[1], 3.0, 1e-12);

  Gen gen(5);
  const ComplexMatrix a = gen.hermitian(4);
  const std::array<ComplexMatrix, 2> pair{a, a * a};
  const JointDiagonalization p = joint_diagonalize(pair, tol);
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(p.spectra[1][x], p.spectra[0][x] * p.spectra[0][x], 1e-10);
}

TEST(JointDiagonalize, Errors) {
  const ToleranceConfig tol;
  const std::array<ComplexMatrix, 1> nonherm{real_matrix({{1, 2}, {0, 1}})};
  EXPECT_THROW(joint_diagonalize(nonherm, tol), PreconditionError);
  const std::array<ComplexMatrix, 2> noncommuting{real_matrix({{1, 0}, {0, -1}}), real_matrix({{0, 1}, {1, 0}})};
  try {
    joint_diagonalize(noncommuting, tol);
    FAIL() << "expected CommutatorError";
  } catch (const CommutatorError& e) {
    EXPECT_EQ(e.first(), 0u);
    EXPECT_EQ(e.second(), 1u);
    EXPECT_NEAR(e.commutator_norm(), 2.0, 1e-12);
  }
}

// Property: Ker M is orthogonal to Rng M*, rank-nullity holds, and the LU
// oracle sees the same nullity.
TEST(LinalgProperty, KernelRangeDuality) {
  const ToleranceConfig tol;
  Gen gen(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Index rows = gen.count(1, 12);
    const Index cols = gen.count(1, 12);
    const Index r = gen.count(0, std::min(rows, cols));
    const ComplexMatrix m = gen.low_rank(rows, cols, r);
    const Subspace ker = kernel(m, tol);
    const Subspace rng_adj = range(m.adjoint(), tol);
    EXPECT_LE(projector_product_norm(ker, rng_adj), 10 * tol.tol_identity);
    EXPECT_EQ(ker.dim() + range(m, tol).dim(), cols);
    EXPECT_EQ(ker.dim(), cols - r);
    EXPECT_EQ(ker.dim(), testing::lu_nullity(m));
    if (ker.dim() > 0) {
      EXPECT_LE(spectral_norm(m * ker.frame()), tol.tol_identity);
    }
  }
}

TEST(LinalgProperty, ProjectionIdempotentAndIntersectionSymmetric) {
  const ToleranceConfig tol;
  Gen gen(77);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = gen.count(2, 10);
    const Subspace a = range(gen.low_rank(n, n, gen.count(1, n)), tol);
    const Subspace b = range(gen.low_rank(n, n, gen.count(1, n)), tol);
    const ComplexMatrix p = orthogonal_projection(a);
    EXPECT_LE(spectral_norm(p * p - p), tol.tol_identity);
    const Subspace ab = subspace_intersection(a, b, tol);
    const Subspace ba = subspace_intersection(b, a, tol);
    EXPECT_EQ(ab.dim(), ba.dim());
    EXPECT_LE(span_residual(ab, ba), 1e-9);
    // dim(A ∩ B) = dim A + dim B - dim(A + B).
    const std::array<Subspace, 2> parts{a, b};
    EXPECT_EQ(ab.dim(), a.dim() + b.dim() - subspace_span(parts, tol).dim());
  }
}

TEST(LinalgProperty, JointDiagonalizationReconstructs) {
  const ToleranceConfig tol;
  Gen gen(31);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = gen.count(1, 6);
    const ComplexMatrix u = gen.unitary(n);
    std::vector<ComplexMatrix> mats;
    for (Index j = 0; j < gen.count(1, 3); ++j) {
      Eigen::VectorXd d(n);
      for (Index i = 0; i < n; ++i) d(i) = static_cast<double>(gen.count(1, 3));
      mats.push_back(u * d.cast<Complex>().asDiagonal() * u.adjoint());
    }
    const JointDiagonalization jd = joint_diagonalize(mats, tol, static_cast<std::uint64_t>(trial));
    EXPECT_LE(spectral_norm(jd.unitary.adjoint() * jd.unitary - ComplexMatrix::Identity(n, n)), 1e-10);
    for (std::size_t j = 0; j < mats.size(); ++j) {
      const ComplexMatrix rebuilt =
          jd.unitary * Eigen::VectorXd::Map(jd.spectra[j].data(), n).cast<Complex>().asDiagonal() * jd.unitary.adjoint();
      EXPECT_LE(spectral_norm(rebuilt - mats[j]), 10 * tol.tol_identity);
    }
  }
}

TEST(RandomUnitary, IsUnitaryAndSeeded) {
  const ComplexMatrix u = random_unitary(6, 9);
  EXPECT_LE(spectral_norm(u.adjoint() * u - ComplexMatrix::Identity(6, 6)), 1e-12);
  EXPECT_EQ(u, random_unitary(6, 9));
  EXPECT_NE(u, random_unitary(6, 10));
}

}  // namespace
}  // namespace mwold
