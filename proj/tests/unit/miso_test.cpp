#include <gtest/gtest.h>

#include <cmath>

#include "mwold/errors.hpp"
#include "mwold/graphops.hpp"
#include "mwold/miso.hpp"
#include "mwold/models.hpp"
#include "oracles.hpp"

namespace mwold {
namespace {

using testing::Gen;

FiniteOperator shift_of(const ShiftSpec& s) { return assemble_shift(s); }

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(5, 0), 1.0);
  EXPECT_EQ(binomial(5, 2), 10.0);
  EXPECT_EQ(binomial(6, 3), 20.0);
  for (Index m = 0; m < 12; ++m)
    for (Index p = 0; p <= m; ++p) EXPECT_EQ(binomial(m, p), testing::pascal(m, p));
}

TEST(Defect, MatchesNaiveOracle) {
  Gen gen(1);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = gen.count(1, 10);
    const FiniteOperator t = FiniteOperator::explicit_matrix(gen.matrix(n, n));
    for (Index m = 1; m <= 4; ++m) {
      const ComplexMatrix oracle = testing::naive_defect(t.matrix, m);
      EXPECT_LE(spectral_norm(defect(t, m) - oracle), 1e-11 * (1 + spectral_norm(oracle)));
    }
  }
  EXPECT_THROW(defect(FiniteOperator::explicit_matrix(ComplexMatrix::Identity(2, 2)), 0), ArgumentError);
}

// Δ_{m+1} = Δ_m - T* Δ_m T, the Pascal-rule recursion of the defect.
TEST(Defect, SuccessorRecursion) {
  Gen gen(50);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = gen.count(1, 12);
    const FiniteOperator t = FiniteOperator::explicit_matrix(gen.matrix(n, n) / std::sqrt(static_cast<double>(n)));
    for (Index m = 1; m <= 4; ++m) {
      const ComplexMatrix dm = defect(t, m);
      const ComplexMatrix next = dm - t.matrix.adjoint() * dm * t.matrix;
      EXPECT_LE(spectral_norm(defect(t, m + 1) - next), 1e-12 * (1 + spectral_norm(dm)));
      // The reversed-sign form T* Δ_m T - Δ_m is exactly -Δ_{m+1}.
      EXPECT_LE(spectral_norm(t.matrix.adjoint() * dm * t.matrix - dm + defect(t, m + 1)), 1e-12 * (1 + spectral_norm(dm)));
    }
  }
}

TEST(Defect, Examples) {
  const FiniteOperator u = FiniteOperator::explicit_matrix(random_unitary(5, 2));
  EXPECT_LE(spectral_norm(defect(u, 1)), 1e-13);

  const FiniteOperator dir = shift_of(models::dirichlet_shift(10));
  const DefectReport two = is_m_isometry(dir, 2);
  EXPECT_EQ(two.support_bound, 7);
  EXPECT_LE(two.residual_norm, 1e-10);
  EXPECT_NEAR(defect(dir, 1)(0, 0).real(), -1.0, 1e-14);
}

TEST(IsMIsometry, Examples) {
  const ToleranceConfig tol;
  const FiniteOperator plain = shift_of(models::unweighted_shift(9));
  for (Index m = 1; m <= 4; ++m) EXPECT_TRUE(is_m_isometry(plain, m, tol).verdict) << m;

  const FiniteOperator sq = shift_of(models::polynomial_shift({1, 2, 1}, 12));
  EXPECT_TRUE(is_m_isometry(sq, 3, tol).verdict);
  const DefectReport two = is_m_isometry(sq, 2, tol);
  EXPECT_FALSE(two.verdict);
  ASSERT_FALSE(two.per_site.empty());
  EXPECT_EQ(two.per_site.front().first, 0);
  EXPECT_NEAR(two.per_site.front().second, 2.0, 1e-12);

  const FiniteOperator rot = models::rotation_mixed_shift({1, 1, 1}, 12);
  EXPECT_LE(is_m_isometry(rot, 3, tol).residual_norm, 1e-10);

  const OneCircuitGraph g = models::linear_branch_graph(1, 1);
  EXPECT_LE(is_m_isometry(assemble_composition(g, 8), 3, tol).residual_norm, 1e-10);
}

TEST(IsMIsometry, RefusesBoundsInsideTruncationEdge) {
  const FiniteOperator dir = shift_of(models::dirichlet_shift(8));
  EXPECT_THROW(is_m_isometry(dir, 2, {}, 6), PreconditionError);
  EXPECT_NO_THROW(is_m_isometry(dir, 2, {}, 3));
}

TEST(IsStrict, HysteresisBand) {
  const ToleranceConfig tol;
  EXPECT_TRUE(is_strict_m_isometry(shift_of(models::dirichlet_shift(12)), 2, tol));
  EXPECT_TRUE(is_strict_m_isometry(shift_of(models::polynomial_shift({1, 2, 1}, 12)), 3, tol));
  EXPECT_FALSE(is_strict_m_isometry(shift_of(models::unweighted_shift(12)), 2, tol));
  EXPECT_FALSE(is_strict_m_isometry(shift_of(models::dirichlet_shift(12)), 3, tol));
}

TEST(ShiftSiteDefect, Examples) {
  const ShiftSpec ones = models::unweighted_shift(8, 2);
  for (Index m = 1; m <= 3; ++m)
    for (Index s = 0; s + m < 8; ++s) EXPECT_TRUE(shift_site_defect(ones, m, s).isZero(0.0));

  const ShiftSpec dir = models::dirichlet_shift(8);
  EXPECT_NEAR(shift_site_defect(dir, 2, 0)(0, 0).real(), 0.0, 1e-14);
  EXPECT_NEAR(shift_site_defect(dir, 1, 0)(0, 0).real(), -1.0, 1e-14);
  EXPECT_THROW(shift_site_defect(dir, 3, 6), PreconditionError);
}

// Property: the global defect compressed to a safe site equals the per-site
// block, for random operator-valued shifts.
TEST(ShiftSiteDefect, AgreesWithGlobalDefect) {
  Gen gen(21);
  for (int trial = 0; trial < 15; ++trial) {
    ShiftSpec spec;
    spec.d = gen.count(1, 3);
    spec.N = gen.count(5, 9);
    for (Index n = 0; n + 1 < spec.N; ++n)
      spec.weights.push_back(gen.matrix(spec.d, spec.d) + 2.0 * ComplexMatrix::Identity(spec.d, spec.d));
    const FiniteOperator t = assemble_shift(spec);
    for (Index m = 1; m <= 3; ++m) {
      const ComplexMatrix global = defect(t, m);
      for (Index s = 0; s <= spec.N - 1 - m; ++s) {
        const ComplexMatrix block = global.block(s * spec.d, s * spec.d, spec.d, spec.d);
        EXPECT_LE(spectral_norm(block - shift_site_defect(spec, m, s)), 1e-12 * (1 + spectral_norm(block)));
        // Safe blocks do not couple to other sites.
        for (Index r = 0; r <= spec.N - 1 - m; ++r)
          if (r != s) EXPECT_LE(spectral_norm(global.block(r * spec.d, s * spec.d, spec.d, spec.d)), 1e-12 * (1 + spectral_norm(block)));
      }
    }
  }
}

TEST(KernelCondition, Examples) {
  const ToleranceConfig tol;
  Gen gen(5);
  ShiftSpec spec;
  spec.d = 2;
  spec.N = 8;
  for (Index n = 0; n < 7; ++n) spec.weights.push_back(gen.matrix(2, 2) + 2.0 * ComplexMatrix::Identity(2, 2));
  const FiniteOperator t = assemble_shift(spec);
  for (Index k = 1; k <= 6; ++k) EXPECT_TRUE(kernel_condition(t, k, tol).verdict) << k;
  EXPECT_THROW(kernel_condition(t, 8, tol), PreconditionError);

  const FiniteOperator comp = assemble_composition(models::linear_branch_graph(1, 1), 8);
  EXPECT_TRUE(kernel_condition(comp, 1, tol).verdict);
  const KernelConditionReport two = kernel_condition(comp, 2, tol);
  EXPECT_FALSE(two.verdict);
  EXPECT_EQ(two.kernel_dim, 1);

  const FiniteOperator inv = FiniteOperator::explicit_matrix(gen.matrix(4, 4) + 3.0 * ComplexMatrix::Identity(4, 4));
  const KernelConditionReport vac = kernel_condition(inv, 3, tol);
  EXPECT_TRUE(vac.verdict);
  EXPECT_EQ(vac.kernel_dim, 0);
}

// Property: kernel-condition verdicts and leakages are invariant under unitary
// conjugation. Unitaries act inside each level set so the truncation
// bookkeeping carries over.
TEST(KernelCondition, UnitaryInvariance) {
  const ToleranceConfig tol;
  Gen gen(17);
  const auto corpus = models::wold_corpus();
  for (int trial = 0; trial < 20; ++trial) {
    const auto& entry = corpus[static_cast<std::size_t>(gen.count(0, static_cast<Index>(corpus.size()) - 1))];
    const ComplexMatrix u = testing::level_unitary(entry.op.levels, gen);
    const FiniteOperator c = conjugate(entry.op, u, tol);
    ASSERT_EQ(c.exact_support, entry.op.exact_support);
    const Index k = entry.m - 1;
    const auto a = kernel_condition(entry.op, k, tol);
    const auto b = kernel_condition(c, k, tol);
    EXPECT_EQ(a.verdict, b.verdict) << entry.name;
    ASSERT_EQ(a.per_level.size(), b.per_level.size());
    for (std::size_t i = 0; i < a.per_level.size(); ++i) EXPECT_NEAR(a.per_level[i].second, b.per_level[i].second, 1e-9);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = gen.count(3, 8);
    ComplexMatrix m = gen.low_rank(n, n, n - 1);
    const FiniteOperator t = FiniteOperator::explicit_matrix(m);
    const FiniteOperator c = conjugate(t, gen.unitary(n), tol);
    EXPECT_EQ(kernel_condition(t, 2, tol).verdict, kernel_condition(c, 2, tol).verdict);
  }
}

// Property: on the corpus, an m-isometry with the (m-1)-kernel condition also
// satisfies the k-kernel condition for all admissible k.
TEST(KernelCondition, PropagatesUpward) {
  const ToleranceConfig tol;
  for (const auto& entry : models::wold_corpus()) {
    if (!entry.op.exact_support) continue;
    if (!is_m_isometry(entry.op, entry.m, tol).verdict) continue;
    if (!kernel_condition(entry.op, entry.m - 1, tol).verdict) continue;
    const Index base = support_level(entry.op, adjoint_kernel(entry.op, tol));
    for (Index k = entry.m; k + base <= *entry.op.exact_support + 1 && k <= entry.op.size() - 1 - entry.m; ++k)
      EXPECT_TRUE(kernel_condition(entry.op, k, tol).verdict) << entry.name << " k=" << k;
  }
}

TEST(KernelTower, Examples) {
  const ToleranceConfig tol;
  for (const auto& [n, r] : kernel_tower_check(shift_of(models::unweighted_shift(8)), 3, tol)) EXPECT_EQ(r, 0.0) << n;
  for (const auto& [n, r] : kernel_tower_check(shift_of(models::dirichlet_shift(10)), 4, tol)) EXPECT_LE(r, 1e-10) << n;
  const auto comp = kernel_tower_check(assemble_composition(models::linear_branch_graph(1, 1), 8), 3, tol);
  EXPECT_EQ(comp.size(), 3u);
}

TEST(GramianRecurrence, Examples) {
  const ToleranceConfig tol;
  EXPECT_LE(gramian_recurrence_check(shift_of(models::unweighted_shift(8)), 1, 2, tol), 1e-14);
  EXPECT_LE(gramian_recurrence_check(shift_of(models::dirichlet_shift(10)), 2, 3, tol), 1e-10);
  EXPECT_LE(gramian_recurrence_check(shift_of(models::polynomial_shift({1, 2, 1}, 10)), 3, 4, tol), 1e-10);
  EXPECT_GT(gramian_recurrence_check(shift_of(models::polynomial_shift({1, 2, 1}, 10)), 2, 3, tol), 0.1);
}

TEST(Expansive, Examples) {
  const ToleranceConfig tol;
  EXPECT_TRUE(is_expansive(FiniteOperator::explicit_matrix(random_unitary(4, 5)), tol));
  EXPECT_TRUE(is_expansive(shift_of(models::dirichlet_shift(10)), tol));
  ShiftSpec half;
  half.N = 5;
  for (int n = 0; n < 4; ++n) half.weights.push_back(ComplexMatrix::Constant(1, 1, 0.5));
  EXPECT_FALSE(is_expansive(shift_of(half), tol));
  EXPECT_NEAR(expansivity_margin(shift_of(half)), -0.75, 1e-14);
  const FiniteOperator comp = assemble_composition(models::linear_branch_graph(1, 1), 10);
  EXPECT_GE(expansivity_margin(comp), -1e-10);
}

}  // namespace
}  // namespace mwold
