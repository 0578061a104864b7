// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mwold/completion.hpp"
#include "mwold/errors.hpp"
#include "mwold/graphops.hpp"
#include "mwold/miso.hpp"
#include "mwold/models.hpp"
#include "mwold/operators.hpp"
#include "mwold/wold.hpp"

namespace {

using namespace mwold;

constexpr double kExactTol = 1e-12;
constexpr double kVerdictTol = 1e-9;
constexpr double kUniquenessTol = 1e-10;
constexpr double kExpansiveTol = 1e-10;
constexpr double kFastBudgetSeconds = 1.0;
constexpr double kCorpusBudgetSeconds = 30.0;
constexpr Index kSiteHorizon = 60;
constexpr std::int64_t kWeightPrefix = 20;
constexpr std::int64_t kUniquenessHorizon = 32;
constexpr int kRandomOperators = 50;
constexpr Index kMaxRandomDim = 12;
constexpr int kConjugations = 20;
constexpr Index kCompositionJ = 8;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] " << what << "; ";
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

ToleranceConfig verdict_tol() {
  ToleranceConfig tol;
  tol.tol_identity = kVerdictTol;
  return tol;
}

const OneCircuitGraph& linear_graph() {
  static const OneCircuitGraph g = models::linear_branch_graph(Rational(1), Rational(1));
  return g;
}

double max_site_defect(const ShiftSpec& spec, Index m, Index horizon) {
  double worst = 0.0;
  for (Index s = 0; s <= horizon; ++s) worst = std::max(worst, spectral_norm(shift_site_defect(spec, m, s)));
  return worst;
}

ComplexMatrix scaled_random(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix a(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) a(r, c) = Complex(normal(rng), normal(rng));
  return a / spectral_norm(a);
}

void inner_product(Outcome& o) {
  const Rational exact = mk_inner_product_exact(linear_graph(), 2, 3);
  const Complex flt = mk_inner_product(linear_graph(), 2, 3, 1.0, 1.0, ArithmeticMode::Float);
  o.detail << "exact " << exact.str() << ", float " << flt.real() << "; ";
  o.require(exact == Rational(1), "rational inner product equals 1");
  o.require(std::abs(flt - Complex(1.0)) <= kExactTol, "float inner product within 1e-12");
}

void kernel_dichotomy(Outcome& o) {
  const auto k1 = kernel_condition_graph(linear_graph(), 1);
  const auto k2 = kernel_condition_graph(linear_graph(), 2);
  o.require(k1.verdict, "graph k=1 holds");
  o.require(!k2.verdict, "graph k=2 fails");
  if (!k2.violations.empty()) {
    const auto& v = k2.violations.front();
    o.detail << "witness h " << v.h_first.str() << " vs " << v.h_second.str() << "; ";
    o.require(v.h_first == Rational(3, 2) && v.h_second == Rational(4, 3), "witness h-values 3/2 vs 4/3");
  }
  const ToleranceConfig tol = verdict_tol();
  const FiniteOperator t = assemble_composition(linear_graph(), kCompositionJ);
  const auto m1 = kernel_condition(t, 1, tol);
  const auto m2 = kernel_condition(t, 2, tol);
  o.detail << "matrix residuals " << m1.per_level.back().second << ", " << m2.per_level.back().second << "; ";
  o.require(m1.verdict == k1.verdict, "matrix k=1 agrees");
  o.require(m2.verdict == k2.verdict, "matrix k=2 agrees");
}

void site_identities(Outcome& o) {
  const ShiftSpec linear = models::dirichlet_shift(kSiteHorizon + 5);
  const double d2 = max_site_defect(linear, 2, kSiteHorizon);
  const double d3 = max_site_defect(linear, 3, kSiteHorizon);
  const ShiftSpec square = models::polynomial_shift({1, 2, 1}, kSiteHorizon + 5);
  const double site0 = spectral_norm(shift_site_defect(square, 2, 0));
  const double sq3 = max_site_defect(square, 3, kSiteHorizon);
  o.detail << "W=1+n m2 " << d2 << " m3 " << d3 << "; (n+1)^2 site0 m2 " << site0 << " m3 " << sq3 << "; ";
  o.require(d2 <= kExactTol && d3 <= kExactTol, "W=1+n passes m=2,3");
  o.require(std::abs(site0 - 2.0) <= kExactTol, "(n+1)^2 site-0 defect equals 2");
  o.require(sq3 <= kExactTol, "(n+1)^2 passes m=3");
}

void completion(Outcome& o) {
  const WeightGenerator g = complete_scalar({std::sqrt(2.0), std::sqrt(1.5)}, 3);
  const auto& c = g.atoms().front().newton_coeffs();
  o.detail << "newton (" << c[0] << ", " << c[1] << ", " << c[2] << "); ";
  o.require(std::abs(c[0] - 1) <= kExactTol && std::abs(c[1] - 1) <= kExactTol && std::abs(c[2]) <= kExactTol,
            "Newton coefficients (1,1,0)");
  double prefix = 0.0;
  for (std::int64_t n = 0; n <= kWeightPrefix; ++n)
    prefix = std::max(prefix, std::abs(g.weight(n)(0, 0).real() - std::sqrt((n + 2.0) / (n + 1.0))));
  o.require(prefix <= kExactTol, "weight prefix sqrt((n+2)/(n+1))");
  const ShiftSpec spec = g.materialize(kSiteHorizon + 5);
  const PolynomialFamily back = recover_family(spec, 3);
  const auto& r = back.atoms.front().newton_coeffs;
  o.require(std::abs(r[0] - 1) <= kExactTol && std::abs(r[1] - 1) <= kExactTol && std::abs(r[2]) <= kExactTol,
            "recovered family (1,1,0)");
  const double sites = std::max(max_site_defect(spec, 2, kSiteHorizon), max_site_defect(spec, 3, kSiteHorizon));
  o.detail << "prefix err " << prefix << ", site defect " << sites << "; ";
  o.require(sites <= kExactTol, "materialized shift passes site identities");
}

void uniqueness(Outcome& o) {
  const ToleranceConfig tol = verdict_tol();
  const ComplexMatrix h = models::hadamard();
  auto diag = [](double a, double b) { return ComplexMatrix(Eigen::Vector2cd(a, b).asDiagonal()); };
  const std::vector<ComplexMatrix> plain{diag(std::sqrt(2.0), 1.2), diag(std::sqrt(1.5), 1.15)};
  const std::vector<ComplexMatrix> conj{h * plain[0] * h.adjoint(), h * plain[1] * h.adjoint()};
  double worst = 0.0;
  for (const auto* init : {&plain, &conj}) {
    const WeightGenerator a = complete_operator(*init, 3, tol, 1);
    const WeightGenerator b = complete_operator(*init, 3, tol, 0xdecafbad);
    worst = std::max(worst, verify_uniqueness(a, b, kUniquenessHorizon));
  }
  o.detail << "max discrepancy " << worst << "; ";
  o.require(worst <= kUniquenessTol, "seeds agree within 1e-10");
}

void wold_equivalence(Outcome& o) {
  const ToleranceConfig tol = verdict_tol();
  const auto corpus = models::wold_corpus();
  int agree = 0;
  for (const auto& entry : corpus) {
    const WoldReport r = admits_wold(entry.op, entry.m, tol);
    if (r.agree) ++agree;
    else o.require(false, entry.name + " disagrees");
  }
  o.detail << agree << "/" << corpus.size() << " agree; ";
  o.require(corpus.size() >= 20, "corpus has at least 20 members");
}

void shift_models(Outcome& o) {
  const ToleranceConfig tol = verdict_tol();
  const ShiftModel rot = shift_model(models::rotation_mixed_shift({1, 1, 1}, 14), std::nullopt, tol);
  const FiniteOperator sum = direct_sum(assemble_shift(models::dirichlet_shift(14), tol),
                                        assemble_shift(models::polynomial_shift({1, 2, 1}, 14), tol));
  const ShiftModel ds = shift_model(sum, std::nullopt, tol);
  o.detail << "rotation fiber " << rot.fiber_dim << " residual " << rot.intertwine_residual << "; direct sum fiber "
           << ds.fiber_dim << " residual " << ds.intertwine_residual << "; ";
  o.require(rot.intertwine_residual <= kVerdictTol && ds.intertwine_residual <= kVerdictTol, "intertwining residuals");
  o.require(rot.fiber_dim == 1, "rotation-mixed fiber 1");
  o.require(ds.fiber_dim == 2, "direct-sum fiber 2");
  for (const auto* sm : {&rot, &ds})
    o.require(is_m_isometry(assemble_shift(sm->as_shift_spec(), tol), 3, tol).verdict, "assembled model is a 3-isometry");
}

void kernel_sums(Outcome& o) {
  const ToleranceConfig tol = verdict_tol();
  int checked = 0;
  double worst = 0.0;
  for (const auto& entry : models::wold_corpus()) {
    if (!entry.is_shift) continue;
    ++checked;
    const auto rows = ort_sum_check(entry.op, 4, tol);
    const Index m0 = rows.front().kernel_dim;
    for (const auto& row : rows) {
      worst = std::max(worst, row.residual);
      o.require(row.kernel_dim == row.n * m0 && row.ladder_dim == row.kernel_dim,
                entry.name + " dimension at n=" + std::to_string(row.n));
      o.require(row.residual <= kVerdictTol, entry.name + " residual at n=" + std::to_string(row.n));
    }
  }
  o.detail << checked << " shift models, worst residual " << worst << "; ";
}

void algebraic_invariants(Outcome& o) {
  const ToleranceConfig tol = verdict_tol();
  double literal = 0.0;
  double corrected = 0.0;
  for (int trial = 0; trial < kRandomOperators; ++trial) {
    const Index n = 1 + trial % kMaxRandomDim;
    const FiniteOperator t = FiniteOperator::explicit_matrix(scaled_random(n, 1000 + static_cast<std::uint64_t>(trial)));
    const ComplexMatrix& a = t.matrix;
    for (Index m = 1; m <= 3; ++m) {
      const ComplexMatrix dm = defect(t, m);
      const ComplexMatrix next = defect(t, m + 1);
      literal = std::max(literal, spectral_norm(next - (a.adjoint() * dm * a - dm)));
      corrected = std::max(corrected, spectral_norm(next - (dm - a.adjoint() * dm * a)));
    }
  }
  o.detail << "stated recursion residual " << literal << ", sign-reversed residual " << corrected << "; ";
  o.require(literal <= kExactTol, "Delta_{m+1} = T* Delta_m T - Delta_m");

  bool bracket_exact = true;
  for (int trial = 0; trial < kRandomOperators; ++trial) {
    const Index n = 1 + trial % kMaxRandomDim;
    const FiniteOperator t = FiniteOperator::explicit_matrix(scaled_random(n, 2000 + static_cast<std::uint64_t>(trial)));
    for (Index k = 0; k <= 4; ++k)
      bracket_exact = bracket_exact && bracket(t, k) == bracket(FiniteOperator::explicit_matrix(matrix_power(t.matrix, k)), 1);
  }
  o.require(bracket_exact, "bracket power identity");

  const auto corpus = models::wold_corpus();
  int invariant = 0;
  for (int trial = 0; trial < kConjugations; ++trial) {
    const auto& entry = corpus[static_cast<std::size_t>(trial) % corpus.size()];
    const FiniteOperator& t = entry.op;
    ComplexMatrix u = ComplexMatrix::Zero(t.matrix.rows(), t.matrix.rows());
    std::vector<bool> done(t.levels.size(), false);
    for (std::size_t i = 0; i < t.levels.size(); ++i) {
      if (done[i]) continue;
      std::vector<Index> group;
      for (std::size_t j = i; j < t.levels.size(); ++j)
        if (t.levels[j] == t.levels[i]) {
          group.push_back(static_cast<Index>(j));
          done[j] = true;
        }
      const ComplexMatrix block = random_unitary(static_cast<Index>(group.size()), 3000 + static_cast<std::uint64_t>(trial * 97 + i));
      for (std::size_t r = 0; r < group.size(); ++r)
        for (std::size_t c = 0; c < group.size(); ++c) u(group[r], group[c]) = block(static_cast<Index>(r), static_cast<Index>(c));
    }
    const FiniteOperator c = conjugate(t, u, tol);
    const Index k = std::max<Index>(1, entry.m - 1);
    if (kernel_condition(t, k, tol).verdict == kernel_condition(c, k, tol).verdict) ++invariant;
  }
  o.detail << "kernel-condition verdicts invariant on " << invariant << "/" << kConjugations << " conjugations; ";
  o.require(invariant == kConjugations, "unitary invariance of kernel-condition verdicts");
}

void expansivity(Outcome& o) {
  const FiniteOperator t = assemble_composition(linear_graph(), kCompositionJ);
  const double margin = expansivity_margin(t);
  o.detail << "lambda_min " << margin << "; ";
  o.require(margin >= -kExpansiveTol, "lambda_min(C<1> - I) >= -1e-10");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "M_2/M_3 inner product on the linear-branch graph", kFastBudgetSeconds, inner_product},
      {2, "kernel-condition dichotomy, graph vs matrix", kFastBudgetSeconds, kernel_dichotomy},
      {3, "per-site m-isometry identities", 0.0, site_identities},
      {4, "scalar completion and recovery", 0.0, completion},
      {5, "completion uniqueness across diagonalization seeds", 0.0, uniqueness},
      {6, "kernel condition vs wandering ladder on the corpus", kCorpusBudgetSeconds, wold_equivalence},
      {7, "weighted-shift models", 0.0, shift_models},
      {8, "kernel-sum identity on corpus shifts", 0.0, kernel_sums},
      {9, "algebraic invariants", 0.0, algebraic_invariants},
      {10, "expansivity of the linear-branch composition", 0.0, expansivity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0) {
      std::ostringstream budget;
      budget << "runtime under " << c.budget_seconds << " s";
      o.require(secs < c.budget_seconds, budget.str());
    }
    if (!o.pass) ++failures;
    std::printf("%s  criterion %2d  %-52s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
