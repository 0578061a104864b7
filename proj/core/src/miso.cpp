#include "mwold/miso.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mwold/errors.hpp"

namespace mwold {

double binomial(Index m, Index p) {
  if (p < 0 || p > m) return 0.0;
  double c = 1.0;
  for (Index i = 1; i <= p; ++i) c = c * static_cast<double>(m - p + i) / static_cast<double>(i);
  return std::round(c);
}

namespace {

ComplexMatrix compress(const ComplexMatrix& a, const std::vector<Index>& idx) {
  const Index r = static_cast<Index>(idx.size());
  ComplexMatrix out(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) out(i, j) = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace

ComplexMatrix defect(const FiniteOperator& t, Index m) {
  if (m < 1) throw ArgumentError("defect: m must be >= 1");
  const Index n = t.size();
  ComplexMatrix power = ComplexMatrix::Identity(n, n);
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (Index p = 0; p <= m; ++p) {
    if (p > 0) power = t.matrix * power;
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    sum += (sign * binomial(m, p)) * (power.adjoint() * power);
  }
  return sum;
}

DefectReport is_m_isometry(const FiniteOperator& t, Index m, const ToleranceConfig& tol,
                           std::optional<Index> support_bound) {
  if (m < 1) throw ArgumentError("is_m_isometry: m must be >= 1");
  const Index safe = t.default_support_bound(m);
  const Index bound = support_bound.value_or(safe);
  if (bound > safe || bound < 0) {
    std::ostringstream os;
    os << "is_m_isometry: support bound " << bound << " with m = " << m << " leaves the truncation-free region (max "
       << safe << ")";
    throw PreconditionError(os.str());
  }
  const ComplexMatrix delta = defect(t, m);
  const auto idx = t.safe_indices(bound);
  DefectReport report;
  report.m = m;
  report.support_bound = bound;
  report.residual_norm = spectral_norm(compress(delta, idx));
  report.verdict = report.residual_norm <= tol.tol_identity;
  for (Index level = 0; level <= bound; ++level) {
    std::vector<Index> at;
    for (Index i : idx)
      if (t.levels[static_cast<std::size_t>(i)] == level) at.push_back(i);
    if (!at.empty()) report.per_site.emplace_back(level, spectral_norm(compress(delta, at)));
  }
  return report;
}

bool is_strict_m_isometry(const FiniteOperator& t, Index m, const ToleranceConfig& tol) {
  if (m < 2) return is_m_isometry(t, m, tol).verdict;
  const auto at_m = is_m_isometry(t, m, tol);
  const auto below = is_m_isometry(t, m - 1, tol, at_m.support_bound);
  return at_m.verdict && below.residual_norm >= 100.0 * tol.tol_identity;
}

ComplexMatrix shift_site_defect(const ShiftSpec& spec, Index m, Index s) {
  if (m < 0 || s < 0) throw ArgumentError("shift_site_defect: m and s must be non-negative");
  if (s + m > spec.N - 1) {
    std::ostringstream os;
    os << "shift_site_defect: site " << s << " with m = " << m << " exceeds the stored prefix (N = " << spec.N << ")";
    throw PreconditionError(os.str());
  }
  const Index d = spec.d;
  ComplexMatrix product = ComplexMatrix::Identity(d, d);
  ComplexMatrix sum = ComplexMatrix::Identity(d, d);
  for (Index p = 1; p <= m; ++p) {
    product = spec.weights[static_cast<std::size_t>(s + p - 1)] * product;
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    sum += (sign * binomial(m, p)) * (product.adjoint() * product);
  }
  return sum;
}

Subspace adjoint_kernel(const FiniteOperator& t, const ToleranceConfig& tol) {
  return kernel(t.matrix.adjoint(), tol);
}

Index support_level(const FiniteOperator& t, const Subspace& s) {
  Index level = 0;
  const ComplexMatrix& f = s.frame();
  for (Index r = 0; r < f.rows(); ++r)
    if (f.row(r).norm() > 1e-10) level = std::max(level, t.levels[static_cast<std::size_t>(r)]);
  return level;
}

KernelConditionReport kernel_condition(const FiniteOperator& t, Index k, const ToleranceConfig& tol) {
  if (k < 1) throw ArgumentError("kernel_condition: k must be >= 1");
  KernelConditionReport report;
  report.k = k;
  const Subspace ker = adjoint_kernel(t, tol);
  report.kernel_dim = ker.dim();
  if (ker.dim() == 0) return report;
  if (t.exact_support) {
    const Index top = support_level(t, ker);
    if (top + k > *t.exact_support + 1) {
      std::ostringstream os;
      os << "kernel_condition: Ker T* reaches level " << top << ", so brackets up to " << k
         << " are not truncation-free (exact support " << *t.exact_support << ")";
      throw PreconditionError(os.str());
    }
  }
  const ComplexMatrix& f = ker.frame();
  ComplexMatrix tn_f = f;
  for (Index n = 1; n <= k; ++n) {
    tn_f = t.matrix * tn_f;
    const ComplexMatrix image = matrix_power(t.matrix.adjoint(), n) * tn_f;
    const ComplexMatrix leak = image - f * (f.adjoint() * image);
    const double leakage = spectral_norm(leak);
    report.per_level.emplace_back(n, leakage);
    if (leakage > tol.tol_identity) report.verdict = false;
  }
  return report;
}

std::vector<std::pair<Index, double>> kernel_tower_check(const FiniteOperator& t, Index n_max,
                                                         const ToleranceConfig& tol) {
  if (n_max < 1) throw ArgumentError("kernel_tower_check: n_max must be >= 1");
  std::vector<std::pair<Index, double>> out;
  const Subspace ker = adjoint_kernel(t, tol);
  if (ker.dim() == 0) {
    for (Index n = 1; n <= n_max; ++n) out.emplace_back(n, 0.0);
    return out;
  }
  const ComplexMatrix ts = t.matrix.adjoint();
  ComplexMatrix lifted = ker.frame();  // T^{n-1} P_K, kept on the frame
  for (Index n = 1; n <= n_max; ++n) {
    if (n > 1) lifted = t.matrix * lifted;
    out.emplace_back(n, spectral_norm(matrix_power(ts, n) * lifted));
  }
  return out;
}

double gramian_recurrence_check(const FiniteOperator& t, Index m, Index k, const ToleranceConfig& tol) {
  (void)tol;
  if (m < 1 || k < m) throw ArgumentError("gramian_recurrence_check: requires 1 <= m <= k");
  const Index bound = t.default_support_bound(k);
  if (bound < 0) throw PreconditionError("gramian_recurrence_check: no truncation-free support for this k");
  const auto idx = t.safe_indices(bound);
  ComplexMatrix rhs = ComplexMatrix::Zero(t.size(), t.size());
  for (Index p = 0; p < m; ++p) {
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    rhs += (sign * binomial(m, p)) * bracket(t, k - m + p);
  }
  const double outer = ((m + 1) % 2 == 0) ? 1.0 : -1.0;
  return spectral_norm(compress(bracket(t, k) - outer * rhs, idx));
}

double expansivity_margin(const FiniteOperator& t) {
  const Index bound = t.default_support_bound(1);
  const auto idx = t.safe_indices(bound);
  if (idx.empty()) return 0.0;
  const ComplexMatrix g = compress(bracket(t, 1), idx) - ComplexMatrix::Identity(static_cast<Index>(idx.size()),
                                                                                  static_cast<Index>(idx.size()));
  const ComplexMatrix herm = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

bool is_expansive(const FiniteOperator& t, const ToleranceConfig& tol) {
  return expansivity_margin(t) >= -tol.tol_identity;
}

}  // namespace mwold
