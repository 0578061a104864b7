#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mwold/linalg.hpp"
#include "mwold/operators.hpp"

namespace mwold {

/// Binomial coefficient as a double (exact for the small m used here).
double binomial(Index m, Index p);

/// Delta_m(T) = sum_{p=0}^m (-1)^p C(m,p) (T^p)* T^p.
ComplexMatrix defect(const FiniteOperator& t, Index m);

struct DefectReport {
  Index m = 0;
  double residual_norm = 0.0;
  Index support_bound = 0;
  bool verdict = false;
  /// (level, ||P_level Delta_m P_level||) for every safe level.
  std::vector<std::pair<Index, double>> per_site;
};

/// Compresses Delta_m(T) to basis vectors with level <= support_bound
/// (default: t.default_support_bound(m)). Throws PreconditionError when the
/// requested bound reaches into the truncation boundary.
DefectReport is_m_isometry(const FiniteOperator& t, Index m, const ToleranceConfig& tol = {},
                           std::optional<Index> support_bound = std::nullopt);

/// Strict m-isometry: defect at m within tol and defect at m-1 at least
/// 100 * tol_identity.
bool is_strict_m_isometry(const FiniteOperator& t, Index m, const ToleranceConfig& tol = {});

/// sum_p (-1)^p C(m,p) S_[p,s]* S_[p,s] with S_[p,s] = S_{p-1+s} ... S_s.
ComplexMatrix shift_site_defect(const ShiftSpec& spec, Index m, Index s);

struct KernelConditionReport {
  Index k = 0;
  /// (n, ||(I - P_K) T<n> P_K||) for n = 1..k, K = Ker T*.
  std::vector<std::pair<Index, double>> per_level;
  Index kernel_dim = 0;
  bool verdict = true;
};

/// Subspace Ker T* at the configured rank cutoff.
Subspace adjoint_kernel(const FiniteOperator& t, const ToleranceConfig& tol = {});

/// Largest level in the support of a subspace's frame.
Index support_level(const FiniteOperator& t, const Subspace& s);

/// k-kernel condition. Requires the brackets T<n>, n <= k, to be exact on
/// Ker T*, i.e. the kernel's top level plus k stays inside the truncation.
KernelConditionReport kernel_condition(const FiniteOperator& t, Index k, const ToleranceConfig& tol = {});

/// (n, ||T*^n T^{n-1} P_K||) for n = 1..n_max.
std::vector<std::pair<Index, double>> kernel_tower_check(const FiniteOperator& t, Index n_max,
                                                         const ToleranceConfig& tol = {});

/// ||T<k> - (-1)^{m+1} sum_{p<m} (-1)^p C(m,p) T<k-m+p>|| on the support safe for k powers.
double gramian_recurrence_check(const FiniteOperator& t, Index m, Index k, const ToleranceConfig& tol = {});

/// lambda_min(T<1> - I) on the support safe for one power is >= -tol_identity.
bool is_expansive(const FiniteOperator& t, const ToleranceConfig& tol = {});
double expansivity_margin(const FiniteOperator& t);

}  // namespace mwold
