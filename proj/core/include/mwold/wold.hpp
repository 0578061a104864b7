#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwold/linalg.hpp"
#include "mwold/miso.hpp"
#include "mwold/operators.hpp"

namespace mwold {

/// Rng^inf(T): iterate R_{n+1} = range(T R_n) until the dimension stalls. For
/// truncations, vectors that reach past exact_support are discarded.
Subspace range_infinity(const FiniteOperator& t, const ToleranceConfig& tol = {});

bool is_analytic(const FiniteOperator& t, const ToleranceConfig& tol = {});

struct WanderingLadder {
  /// M_0 = Ker T*, M_{n+1} = range(T frame(M_n)), n < n_max.
  std::vector<Subspace> spaces;
  double gram_offdiag = 0.0;
  Index span_dim = 0;
  Index analytic_residual = 0;

  std::vector<Index> dims() const;
};

/// Largest n_max for which M_0..M_{n_max} stay clear of the truncation edge.
Index ladder_capacity(const FiniteOperator& t, const ToleranceConfig& tol = {});

/// Builds M_0..M_{n_max}. Throws PreconditionError when n_max exceeds
/// ladder_capacity.
WanderingLadder wandering_ladder(const FiniteOperator& t, Index n_max, const ToleranceConfig& tol = {});

struct KernelSumRow {
  Index n = 0;
  Index kernel_dim = 0;
  Index ladder_dim = 0;
  double residual = 0.0;
};

/// Compares Ker(T*^n) with span(M_0, ..., M_{n-1}) for n = 1..n_max.
std::vector<KernelSumRow> ort_sum_check(const FiniteOperator& t, Index n_max, const ToleranceConfig& tol = {});

struct WoldReport {
  Index m = 0;
  Index n_max = 0;
  KernelConditionReport kernel_condition;
  WanderingLadder ladder;
  std::vector<KernelSumRow> kernel_sum;
  bool ladder_orthogonal = false;
  bool kernel_sum_holds = false;
  Index range_infinity_dim = 0;
  /// ||R*R - I|| of T restricted to Rng^inf, plus its reducing leakage; 0 when analytic.
  double unitary_residual = 0.0;
  bool unitary_part_ok = true;
  bool clause_kernel = false;
  bool clause_ladder = false;
  bool agree = false;
  /// Levels above this bound were excluded from span assertions.
  Index excluded_band_start = 0;
};

/// Evaluates both sides of the Wold-type characterization independently:
/// the (m-1)-kernel condition, and orthogonality of the wandering ladder
/// together with the kernel-sum identity and (for non-analytic T) unitarity
/// of T on Rng^inf.
WoldReport admits_wold(const FiniteOperator& t, Index m, const ToleranceConfig& tol = {},
                       std::optional<Index> n_max = std::nullopt);

struct ShiftModel {
  Index fiber_dim = 0;
  /// V_n as F_n* (fiber_dim x ambient): coordinates of M_n in its frame.
  std::vector<ComplexMatrix> V_blocks;
  /// S_n = F_{n+1}* T F_n, n = 0..n_max-1.
  std::vector<ComplexMatrix> S_weights;
  double intertwine_residual = 0.0;

  /// Shift on n_max + 1 sites assembled from S_weights.
  ShiftSpec as_shift_spec() const;
};

/// Unitarily equivalent weighted-shift model on the ladder M_0..M_{n_max}.
/// F_{n+1} comes from a QR step of T F_n with positive diagonal; when
/// `frame_seed` is given every frame is rotated by an independent random
/// unitary. Throws NotShiftEquivalent naming the failing clause.
ShiftModel shift_model(const FiniteOperator& t, std::optional<Index> n_max = std::nullopt,
                       const ToleranceConfig& tol = {}, std::optional<std::uint64_t> frame_seed = std::nullopt);

}  // namespace mwold
