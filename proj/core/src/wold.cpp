#include "mwold/wold.hpp"

#include <algorithm>
#include <sstream>

#include "mwold/errors.hpp"

namespace mwold {

namespace {

Subspace stabilized_range(const FiniteOperator& t, const ToleranceConfig& tol) {
  const double ref = spectral_norm(t.matrix);
  Subspace current = Subspace::full(t.size());
  for (Index step = 0; step <= t.size(); ++step) {
    if (current.dim() == 0) return current;
    Subspace next = range(t.matrix * current.frame(), tol, ref);
    if (next.dim() == current.dim()) return next;
    current = std::move(next);
  }
  return current;
}

}  // namespace

Subspace range_infinity(const FiniteOperator& t, const ToleranceConfig& tol) {
  Subspace stable = stabilized_range(t, tol);
  if (!t.exact_support || stable.dim() == 0) return stable;
  // Truncation can create invariant vectors that lean on the top level (a
  // composition truncation fixes the indicator of all kept points); only the
  // part clear of that level is kept.
  return subspace_intersection(stable, t.safe_subspace(*t.exact_support), tol);
}

bool is_analytic(const FiniteOperator& t, const ToleranceConfig& tol) { return range_infinity(t, tol).dim() == 0; }

std::vector<Index> WanderingLadder::dims() const {
  std::vector<Index> out;
  for (const auto& s : spaces) out.push_back(s.dim());
  return out;
}

Index ladder_capacity(const FiniteOperator& t, const ToleranceConfig& tol) {
  if (!t.exact_support) return std::max<Index>(t.size() - 1, 0);
  const Subspace ker = adjoint_kernel(t, tol);
  const Index base = ker.dim() == 0 ? 0 : support_level(t, ker);
  return std::max<Index>(*t.exact_support + 1 - base, 0);
}

WanderingLadder wandering_ladder(const FiniteOperator& t, Index n_max, const ToleranceConfig& tol) {
  if (n_max < 0) throw ArgumentError("wandering_ladder: n_max must be non-negative");
  const Index capacity = ladder_capacity(t, tol);
  if (n_max > capacity) {
    std::ostringstream os;
    os << "wandering_ladder: n_max = " << n_max << " exceeds the truncation-free depth " << capacity;
    throw PreconditionError(os.str());
  }
  const double ref = spectral_norm(t.matrix);
  WanderingLadder ladder;
  ladder.spaces.push_back(adjoint_kernel(t, tol));
  for (Index n = 0; n < n_max; ++n) {
    const Subspace& last = ladder.spaces.back();
    if (last.dim() == 0) ladder.spaces.emplace_back(t.size());
    else ladder.spaces.push_back(range(t.matrix * last.frame(), tol, ref));
  }
  for (std::size_t a = 0; a < ladder.spaces.size(); ++a)
    for (std::size_t b = a + 1; b < ladder.spaces.size(); ++b)
      if (ladder.spaces[a].dim() > 0 && ladder.spaces[b].dim() > 0)
        ladder.gram_offdiag = std::max(ladder.gram_offdiag, projector_product_norm(ladder.spaces[a], ladder.spaces[b]));
  ladder.span_dim = subspace_span(ladder.spaces, tol).dim();
  ladder.analytic_residual = range_infinity(t, tol).dim();
  return ladder;
}

std::vector<KernelSumRow> ort_sum_check(const FiniteOperator& t, Index n_max, const ToleranceConfig& tol) {
  if (n_max < 1) throw ArgumentError("ort_sum_check: n_max must be >= 1");
  const WanderingLadder ladder = wandering_ladder(t, n_max - 1, tol);
  const ComplexMatrix ts = t.matrix.adjoint();
  std::vector<KernelSumRow> rows;
  ComplexMatrix power = ComplexMatrix::Identity(t.size(), t.size());
  for (Index n = 1; n <= n_max; ++n) {
    power = ts * power;
    const Subspace ker = kernel(power, tol);
    const std::span<const Subspace> head(ladder.spaces.data(), static_cast<std::size_t>(n));
    const Subspace sum = subspace_span(head, tol);
    KernelSumRow row;
    row.n = n;
    row.kernel_dim = ker.dim();
    for (const auto& s : head) row.ladder_dim += s.dim();
    row.residual = span_residual(ker, sum);
    rows.push_back(row);
  }
  return rows;
}

WoldReport admits_wold(const FiniteOperator& t, Index m, const ToleranceConfig& tol, std::optional<Index> n_max) {
  if (m < 2) throw ArgumentError("admits_wold: m must be >= 2");
  WoldReport report;
  report.m = m;
  const Index capacity = ladder_capacity(t, tol);
  report.n_max = std::min(capacity, n_max.value_or(std::max<Index>(m + 1, 4)));
  if (report.n_max < 1) throw PreconditionError("admits_wold: truncation too short for a wandering ladder");

  report.kernel_condition = kernel_condition(t, m - 1, tol);
  report.clause_kernel = report.kernel_condition.verdict;

  report.ladder = wandering_ladder(t, report.n_max, tol);
  report.ladder_orthogonal = report.ladder.gram_offdiag <= tol.tol_identity;
  report.kernel_sum = ort_sum_check(t, report.n_max, tol);
  report.kernel_sum_holds = std::all_of(report.kernel_sum.begin(), report.kernel_sum.end(), [&](const KernelSumRow& r) {
    return r.kernel_dim == r.ladder_dim && r.residual <= tol.tol_identity;
  });

  const Subspace rinf = range_infinity(t, tol);
  report.range_infinity_dim = rinf.dim();
  if (rinf.dim() > 0) {
    const double leak = reducing_residual(t.matrix, rinf);
    const ComplexMatrix r = rinf.frame().adjoint() * t.matrix * rinf.frame();
    const double unit = spectral_norm(r.adjoint() * r - ComplexMatrix::Identity(r.rows(), r.cols()));
    report.unitary_residual = std::max(leak, unit);
    report.unitary_part_ok = report.unitary_residual <= tol.tol_identity;
  }
  report.clause_ladder = report.ladder_orthogonal && report.kernel_sum_holds && report.unitary_part_ok;
  report.agree = report.clause_kernel == report.clause_ladder;

  const Subspace ker = adjoint_kernel(t, tol);
  const Index base = ker.dim() == 0 ? 0 : support_level(t, ker);
  report.excluded_band_start = base + report.n_max + 1;
  return report;
}

ShiftSpec ShiftModel::as_shift_spec() const {
  ShiftSpec spec;
  spec.d = fiber_dim;
  spec.N = static_cast<Index>(S_weights.size()) + 1;
  spec.weights = S_weights;
  return spec;
}

ShiftModel shift_model(const FiniteOperator& t, std::optional<Index> n_max, const ToleranceConfig& tol,
                       std::optional<std::uint64_t> frame_seed) {
  const Index depth = std::min(n_max.value_or(ladder_capacity(t, tol)), ladder_capacity(t, tol));
  if (depth < 1) throw PreconditionError("shift_model: truncation too short for a wandering ladder");

  const Subspace rinf = range_infinity(t, tol);
  if (rinf.dim() > 0) throw NotShiftEquivalent("analyticity (Rng^inf must vanish)", static_cast<double>(rinf.dim()));

  const WanderingLadder ladder = wandering_ladder(t, depth, tol);
  if (ladder.gram_offdiag > tol.tol_identity) throw NotShiftEquivalent("orthogonality of the wandering ladder", ladder.gram_offdiag);
  const auto sums = ort_sum_check(t, depth, tol);
  for (const auto& row : sums)
    if (row.kernel_dim != row.ladder_dim || row.residual > tol.tol_identity)
      throw NotShiftEquivalent("kernel-sum identity at n = " + std::to_string(row.n), row.residual);

  const Index r = ladder.spaces.front().dim();
  if (r == 0) throw NotShiftEquivalent("nontrivial Ker T*", 0.0);

  std::vector<ComplexMatrix> frames;
  frames.push_back(ladder.spaces.front().frame());
  for (Index n = 0; n < depth; ++n) {
    const ComplexMatrix image = t.matrix * frames.back();
    Eigen::HouseholderQR<ComplexMatrix> qr(image);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(image.rows(), r);
    const ComplexMatrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    for (Index i = 0; i < r; ++i) {
      const Complex dgl = rr(i, i);
      if (std::abs(dgl) <= tol.tol_rank * spectral_norm(t.matrix))
        throw NotShiftEquivalent("injectivity of T on M_" + std::to_string(n), std::abs(dgl));
      q.col(i) *= dgl / std::abs(dgl);
    }
    frames.push_back(std::move(q));
  }
  if (frame_seed) {
    for (std::size_t n = 0; n < frames.size(); ++n) frames[n] = frames[n] * random_unitary(r, *frame_seed + n);
  }

  ShiftModel model;
  model.fiber_dim = r;
  for (const auto& f : frames) model.V_blocks.push_back(f.adjoint());
  for (Index n = 0; n < depth; ++n)
    model.S_weights.push_back(frames[static_cast<std::size_t>(n + 1)].adjoint() * t.matrix * frames[static_cast<std::size_t>(n)]);

  // V T = S V checked on span(M_0..M_{depth-1}), whose image stays in the ladder.
  const Index levels = depth + 1;
  ComplexMatrix v(levels * r, t.size());
  for (Index n = 0; n < levels; ++n) v.middleRows(n * r, r) = model.V_blocks[static_cast<std::size_t>(n)];
  ComplexMatrix s = ComplexMatrix::Zero(levels * r, levels * r);
  for (Index n = 0; n < depth; ++n) s.block((n + 1) * r, n * r, r, r) = model.S_weights[static_cast<std::size_t>(n)];
  ComplexMatrix g(t.size(), depth * r);
  for (Index n = 0; n < depth; ++n) g.middleCols(n * r, r) = frames[static_cast<std::size_t>(n)];
  model.intertwine_residual = spectral_norm(v * t.matrix * g - s * v * g);
  return model;
}

}  // namespace mwold
