#include "mwold/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mwold/errors.hpp"

namespace mwold {

void ShiftSpec::validate(const ToleranceConfig& tol) const {
  if (d < 1) throw ArgumentError("ShiftSpec: fiber dimension d must be >= 1");
  if (N < 1) throw ArgumentError("ShiftSpec: N must be >= 1");
  if (static_cast<Index>(weights.size()) != N - 1) {
    std::ostringstream os;
    os << "ShiftSpec: expected " << N - 1 << " weights for N = " << N << ", got " << weights.size();
    throw ArgumentError(os.str());
  }
  if (uniform_bounds && !(uniform_bounds->first > 0 && uniform_bounds->second >= uniform_bounds->first))
    throw ArgumentError("ShiftSpec: uniform bounds must satisfy 0 < c <= M");
  for (std::size_t n = 0; n < weights.size(); ++n) {
    const auto& w = weights[n];
    if (w.rows() != d || w.cols() != d) {
      std::ostringstream os;
      os << "ShiftSpec: weight " << n << " is " << w.rows() << "x" << w.cols() << ", expected " << d << "x" << d;
      throw ArgumentError(os.str());
    }
    if (!all_finite(w)) throw ArgumentError("ShiftSpec: weight " + std::to_string(n) + " has non-finite entries");
    const Eigen::BDCSVD<ComplexMatrix> svd(w);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > tol.tol_rank * smax)) {
      std::ostringstream os;
      os << "ShiftSpec: weight " << n << " is not invertible (sigma_min = " << smin << ")";
      throw PreconditionError(os.str());
    }
    if (uniform_bounds && (smin < uniform_bounds->first || smax > uniform_bounds->second)) {
      std::ostringstream os;
      os << "ShiftSpec: weight " << n << " violates the uniform bounds (sigma in [" << smin << ", " << smax << "])";
      throw PreconditionError(os.str());
    }
  }
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ShiftTruncation:
      return "shift-truncation";
    case Provenance::CompositionTruncation:
      return "composition-truncation";
    case Provenance::Explicit:
      return "explicit";
  }
  return "explicit";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "shift-truncation") return Provenance::ShiftTruncation;
  if (s == "composition-truncation") return Provenance::CompositionTruncation;
  if (s == "explicit") return Provenance::Explicit;
  throw ArgumentError("unknown provenance '" + s + "'");
}

void FiniteOperator::validate() const {
  if (matrix.rows() != matrix.cols()) throw ArgumentError("FiniteOperator: matrix must be square");
  if (!all_finite(matrix)) throw ArgumentError("FiniteOperator: matrix has non-finite entries");
  if (static_cast<Index>(levels.size()) != matrix.rows())
    throw ArgumentError("FiniteOperator: levels must have one entry per basis vector");
  for (Index l : levels)
    if (l < 0) throw ArgumentError("FiniteOperator: levels must be non-negative");
  if (exact_support && (*exact_support < 0 || *exact_support > max_level()))
    throw ArgumentError("FiniteOperator: exact_support must lie in [0, max level]");
}

FiniteOperator FiniteOperator::explicit_matrix(ComplexMatrix m) {
  FiniteOperator t;
  t.levels.assign(static_cast<std::size_t>(m.rows()), 0);
  t.matrix = std::move(m);
  t.validate();
  return t;
}

Index FiniteOperator::max_level() const {
  return levels.empty() ? 0 : *std::max_element(levels.begin(), levels.end());
}

Index FiniteOperator::default_support_bound(Index m) const {
  if (!exact_support) return max_level();
  return *exact_support + 1 - m;
}

std::vector<Index> FiniteOperator::safe_indices(Index bound) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] <= bound) out.push_back(static_cast<Index>(i));
  return out;
}

Subspace FiniteOperator::safe_subspace(Index bound) const {
  const auto idx = safe_indices(bound);
  return Subspace::coordinate(size(), idx);
}

FiniteOperator assemble_shift(const ShiftSpec& spec, const ToleranceConfig& tol) {
  spec.validate(tol);
  const Index d = spec.d;
  const Index n_sites = spec.N;
  FiniteOperator t;
  t.matrix = ComplexMatrix::Zero(n_sites * d, n_sites * d);
  for (Index n = 0; n + 1 < n_sites; ++n)
    t.matrix.block((n + 1) * d, n * d, d, d) = spec.weights[static_cast<std::size_t>(n)];
  t.provenance = Provenance::ShiftTruncation;
  t.levels.resize(static_cast<std::size_t>(n_sites * d));
  for (Index i = 0; i < n_sites * d; ++i) t.levels[static_cast<std::size_t>(i)] = i / d;
  if (n_sites >= 2) t.exact_support = n_sites - 2;
  else t.exact_support = 0;
  return t;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, Index k) {
  if (k < 0) throw ArgumentError("matrix_power: negative exponent");
  ComplexMatrix result = ComplexMatrix::Identity(m.rows(), m.cols());
  for (Index i = 0; i < k; ++i) result = m * result;
  return result;
}

ComplexMatrix bracket(const FiniteOperator& t, Index k) {
  if (k < 0) throw ArgumentError("bracket: k must be >= 0");
  const ComplexMatrix p = matrix_power(t.matrix, k);
  return p.adjoint() * p;
}

double reducing_residual(const ComplexMatrix& t, const Subspace& m) {
  const ComplexMatrix& f = m.frame();
  const ComplexMatrix tf = t * f;
  const ComplexMatrix tsf = t.adjoint() * f;
  const ComplexMatrix leak_t = tf - f * (f.adjoint() * tf);
  const ComplexMatrix leak_ts = tsf - f * (f.adjoint() * tsf);
  return std::max(spectral_norm(leak_t), spectral_norm(leak_ts));
}

FiniteOperator restrict_to(const FiniteOperator& t, const Subspace& m, const ToleranceConfig& tol) {
  if (m.ambient_dim() != t.size()) throw ArgumentError("restrict: subspace ambient dimension differs from operator size");
  const double leak = reducing_residual(t.matrix, m);
  if (leak > tol.tol_identity * std::max(1.0, spectral_norm(t.matrix))) {
    std::ostringstream os;
    os << "restrict: subspace is not reducing (max leakage " << leak << ")";
    throw PreconditionError(os.str());
  }
  const ComplexMatrix& f = m.frame();
  FiniteOperator out;
  out.matrix = f.adjoint() * t.matrix * f;
  out.provenance = t.provenance == Provenance::Explicit ? Provenance::Explicit : t.provenance;
  out.exact_support = t.exact_support;
  out.levels.resize(static_cast<std::size_t>(f.cols()));
  for (Index c = 0; c < f.cols(); ++c) {
    const double cutoff = 1e-10 * f.col(c).norm();
    Index level = 0;
    for (Index r = 0; r < f.rows(); ++r)
      if (std::abs(f(r, c)) > cutoff) level = std::max(level, t.levels[static_cast<std::size_t>(r)]);
    out.levels[static_cast<std::size_t>(c)] = level;
  }
  if (out.exact_support && !out.levels.empty() && *out.exact_support > out.max_level())
    out.exact_support = out.max_level();
  return out;
}

namespace {

bool preserves_levels(const ComplexMatrix& u, const std::vector<Index>& levels, double tol) {
  for (Index r = 0; r < u.rows(); ++r)
    for (Index c = 0; c < u.cols(); ++c)
      if (levels[static_cast<std::size_t>(r)] != levels[static_cast<std::size_t>(c)] && std::abs(u(r, c)) > tol)
        return false;
  return true;
}

}  // namespace

FiniteOperator conjugate(const FiniteOperator& t, const ComplexMatrix& u, const ToleranceConfig& tol) {
  if (u.rows() != t.size() || u.cols() != t.size()) throw ArgumentError("conjugate: unitary has the wrong size");
  const double err = spectral_norm(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
  if (err > tol.tol_identity) {
    std::ostringstream os;
    os << "conjugate: matrix is not unitary (||U*U - I|| = " << err << ")";
    throw PreconditionError(os.str());
  }
  FiniteOperator out;
  out.matrix = u * t.matrix * u.adjoint();
  if (preserves_levels(u, t.levels, tol.tol_identity)) {
    out.provenance = t.provenance;
    out.exact_support = t.exact_support;
    out.levels = t.levels;
  } else {
    out.levels.assign(t.levels.size(), 0);
  }
  return out;
}

FiniteOperator direct_sum(const FiniteOperator& a, const FiniteOperator& b) {
  FiniteOperator out;
  const Index na = a.size();
  const Index nb = b.size();
  out.matrix = ComplexMatrix::Zero(na + nb, na + nb);
  out.matrix.topLeftCorner(na, na) = a.matrix;
  out.matrix.bottomRightCorner(nb, nb) = b.matrix;
  out.provenance = a.provenance == b.provenance ? a.provenance : Provenance::Explicit;
  out.levels = a.levels;
  out.levels.insert(out.levels.end(), b.levels.begin(), b.levels.end());
  if (a.exact_support && b.exact_support) out.exact_support = std::min(*a.exact_support, *b.exact_support);
  else if (a.exact_support) out.exact_support = a.exact_support;
  else if (b.exact_support) out.exact_support = b.exact_support;
  return out;
}

}  // namespace mwold
