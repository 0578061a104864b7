#include "mwold/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mwold/errors.hpp"

namespace mwold {

void ToleranceConfig::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) throw ArgumentError(std::string("tolerance ") + name + " must lie in (0, 1)");
  };
  check(tol_rank, "tol_rank");
  check(tol_orth, "tol_orth");
  check(tol_identity, "tol_identity");
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

Subspace::Subspace(Index ambient_dim) : ambient_(ambient_dim), frame_(ambient_dim, 0) {}

Subspace::Subspace(ComplexMatrix frame, double tol_orth) : ambient_(frame.rows()), frame_(std::move(frame)) {
  if (frame_.cols() > frame_.rows()) throw ArgumentError("subspace frame has more columns than rows");
  if (frame_.cols() == 0) return;
  const ComplexMatrix gram = frame_.adjoint() * frame_;
  const double err = spectral_norm(gram - ComplexMatrix::Identity(gram.rows(), gram.cols()));
  if (!(err <= tol_orth)) {
    std::ostringstream os;
    os << "subspace frame is not orthonormal (||F*F - I|| = " << err << ")";
    throw ArgumentError(os.str());
  }
}

Subspace Subspace::full(Index ambient_dim) {
  Subspace s(ambient_dim);
  s.frame_ = ComplexMatrix::Identity(ambient_dim, ambient_dim);
  return s;
}

Subspace Subspace::coordinate(Index ambient_dim, std::span<const Index> axes) {
  Subspace s(ambient_dim);
  s.frame_ = ComplexMatrix::Zero(ambient_dim, static_cast<Index>(axes.size()));
  for (std::size_t c = 0; c < axes.size(); ++c) {
    if (axes[c] < 0 || axes[c] >= ambient_dim) throw ArgumentError("coordinate axis out of range");
    s.frame_(axes[c], static_cast<Index>(c)) = 1.0;
  }
  return s;
}

namespace {

struct RankSplit {
  Eigen::BDCSVD<ComplexMatrix> svd;
  Index rank = 0;
};

RankSplit rank_split(const ComplexMatrix& m, const ToleranceConfig& tol, std::optional<double> reference_norm,
                     unsigned options) {
  if (!all_finite(m)) throw ArgumentError("matrix has non-finite entries");
  RankSplit out{Eigen::BDCSVD<ComplexMatrix>(m, options), 0};
  const auto& sv = out.svd.singularValues();
  if (sv.size() == 0) return out;
  const double ref = reference_norm.value_or(sv(0));
  const double cutoff = tol.tol_rank * ref;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++out.rank;
  return out;
}

}  // namespace

Subspace kernel(const ComplexMatrix& m, const ToleranceConfig& tol, std::optional<double> reference_norm) {
  if (m.cols() == 0) return Subspace(0);
  if (m.rows() == 0) return Subspace::full(m.cols());
  auto split = rank_split(m, tol, reference_norm, Eigen::ComputeFullV);
  const Index nullity = m.cols() - split.rank;
  return Subspace(split.svd.matrixV().rightCols(nullity), 1e-8);
}

Subspace range(const ComplexMatrix& m, const ToleranceConfig& tol, std::optional<double> reference_norm) {
  if (m.cols() == 0 || m.rows() == 0) return Subspace(m.rows());
  auto split = rank_split(m, tol, reference_norm, Eigen::ComputeThinU);
  return Subspace(split.svd.matrixU().leftCols(split.rank), 1e-8);
}

Index numerical_rank(const ComplexMatrix& m, const ToleranceConfig& tol, std::optional<double> reference_norm) {
  if (m.size() == 0) return 0;
  return rank_split(m, tol, reference_norm, 0).rank;
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b, const ToleranceConfig& tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw ArgumentError("subspace_intersection: ambient dimensions differ");
  const Index n = a.ambient_dim();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix stacked(2 * n, n);
  stacked.topRows(n) = id - orthogonal_projection(a);
  stacked.bottomRows(n) = id - orthogonal_projection(b);
  // Complements of projectors have unit norm, so the cutoff is absolute.
  return kernel(stacked, tol, 1.0);
}

Subspace subspace_span(std::span<const Subspace> parts, const ToleranceConfig& tol) {
  if (parts.empty()) throw ArgumentError("subspace_span: no subspaces given");
  const Index n = parts.front().ambient_dim();
  Index cols = 0;
  for (const auto& p : parts) {
    if (p.ambient_dim() != n) throw ArgumentError("subspace_span: ambient dimensions differ");
    cols += p.dim();
  }
  if (cols == 0) return Subspace(n);
  ComplexMatrix all(n, cols);
  Index at = 0;
  for (const auto& p : parts) {
    all.middleCols(at, p.dim()) = p.frame();
    at += p.dim();
  }
  return range(all, tol, 1.0);
}

ComplexMatrix orthogonal_projection(const Subspace& s) { return s.frame() * s.frame().adjoint(); }

double span_residual(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw ArgumentError("span_residual: ambient dimensions differ");
  const ComplexMatrix& fa = a.frame();
  const ComplexMatrix& fb = b.frame();
  const ComplexMatrix a_off_b = fa - fb * (fb.adjoint() * fa);
  const ComplexMatrix b_off_a = fb - fa * (fa.adjoint() * fb);
  return std::max(spectral_norm(a_off_b), spectral_norm(b_off_a));
}

double projector_product_norm(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw ArgumentError("projector_product_norm: ambient dimensions differ");
  return spectral_norm(a.frame().adjoint() * b.frame());
}

JointDiagonalization joint_diagonalize(std::span<const ComplexMatrix> mats, const ToleranceConfig& tol,
                                       std::uint64_t seed) {
  if (mats.empty()) throw ArgumentError("joint_diagonalize: no matrices given");
  const Index n = mats.front().rows();
  std::vector<double> norms;
  norms.reserve(mats.size());
  for (std::size_t j = 0; j < mats.size(); ++j) {
    const auto& a = mats[j];
    if (a.rows() != n || a.cols() != n) throw ArgumentError("joint_diagonalize: matrices must be square of equal size");
    if (!all_finite(a)) throw ArgumentError("joint_diagonalize: non-finite entries");
    norms.push_back(spectral_norm(a));
    const double skew = spectral_norm(a - a.adjoint());
    if (skew > tol.tol_identity * std::max(1.0, norms.back())) {
      std::ostringstream os;
      os << "joint_diagonalize: matrix " << j << " is not Hermitian (||A - A*|| = " << skew << ")";
      throw PreconditionError(os.str());
    }
  }
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j) {
      const double c = spectral_norm(mats[i] * mats[j] - mats[j] * mats[i]);
      if (c > tol.tol_identity * std::max(1.0, norms[i] * norms[j])) throw CommutatorError(i, j, c);
    }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  constexpr int kAttempts = 4;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    ComplexMatrix combo = ComplexMatrix::Zero(n, n);
    for (std::size_t j = 0; j < mats.size(); ++j) {
      const ComplexMatrix herm = 0.5 * (mats[j] + mats[j].adjoint());
      combo += (coeff(rng) / std::max(norms[j], 1e-300)) * herm;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(combo);
    if (eig.info() != Eigen::Success) continue;
    const ComplexMatrix& u = eig.eigenvectors();

    JointDiagonalization out{u, {}};
    bool diagonal = true;
    for (std::size_t j = 0; j < mats.size() && diagonal; ++j) {
      ComplexMatrix d = u.adjoint() * mats[j] * u;
      std::vector<double> spectrum(static_cast<std::size_t>(n));
      for (Index x = 0; x < n; ++x) {
        spectrum[static_cast<std::size_t>(x)] = d(x, x).real();
        d(x, x) = 0.0;
      }
      if (spectral_norm(d) > tol.tol_identity * std::max(1.0, norms[j])) diagonal = false;
      out.spectra.push_back(std::move(spectrum));
    }
    if (diagonal) return out;
  }
  throw PreconditionError("joint_diagonalize: no random combination separated the common eigenspaces");
}

ComplexMatrix random_unitary(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

}  // namespace mwold
