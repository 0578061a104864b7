#include "mwold/graphops.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mwold/errors.hpp"

namespace mwold {

bool operator<(const GraphPoint& a, const GraphPoint& b) {
  if (a.kind != b.kind) return a.is_circuit();
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

std::string to_string(const GraphPoint& p) {
  std::ostringstream os;
  if (p.is_circuit()) os << "circuit(" << p.i << ")";
  else os << "branch(" << p.i << "," << p.j << ")";
  return os.str();
}

BranchMeasure BranchMeasure::polynomial(std::vector<Rational> coeffs) {
  BranchMeasure b;
  b.poly = RationalPolynomial(std::move(coeffs));
  return b;
}

BranchMeasure BranchMeasure::explicit_values(std::vector<Rational> values) {
  BranchMeasure b;
  b.values = std::move(values);
  return b;
}

std::optional<Index> BranchMeasure::length() const {
  if (poly) return std::nullopt;
  return static_cast<Index>(values.size());
}

Rational BranchMeasure::at(Index j) const {
  if (j < 1) throw ArgumentError("branch measure index must be >= 1");
  if (poly) return (*poly)(Rational(j));
  if (j > static_cast<Index>(values.size())) {
    std::ostringstream os;
    os << "branch measure needed at j = " << j << " but only " << values.size() << " values are given";
    throw PreconditionError(os.str());
  }
  return values[static_cast<std::size_t>(j - 1)];
}

void OneCircuitGraph::validate() const {
  if (kappa < 1) throw ArgumentError("graph: kappa must be >= 1");
  if (branches.empty()) throw ArgumentError("graph: eta must be >= 1");
  if (static_cast<Index>(circuit_measures.size()) != kappa)
    throw ArgumentError("graph: expected " + std::to_string(kappa) + " circuit measures");
  for (std::size_t c = 0; c < circuit_measures.size(); ++c)
    if (!(circuit_measures[c] > 0)) throw ArgumentError("graph: circuit measure " + std::to_string(c + 1) + " must be positive");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    if (b.poly) {
      if (const auto bad = first_nonpositive_integer(*b.poly, BigInt(1))) {
        std::ostringstream os;
        os << "graph: branch " << i + 1 << " polynomial is not positive at j = " << *bad;
        throw ArgumentError(os.str());
      }
    } else {
      if (b.values.empty()) throw ArgumentError("graph: branch " + std::to_string(i + 1) + " has no measure data");
      for (std::size_t j = 0; j < b.values.size(); ++j)
        if (!(b.values[j] > 0)) {
          std::ostringstream os;
          os << "graph: branch " << i + 1 << " measure at j = " << j + 1 << " must be positive";
          throw ArgumentError(os.str());
        }
    }
  }
}

void OneCircuitGraph::check_point(const GraphPoint& p) const {
  if (p.is_circuit()) {
    if (p.i < 1 || p.i > kappa) throw ArgumentError("invalid point " + to_string(p));
  } else if (p.i < 1 || p.i > eta() || p.j < 1) {
    throw ArgumentError("invalid point " + to_string(p));
  }
}

Rational OneCircuitGraph::mu(const GraphPoint& p) const {
  check_point(p);
  if (p.is_circuit()) return circuit_measures[static_cast<std::size_t>(p.i - 1)];
  return branches[static_cast<std::size_t>(p.i - 1)].at(p.j);
}

std::optional<Index> OneCircuitGraph::known_depth() const {
  std::optional<Index> depth;
  for (const auto& b : branches)
    if (auto len = b.length()) depth = depth ? std::min(*depth, *len) : *len;
  return depth;
}

GraphPoint phi(const OneCircuitGraph& g, const GraphPoint& p) {
  g.check_point(p);
  if (!p.is_circuit()) return p.j >= 2 ? GraphPoint::branch(p.i, p.j - 1) : GraphPoint::circuit(g.kappa);
  return p.i == 1 ? GraphPoint::circuit(g.kappa) : GraphPoint::circuit(p.i - 1);
}

namespace {

std::vector<GraphPoint> preimage_once(const OneCircuitGraph& g, const GraphPoint& p) {
  std::vector<GraphPoint> out;
  if (!p.is_circuit()) {
    out.push_back(GraphPoint::branch(p.i, p.j + 1));
    return out;
  }
  if (p.i < g.kappa) out.push_back(GraphPoint::circuit(p.i + 1));
  if (p.i == g.kappa) {
    out.push_back(GraphPoint::circuit(1));
    for (Index b = 1; b <= g.eta(); ++b) out.push_back(GraphPoint::branch(b, 1));
  }
  return out;
}

}  // namespace

std::vector<GraphPoint> preimage(const OneCircuitGraph& g, const GraphPoint& p, Index i) {
  if (i < 1) throw ArgumentError("preimage: i must be >= 1");
  g.check_point(p);
  std::set<GraphPoint> level{p};
  for (Index step = 0; step < i; ++step) {
    std::set<GraphPoint> next;
    for (const auto& y : level)
      for (const auto& z : preimage_once(g, y)) next.insert(z);
    level = std::move(next);
  }
  return {level.begin(), level.end()};
}

Rational h_value(const OneCircuitGraph& g, const GraphPoint& p) {
  Rational mass = 0;
  for (const auto& z : preimage_once(g, p)) mass += g.mu(z);
  return mass / g.mu(p);
}

GraphKernelReport kernel_condition_graph(const OneCircuitGraph& g, Index k) {
  if (k < 1) throw ArgumentError("kernel_condition_graph: k must be >= 1");
  g.validate();
  GraphKernelReport report;
  report.k = k;
  bool first_h = true;
  // Branch points have singleton preimages, so only preimages of circuit
  // points can break constancy of h; probing the kappa circuit points to
  // depth k is therefore exhaustive.
  for (Index i = 1; i <= k; ++i) {
    for (Index c = 1; c <= g.kappa; ++c) {
      const GraphPoint target = GraphPoint::circuit(c);
      const auto pts = preimage(g, target, i);
      std::vector<Rational> hs;
      hs.reserve(pts.size());
      for (const auto& z : pts) {
        hs.push_back(h_value(g, z));
        if (first_h || hs.back() < report.min_h) report.min_h = hs.back();
        first_h = false;
      }
      for (std::size_t a = 0; a + 1 < pts.size(); ++a)
        if (hs[a] != hs[a + 1]) {
          report.verdict = false;
          report.violations.push_back({i, target, pts[a], pts[a + 1], hs[a], hs[a + 1]});
          break;
        }
    }
  }
  return report;
}

GraphMIsometryReport is_m_isometry_graph(const OneCircuitGraph& g, Index m) {
  if (m < 2) throw ArgumentError("is_m_isometry_graph: m must be >= 2");
  g.validate();
  if (g.kappa != 1) throw PreconditionError("is_m_isometry_graph: the criterion is implemented for kappa = 1 only");
  GraphMIsometryReport report;
  report.m = m;
  report.verdict = true;
  for (const auto& b : g.branches) {
    // Newton interpolation through j = 1..m-1, expanded to monomials.
    const Index nodes = m - 1;
    std::vector<Rational> diffs;
    for (Index j = 1; j <= nodes; ++j) diffs.push_back(b.at(j));
    std::vector<Rational> newton;
    for (Index level = 0; level < nodes; ++level) {
      newton.push_back(diffs.front());
      for (std::size_t t = 0; t + 1 < diffs.size(); ++t) diffs[t] = diffs[t + 1] - diffs[t];
      diffs.pop_back();
    }
    RationalPolynomial fitted;
    RationalPolynomial basis({Rational(1)});
    Rational factorial = 1;
    for (Index k = 0; k < nodes; ++k) {
      if (k > 0) factorial *= k;
      fitted = fitted + basis * RationalPolynomial({newton[static_cast<std::size_t>(k)] / factorial});
      basis = basis * RationalPolynomial({Rational(-(k + 1)), Rational(1)});
    }
    BranchFit fit;
    fit.fitted = fitted;
    Index last = 0;
    if (b.poly) {
      // Two polynomials of degree <= D agree everywhere once they agree at D + 1 points.
      last = std::max<Index>(m + 1, std::max(b.poly->degree(), fitted.degree()) + 2);
    } else {
      last = static_cast<Index>(b.values.size());
      if (last < m + 1) {
        std::ostringstream os;
        os << "is_m_isometry_graph: explicit branch data needs at least m + 1 = " << m + 1 << " values";
        throw PreconditionError(os.str());
      }
    }
    fit.matches = true;
    for (Index j = 1; j <= last; ++j)
      if (fitted(Rational(j)) != b.at(j)) {
        fit.matches = false;
        fit.mismatch_at = j;
        break;
      }
    report.verdict = report.verdict && fit.matches;
    report.branches.push_back(std::move(fit));
  }
  return report;
}

std::pair<Rational, Rational> linear_branch_parameters(const OneCircuitGraph& g) {
  g.validate();
  if (g.kappa != 1 || g.eta() != 1) throw PreconditionError("linear-branch model requires kappa = eta = 1");
  const auto& br = g.branches.front();
  Rational a;
  Rational b;
  if (br.poly) {
    if (br.poly->degree() != 1) throw PreconditionError("linear-branch model requires w(j) = a j + b with a > 0");
    b = br.poly->coeffs()[0];
    a = br.poly->coeffs()[1];
  } else {
    throw PreconditionError("linear-branch model requires polynomial branch data");
  }
  if (!(a > 0) || !(b > 0)) throw PreconditionError("linear-branch model requires a > 0 and b > 0");
  if (g.circuit_measures.front() != (a + b) * (a + b) / a)
    throw PreconditionError("linear-branch model requires mu(x_1) = (a+b)^2 / a");
  return {a, b};
}

namespace {

/// Values of the canonical M_k element (f(x_1) = 1) at x_1 and x_{1,1..k+1}.
std::vector<Rational> canonical_values(const Rational& a, const Rational& b, Index k) {
  std::vector<Rational> v(static_cast<std::size_t>(k + 2), Rational(1));
  v.back() = -(1 + b / a);
  return v;
}

}  // namespace

Rational mk_inner_product_exact(const OneCircuitGraph& g, Index k, Index l) {
  if (k < 0 || l < 0) throw ArgumentError("mk_inner_product: k and l must be non-negative");
  if (k == l) throw ArgumentError("mk_inner_product: k and l must differ");
  const auto [a, b] = linear_branch_parameters(g);
  const auto fv = canonical_values(a, b, k);
  const auto gv = canonical_values(a, b, l);
  const std::size_t overlap = std::min(fv.size(), gv.size());
  Rational sum = 0;
  for (std::size_t p = 0; p < overlap; ++p) {
    const GraphPoint pt = p == 0 ? GraphPoint::circuit(1) : GraphPoint::branch(1, static_cast<Index>(p));
    sum += fv[p] * gv[p] * g.mu(pt);
  }
  return sum;
}

Complex mk_inner_product(const OneCircuitGraph& g, Index k, Index l, Complex scale_f, Complex scale_g,
                         ArithmeticMode mode) {
  if (mode == ArithmeticMode::Exact) return to_double(mk_inner_product_exact(g, k, l)) * scale_f * std::conj(scale_g);
  if (k < 0 || l < 0) throw ArgumentError("mk_inner_product: k and l must be non-negative");
  if (k == l) throw ArgumentError("mk_inner_product: k and l must differ");
  const auto [ar, br] = linear_branch_parameters(g);
  const double a = to_double(ar);
  const double b = to_double(br);
  const Index len = std::max(k, l) + 2;
  auto values = [&](Index kk, Complex s) {
    std::vector<Complex> v(static_cast<std::size_t>(len), Complex(0.0));
    for (Index p = 0; p <= kk; ++p) v[static_cast<std::size_t>(p)] = s;
    v[static_cast<std::size_t>(kk + 1)] = -s * (1.0 + b / a);
    return v;
  };
  const auto fv = values(k, scale_f);
  const auto gv = values(l, scale_g);
  Complex sum = 0.0;
  for (Index p = 0; p < len; ++p) {
    const GraphPoint pt = p == 0 ? GraphPoint::circuit(1) : GraphPoint::branch(1, p);
    sum += fv[static_cast<std::size_t>(p)] * std::conj(gv[static_cast<std::size_t>(p)]) * to_double(g.mu(pt));
  }
  return sum;
}

Index point_index(const OneCircuitGraph& g, Index J, const GraphPoint& p) {
  g.check_point(p);
  if (p.is_circuit()) return p.i - 1;
  if (p.j > J) throw ArgumentError("point " + to_string(p) + " lies outside the truncation");
  return g.kappa + (p.i - 1) * J + (p.j - 1);
}

GraphPoint point_at(const OneCircuitGraph& g, Index J, Index index) {
  if (index < 0 || index >= g.kappa + g.eta() * J) throw ArgumentError("truncation index out of range");
  if (index < g.kappa) return GraphPoint::circuit(index + 1);
  const Index rest = index - g.kappa;
  return GraphPoint::branch(rest / J + 1, rest % J + 1);
}

FiniteOperator assemble_composition(const OneCircuitGraph& g, Index J) {
  if (J < 2) throw ArgumentError("assemble_composition: J must be >= 2");
  g.validate();
  if (const auto depth = g.known_depth(); depth && *depth < J) {
    std::ostringstream os;
    os << "assemble_composition: explicit branch data covers j <= " << *depth << " but J = " << J;
    throw PreconditionError(os.str());
  }
  const Index n = g.kappa + g.eta() * J;
  std::vector<double> mu(static_cast<std::size_t>(n));
  for (Index z = 0; z < n; ++z) mu[static_cast<std::size_t>(z)] = to_double(g.mu(point_at(g, J, z)));
  FiniteOperator t;
  t.matrix = ComplexMatrix::Zero(n, n);
  t.levels.resize(static_cast<std::size_t>(n));
  for (Index z = 0; z < n; ++z) {
    const GraphPoint pz = point_at(g, J, z);
    const Index y = point_index(g, J, phi(g, pz));
    t.matrix(z, y) = std::sqrt(mu[static_cast<std::size_t>(z)] / mu[static_cast<std::size_t>(y)]);
    t.levels[static_cast<std::size_t>(z)] = pz.is_circuit() ? 0 : pz.j;
  }
  t.provenance = Provenance::CompositionTruncation;
  t.exact_support = J - 1;
  return t;
}

ComplexVector mk_closed_form_vector(const OneCircuitGraph& g, Index k, Index J) {
  const auto [a, b] = linear_branch_parameters(g);
  if (k < 0 || k + 1 > J) throw ArgumentError("mk_closed_form_vector: need 0 <= k and k + 1 <= J");
  const auto vals = canonical_values(a, b, k);
  ComplexVector v = ComplexVector::Zero(g.kappa + g.eta() * J);
  for (std::size_t p = 0; p < vals.size(); ++p) {
    const GraphPoint pt = p == 0 ? GraphPoint::circuit(1) : GraphPoint::branch(1, static_cast<Index>(p));
    v(point_index(g, J, pt)) = to_double(vals[p]) * std::sqrt(to_double(g.mu(pt)));
  }
  return v;
}

}  // namespace mwold
