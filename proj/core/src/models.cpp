#include "mwold/models.hpp"

#include <cmath>
#include <random>

#include "mwold/errors.hpp"

namespace mwold::models {

namespace {

double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<Rational> rationals(std::initializer_list<Rational> xs) { return {xs}; }

}  // namespace

ShiftSpec ratio_shift(const std::function<double(Index)>& s, Index N) {
  if (N < 1) throw ArgumentError("shift needs N >= 1");
  ShiftSpec spec;
  spec.d = 1;
  spec.N = N;
  for (Index n = 0; n + 1 < N; ++n) {
    const double lo = s(n);
    const double hi = s(n + 1);
    if (!(lo > 0 && hi > 0)) throw ArgumentError("shift generator must be positive on the sites used");
    spec.weights.push_back(ComplexMatrix::Constant(1, 1, std::sqrt(hi / lo)));
  }
  return spec;
}

ShiftSpec polynomial_shift(const std::vector<double>& s_coeffs, Index N) {
  return ratio_shift([&](Index n) { return eval_poly(s_coeffs, static_cast<double>(n)); }, N);
}

ShiftSpec dirichlet_shift(Index N) { return polynomial_shift({1.0, 1.0}, N); }

ShiftSpec unweighted_shift(Index N, Index d) {
  ShiftSpec spec;
  spec.d = d;
  spec.N = N;
  for (Index n = 0; n + 1 < N; ++n) spec.weights.push_back(ComplexMatrix::Identity(d, d));
  return spec;
}

FiniteOperator rotation_mixed_shift(const std::vector<double>& s_coeffs, Index N) {
  if (N < 4) throw ArgumentError("rotation_mixed_shift: N must be >= 4");
  auto w = [&](Index n) {
    const double lo = eval_poly(s_coeffs, static_cast<double>(n));
    const double hi = eval_poly(s_coeffs, static_cast<double>(n + 1));
    if (!(lo > 0 && hi > 0)) throw ArgumentError("rotation_mixed_shift: s must be positive on the sites used");
    return std::sqrt(hi / lo);
  };
  const Complex i(0.0, 1.0);
  const double r2 = std::sqrt(2.0);
  FiniteOperator t;
  t.matrix = ComplexMatrix::Zero(N, N);
  const double s0 = w(0);
  const double s1 = w(1);
  t.matrix(0, 0) = s0 / 2.0;
  t.matrix(0, 1) = i * s0 / 2.0;
  t.matrix(1, 0) = i * s0 / 2.0;
  t.matrix(1, 1) = -s0 / 2.0;
  t.matrix(2, 0) = s1 / r2;
  t.matrix(2, 1) = -i * s1 / r2;
  for (Index n = 2; n + 1 < N; ++n) t.matrix(n + 1, n) = w(n);
  t.provenance = Provenance::ShiftTruncation;
  t.levels.resize(static_cast<std::size_t>(N));
  t.levels[0] = 1;
  t.levels[1] = 1;
  for (Index n = 2; n < N; ++n) t.levels[static_cast<std::size_t>(n)] = n;
  t.exact_support = N - 2;
  return t;
}

ShiftSpec operator_polynomial_shift(const std::vector<std::vector<double>>& atom_polys, const ComplexMatrix& basis,
                                    Index N) {
  const Index d = static_cast<Index>(atom_polys.size());
  if (basis.rows() != d || basis.cols() != d) throw ArgumentError("operator_polynomial_shift: basis size mismatch");
  ShiftSpec spec;
  spec.d = d;
  spec.N = N;
  for (Index n = 0; n + 1 < N; ++n) {
    Eigen::VectorXcd diag(d);
    for (Index x = 0; x < d; ++x) {
      const auto& p = atom_polys[static_cast<std::size_t>(x)];
      diag(x) = std::sqrt(eval_poly(p, static_cast<double>(n + 1)) / eval_poly(p, static_cast<double>(n)));
    }
    spec.weights.push_back(basis * diag.asDiagonal() * basis.adjoint());
  }
  return spec;
}

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  return h;
}

OneCircuitGraph linear_branch_graph(const Rational& a, const Rational& b, const Rational& circuit_measure) {
  OneCircuitGraph g;
  g.kappa = 1;
  g.circuit_measures = {circuit_measure};
  g.branches.push_back(BranchMeasure::polynomial(rationals({b, a})));
  g.validate();
  return g;
}

OneCircuitGraph linear_branch_graph(const Rational& a, const Rational& b) {
  return linear_branch_graph(a, b, (a + b) * (a + b) / a);
}

OneCircuitGraph geometric_graph(Index length) {
  OneCircuitGraph g;
  g.kappa = 1;
  g.circuit_measures = {Rational(2)};
  std::vector<Rational> values;
  Rational v = 1;
  for (Index j = 1; j <= length; ++j) {
    v *= 2;
    values.push_back(v);
  }
  g.branches.push_back(BranchMeasure::explicit_values(std::move(values)));
  g.validate();
  return g;
}

OneCircuitGraph constant_measure_graph(const Rational& c, const Rational& mu1) {
  OneCircuitGraph g;
  g.kappa = 1;
  g.circuit_measures = {mu1};
  g.branches.push_back(BranchMeasure::polynomial(rationals({c})));
  g.validate();
  return g;
}

FiniteOperator diagonal_unitary(const std::vector<double>& phases) {
  const Index d = static_cast<Index>(phases.size());
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (Index x = 0; x < d; ++x) u(x, x) = std::polar(1.0, phases[static_cast<std::size_t>(x)]);
  return FiniteOperator::explicit_matrix(u);
}

std::vector<CorpusEntry> wold_corpus(std::uint64_t seed) {
  constexpr Index kN = 14;
  constexpr Index kJ = 10;
  std::vector<CorpusEntry> out;
  auto add_shift = [&](std::string name, const ShiftSpec& spec, Index m) {
    out.push_back({std::move(name), assemble_shift(spec), m, true});
  };
  add_shift("shift s(n)=n+1", polynomial_shift({1, 1}, kN), 2);
  add_shift("shift s(n)=(n+1)^2", polynomial_shift({1, 2, 1}, kN), 3);
  add_shift("shift s(n)=n^2+n+1", polynomial_shift({1, 1, 1}, kN), 3);
  add_shift("shift s(n)=(n+1)^3", polynomial_shift({1, 3, 3, 1}, kN), 4);
  add_shift("unweighted shift", unweighted_shift(kN), 2);
  out.push_back({"rotation-mixed s(n)=(n+1)^2", rotation_mixed_shift({1, 2, 1}, kN), 3, true});
  out.push_back({"rotation-mixed s(n)=n+1", rotation_mixed_shift({1, 1}, kN), 2, true});
  out.push_back({"sum of shifts n+1 and (n+1)^2",
                 direct_sum(assemble_shift(polynomial_shift({1, 1}, kN)), assemble_shift(polynomial_shift({1, 2, 1}, kN))),
                 3, true});
  add_shift("operator shift d=2, Hadamard basis", operator_polynomial_shift({{1, 1}, {1, 2, 1}}, hadamard(), kN), 3);
  add_shift("operator shift d=3, random basis",
            operator_polynomial_shift({{1, 1}, {1, 2}, {1, 2, 1}}, random_unitary(3, seed), kN), 3);
  {
    const ShiftSpec spec = operator_polynomial_shift({{1, 1}, {1, 2, 1}}, hadamard(), kN);
    const FiniteOperator base = assemble_shift(spec);
    ComplexMatrix u = ComplexMatrix::Zero(2 * kN, 2 * kN);
    for (Index n = 0; n < kN; ++n) u.block(2 * n, 2 * n, 2, 2) = random_unitary(2, seed + 100 + static_cast<std::uint64_t>(n));
    out.push_back({"level-preserving conjugate of operator shift", conjugate(base, u), 3, true});
  }
  const std::vector<std::pair<Rational, Rational>> ab = {
      {Rational(1), Rational(1)}, {Rational(2), Rational(1)},    {Rational(1), Rational(2)},
      {Rational(1, 2), Rational(3)}, {Rational(3), Rational(1, 2)}, {Rational(5, 3), Rational(2, 7)}};
  for (const auto& [a, b] : ab)
    out.push_back({"linear-branch graph a=" + to_string(a) + " b=" + to_string(b),
                   assemble_composition(linear_branch_graph(a, b), kJ), 3, false});
  out.push_back({"linear-branch graph a=1 b=1, mu(x1)=5",
                 assemble_composition(linear_branch_graph(Rational(1), Rational(1), Rational(5)), kJ), 3, false});
  out.push_back({"linear-branch graph a=2 b=1, mu(x1)=3",
                 assemble_composition(linear_branch_graph(Rational(2), Rational(1), Rational(3)), kJ), 3, false});
  out.push_back({"constant-measure graph", assemble_composition(constant_measure_graph(Rational(1), Rational(1)), kJ), 2,
                 false});
  out.push_back({"geometric graph", assemble_composition(geometric_graph(kJ + 2), kJ), 2, false});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  {
    ShiftSpec spec = dirichlet_shift(kN);
    for (auto& w : spec.weights) w(0, 0) *= 1.0 + jitter(rng);
    add_shift("perturbed-weight scalar shift", spec, 2);
  }
  {
    ShiftSpec spec = unweighted_shift(kN, 2);
    std::normal_distribution<double> g(0.0, 0.2);
    for (auto& w : spec.weights)
      for (Index r = 0; r < 2; ++r)
        for (Index c = 0; c < 2; ++c) w(r, c) += Complex(g(rng), g(rng));
    add_shift("perturbed non-commuting operator shift", spec, 3);
  }
  out.push_back({"unitary plus shift s(n)=n+1",
                 direct_sum(diagonal_unitary({0.3, 1.1}), assemble_shift(dirichlet_shift(kN))), 2, false});
  return out;
}

}  // namespace mwold::models
