#include "mwold/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mwold/errors.hpp"

namespace mwold::json {

namespace {

void write_string(std::ostringstream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"':
        os << "\\\"";
        break;
      case '\\':
        os << "\\\\";
        break;
      case '\n':
        os << "\\n";
        break;
      case '\t':
        os << "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          os << buf;
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

void write(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << nl << pad;
        first = false;
        write(os, e, indent, depth + 1);
      }
      if (!flat) os << nl << close;
      os << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
      return;
    }
    case Json::value_t::string:
      write_string(os, j.get<std::string>());
      return;
    default:
      os << j.dump();
  }
}

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw ArgumentError("schema violation at '" + field + "': " + what);
}

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) schema_error(field, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(field + "." + key, "missing field");
  return *it;
}

Index require_count(const Json& j, const char* key, const std::string& field, Index min_value) {
  const Json& v = require(j, key, field);
  if (!v.is_number_integer()) schema_error(field + "." + key, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min_value) schema_error(field + "." + key, "must be >= " + std::to_string(min_value));
  return static_cast<Index>(x);
}

double as_real(const Json& j, const std::string& field) {
  if (!j.is_number()) schema_error(field, "expected a number");
  return j.get<double>();
}

}  // namespace

std::string dump(const Json& j, int indent) {
  if (indent < 0) throw ArgumentError("dump: indent must be non-negative");
  std::ostringstream os;
  write(os, j, indent, 0);
  os << '\n';
  return os.str();
}

Json from_matrix(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

ComplexMatrix to_matrix(const Json& j, const std::string& field) {
  const Index rows = require_count(j, "rows", field, 0);
  const Index cols = require_count(j, "cols", field, 0);
  const Json& data = require(j, "data", field);
  if (!data.is_array()) schema_error(field + ".data", "expected an array");
  if (static_cast<Index>(data.size()) != rows * cols) {
    std::ostringstream os;
    os << "expected " << rows * cols << " entries, got " << data.size();
    schema_error(field + ".data", os.str());
  }
  ComplexMatrix m(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const Json& e = data[static_cast<std::size_t>(k)];
    const std::string where = field + ".data[" + std::to_string(k) + "]";
    Complex v;
    if (e.is_number()) {
      v = e.get<double>();
    } else if (e.is_array() && e.size() == 2) {
      v = Complex(as_real(e[0], where + "[0]"), as_real(e[1], where + "[1]"));
    } else {
      schema_error(where, "expected [re, im] or a number");
    }
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) schema_error(where, "non-finite entry");
    m(k / cols, k % cols) = v;
  }
  return m;
}

Json from_rational(const Rational& r) {
  if (denominator(r) == 1 && abs(numerator(r)) < BigInt(1) << 53) return numerator(r).convert_to<std::int64_t>();
  return r.str();
}

Rational to_rational(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema_error(field, "non-finite number");
    return mwold::to_rational(v);
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ArgumentError& e) {
      schema_error(field, e.what());
    }
  }
  schema_error(field, "expected a number or a \"p/q\" string");
}

Json from_tolerance(const ToleranceConfig& tol) {
  Json j;
  j["tol_rank"] = tol.tol_rank;
  j["tol_orth"] = tol.tol_orth;
  j["tol_identity"] = tol.tol_identity;
  return j;
}

Json from_shift_spec(const ShiftSpec& spec) {
  Json j;
  j["d"] = spec.d;
  j["N"] = spec.N;
  Json w = Json::array();
  for (const auto& m : spec.weights) w.push_back(from_matrix(m));
  j["weights"] = std::move(w);
  if (spec.uniform_bounds) j["uniform_bounds"] = Json::array({spec.uniform_bounds->first, spec.uniform_bounds->second});
  return j;
}

ShiftSpec to_shift_spec(const Json& j) {
  ShiftSpec spec;
  spec.d = require_count(j, "d", "$", 1);
  spec.N = require_count(j, "N", "$", 1);
  const Json& w = require(j, "weights", "$");
  if (!w.is_array()) schema_error("$.weights", "expected an array of matrices");
  for (std::size_t k = 0; k < w.size(); ++k) spec.weights.push_back(to_matrix(w[k], "$.weights[" + std::to_string(k) + "]"));
  if (const auto it = j.find("uniform_bounds"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2) schema_error("$.uniform_bounds", "expected [c, M]");
    spec.uniform_bounds = std::make_pair(as_real((*it)[0], "$.uniform_bounds[0]"), as_real((*it)[1], "$.uniform_bounds[1]"));
  }
  return spec;
}

Json from_finite_operator(const FiniteOperator& t) {
  Json j;
  j["matrix"] = from_matrix(t.matrix);
  j["provenance"] = to_string(t.provenance);
  if (t.exact_support) j["exact_support"] = *t.exact_support;
  else j["exact_support"] = nullptr;
  j["levels"] = t.levels;
  return j;
}

FiniteOperator to_finite_operator(const Json& j) {
  FiniteOperator t;
  t.matrix = to_matrix(require(j, "matrix", "$"), "$.matrix");
  if (const auto it = j.find("provenance"); it != j.end()) {
    if (!it->is_string()) schema_error("$.provenance", "expected a string");
    try {
      t.provenance = provenance_from_string(it->get<std::string>());
    } catch (const ArgumentError& e) {
      schema_error("$.provenance", e.what());
    }
  }
  if (const auto it = j.find("exact_support"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) schema_error("$.exact_support", "expected an integer or null");
    t.exact_support = it->get<Index>();
  }
  if (const auto it = j.find("levels"); it != j.end()) {
    if (!it->is_array()) schema_error("$.levels", "expected an array of integers");
    for (const auto& l : *it) {
      if (!l.is_number_integer()) schema_error("$.levels", "expected integers");
      t.levels.push_back(l.get<Index>());
    }
  } else {
    t.levels.assign(static_cast<std::size_t>(t.matrix.rows()), 0);
  }
  try {
    t.validate();
  } catch (const ArgumentError& e) {
    schema_error("$", e.what());
  }
  return t;
}

Json from_graph(const OneCircuitGraph& g) {
  Json j;
  j["kappa"] = g.kappa;
  j["eta"] = g.eta();
  Json cm = Json::array();
  for (const auto& r : g.circuit_measures) cm.push_back(from_rational(r));
  j["circuit_measures"] = std::move(cm);
  Json branches = Json::array();
  for (const auto& b : g.branches) {
    Json e;
    Json vals = Json::array();
    if (b.poly) {
      for (const auto& c : b.poly->coeffs()) vals.push_back(from_rational(c));
      e["poly"] = std::move(vals);
    } else {
      for (const auto& v : b.values) vals.push_back(from_rational(v));
      e["values"] = std::move(vals);
    }
    branches.push_back(std::move(e));
  }
  j["branches"] = std::move(branches);
  return j;
}

OneCircuitGraph to_graph(const Json& j) {
  OneCircuitGraph g;
  g.kappa = require_count(j, "kappa", "$", 1);
  const Index eta = require_count(j, "eta", "$", 1);
  const Json& cm = require(j, "circuit_measures", "$");
  if (!cm.is_array()) schema_error("$.circuit_measures", "expected an array");
  for (std::size_t k = 0; k < cm.size(); ++k)
    g.circuit_measures.push_back(to_rational(cm[k], "$.circuit_measures[" + std::to_string(k) + "]"));
  const Json& br = require(j, "branches", "$");
  if (!br.is_array()) schema_error("$.branches", "expected an array");
  if (static_cast<Index>(br.size()) != eta) schema_error("$.branches", "expected eta = " + std::to_string(eta) + " entries");
  for (std::size_t i = 0; i < br.size(); ++i) {
    const std::string where = "$.branches[" + std::to_string(i) + "]";
    const Json& e = br[i];
    const bool has_poly = e.is_object() && e.contains("poly");
    const bool has_values = e.is_object() && e.contains("values");
    if (has_poly == has_values) schema_error(where, "expected exactly one of \"poly\" or \"values\"");
    const char* key = has_poly ? "poly" : "values";
    const Json& arr = e[key];
    if (!arr.is_array() || arr.empty()) schema_error(where + "." + key, "expected a non-empty array");
    std::vector<Rational> xs;
    for (std::size_t k = 0; k < arr.size(); ++k)
      xs.push_back(to_rational(arr[k], where + "." + key + "[" + std::to_string(k) + "]"));
    g.branches.push_back(has_poly ? BranchMeasure::polynomial(std::move(xs)) : BranchMeasure::explicit_values(std::move(xs)));
  }
  try {
    g.validate();
  } catch (const ArgumentError& e) {
    schema_error("$", e.what());
  }
  return g;
}

Json from_point(const GraphPoint& p) {
  Json j;
  j["tag"] = p.is_circuit() ? "circuit" : "branch";
  j["i"] = p.i;
  if (!p.is_circuit()) j["j"] = p.j;
  return j;
}

Json from_report(const DefectReport& r) {
  Json j;
  j["m"] = r.m;
  j["residual_norm"] = r.residual_norm;
  j["support_bound"] = r.support_bound;
  j["verdict"] = r.verdict;
  Json sites = Json::array();
  for (const auto& [s, v] : r.per_site) sites.push_back(Json::array({s, v}));
  j["per_site"] = std::move(sites);
  return j;
}

Json from_report(const KernelConditionReport& r) {
  Json j;
  j["k"] = r.k;
  j["kernel_dim"] = r.kernel_dim;
  Json levels = Json::array();
  for (const auto& [n, v] : r.per_level) levels.push_back(Json::array({n, v}));
  j["per_level"] = std::move(levels);
  j["verdict"] = r.verdict;
  return j;
}

Json from_report(const GraphKernelReport& r) {
  Json j;
  j["k"] = r.k;
  j["verdict"] = r.verdict;
  Json v = Json::array();
  for (const auto& w : r.violations) {
    Json e;
    e["i"] = w.i;
    e["target"] = from_point(w.target);
    e["points"] = Json::array({from_point(w.first), from_point(w.second)});
    e["h_values"] = Json::array({w.h_first.str(), w.h_second.str()});
    v.push_back(std::move(e));
  }
  j["violations"] = std::move(v);
  j["min_h"] = r.min_h.str();
  return j;
}

Json from_report(const GraphMIsometryReport& r) {
  Json j;
  j["m"] = r.m;
  j["verdict"] = r.verdict;
  Json b = Json::array();
  for (const auto& f : r.branches) {
    Json e;
    Json coeffs = Json::array();
    for (const auto& c : f.fitted.coeffs()) coeffs.push_back(c.str());
    e["fitted_polynomial"] = std::move(coeffs);
    e["matches"] = f.matches;
    if (f.mismatch_at) e["mismatch_at"] = *f.mismatch_at;
    b.push_back(std::move(e));
  }
  j["branches"] = std::move(b);
  return j;
}

Json from_report(const WoldReport& r) {
  Json j;
  j["m"] = r.m;
  j["n_max"] = r.n_max;
  j["kernel_condition"] = from_report(r.kernel_condition);
  Json ladder;
  ladder["dims"] = r.ladder.dims();
  ladder["gram_offdiag"] = r.ladder.gram_offdiag;
  ladder["span_dim"] = r.ladder.span_dim;
  ladder["orthogonal"] = r.ladder_orthogonal;
  j["ladder"] = std::move(ladder);
  Json ks = Json::array();
  for (const auto& row : r.kernel_sum) {
    Json e;
    e["n"] = row.n;
    e["kernel_dim"] = row.kernel_dim;
    e["ladder_dim"] = row.ladder_dim;
    e["residual"] = row.residual;
    ks.push_back(std::move(e));
  }
  j["kernel_sum"] = std::move(ks);
  j["kernel_sum_holds"] = r.kernel_sum_holds;
  j["range_infinity_dim"] = r.range_infinity_dim;
  j["unitary_residual"] = r.unitary_residual;
  j["clause_kernel_condition"] = r.clause_kernel;
  j["clause_ladder"] = r.clause_ladder;
  j["agree"] = r.agree;
  j["excluded_band_start"] = r.excluded_band_start;
  return j;
}

Json from_shift_model(const ShiftModel& s) {
  Json j;
  j["fiber_dim"] = s.fiber_dim;
  j["intertwine_residual"] = s.intertwine_residual;
  Json w = Json::array();
  for (const auto& m : s.S_weights) w.push_back(from_matrix(m));
  j["weights"] = std::move(w);
  return j;
}

Json from_family(const PolynomialFamily& f) {
  Json j;
  j["m"] = f.m;
  Json atoms = Json::array();
  for (const auto& a : f.atoms) {
    Json e;
    e["eigvector_index"] = a.eigvector_index;
    e["newton_coeffs"] = a.newton_coeffs;
    atoms.push_back(std::move(e));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

}  // namespace mwold::json
