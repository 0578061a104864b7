#include "mwold/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

#include "mwold/completion.hpp"
#include "mwold/errors.hpp"
#include "mwold/graphops.hpp"
#include "mwold/json_io.hpp"
#include "mwold/miso.hpp"
#include "mwold/models.hpp"
#include "mwold/wold.hpp"

namespace mwold::cli {

using json::Json;

namespace {

constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::CheckMiso, "check-miso"}, {Command::KernelCond, "kernel-cond"}, {Command::Complete, "complete"},
    {Command::Recover, "recover"},      {Command::Graph, "graph"},            {Command::Wold, "wold"},
    {Command::ShiftModel, "shift-model"}, {Command::Examples, "examples"},
};

constexpr Index kDefaultJ = 8;
constexpr Index kDefaultCompletionSites = 16;
constexpr Index kExamplesN = 14;
constexpr Index kExamplesJ = 10;

struct Outcome {
  bool verdict = false;
  Json report;
};

Json read_input(const std::string& path) {
  if (path.empty()) throw ArgumentError("--input is required for this command");
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw ArgumentError("cannot open input file '" + path + "'");
    in = &file;
  }
  return Json::parse(*in);
}

/// Flag value, else the input field of the same name, else the fallback.
Index param(const std::optional<Index>& flag, const Json& input, const char* field, std::optional<Index> fallback) {
  if (flag) return *flag;
  if (input.is_object() && input.contains(field)) {
    const Json& v = input.at(field);
    if (!v.is_number_integer()) throw ArgumentError(std::string("schema violation at '") + field + "': expected an integer");
    return v.get<Index>();
  }
  if (fallback) return *fallback;
  throw ArgumentError(std::string("missing parameter '") + field + "' (flag --" + field + " or input field)");
}

struct OperatorInput {
  std::string kind;
  FiniteOperator op;
  std::optional<ShiftSpec> shift;
  std::optional<OneCircuitGraph> graph;
  Index J = 0;
};

OperatorInput load_operator(const Json& input, const RunConfig& cfg) {
  if (!input.is_object()) throw ArgumentError("schema violation at '<root>': expected an object");
  OperatorInput out;
  if (input.contains("weights")) {
    out.kind = "shift";
    out.shift = json::to_shift_spec(input);
    out.op = assemble_shift(*out.shift, cfg.tol);
  } else if (input.contains("matrix")) {
    out.kind = "operator";
    out.op = json::to_finite_operator(input);
  } else if (input.contains("kappa")) {
    out.kind = "graph";
    out.graph = json::to_graph(input);
    out.J = cfg.J.value_or(kDefaultJ);
    out.op = assemble_composition(*out.graph, out.J);
  } else {
    throw ArgumentError("schema violation at '<root>': expected one of 'weights', 'matrix', 'kappa'");
  }
  return out;
}

Json truncation_of(const OperatorInput& in) {
  Json t = Json::object();
  t["input_kind"] = in.kind;
  t["dimension"] = in.op.size();
  if (in.shift) t["N"] = in.shift->N;
  if (in.graph) t["J"] = in.J;
  if (in.op.exact_support) t["exact_support"] = *in.op.exact_support;
  else t["exact_support"] = nullptr;
  return t;
}

Outcome check_miso(const Json& input, const RunConfig& cfg, Json& truncation) {
  const OperatorInput in = load_operator(input, cfg);
  truncation = truncation_of(in);
  const Index m = param(cfg.m, input, "m", std::nullopt);
  const DefectReport rep = is_m_isometry(in.op, m, cfg.tol);
  Json r = json::from_report(rep);
  if (m >= 2) r["strict"] = is_strict_m_isometry(in.op, m, cfg.tol);
  if (in.shift) {
    Json sites = Json::array();
    for (Index s = 0; s + m <= in.shift->N - 1; ++s)
      sites.push_back(Json::array({s, spectral_norm(shift_site_defect(*in.shift, m, s))}));
    r["site_defects"] = std::move(sites);
  }
  return {rep.verdict, std::move(r)};
}

Outcome kernel_cond(const Json& input, const RunConfig& cfg, Json& truncation) {
  const OperatorInput in = load_operator(input, cfg);
  truncation = truncation_of(in);
  const Index k = param(cfg.k, input, "k", 1);
  const KernelConditionReport rep = kernel_condition(in.op, k, cfg.tol);
  return {rep.verdict, json::from_report(rep)};
}

Outcome complete(const Json& input, const RunConfig& cfg, Json& truncation) {
  if (!input.is_object()) throw ArgumentError("schema violation at '<root>': expected an object");
  const Index m = param(cfg.m, input, "m", std::nullopt);
  if (m < 2) throw ArgumentError("complete: m must be >= 2");
  const Index N = cfg.N.value_or(kDefaultCompletionSites);
  truncation = Json::object();
  truncation["N"] = N;

  Json r = Json::object();
  r["m"] = m;
  try {
    std::optional<WeightGenerator> gen;
    if (input.contains("xi")) {
      const Json& xi = input.at("xi");
      if (!xi.is_array()) throw ArgumentError("schema violation at 'xi': expected an array of numbers");
      std::vector<double> values;
      for (const auto& v : xi) {
        if (!v.is_number()) throw ArgumentError("schema violation at 'xi': expected an array of numbers");
        values.push_back(v.get<double>());
      }
      gen.emplace(complete_scalar(values, static_cast<std::size_t>(m)));
    } else if (input.contains("initial")) {
      const Json& init = input.at("initial");
      if (!init.is_array()) throw ArgumentError("schema violation at 'initial': expected an array of matrices");
      std::vector<ComplexMatrix> mats;
      for (std::size_t i = 0; i < init.size(); ++i)
        mats.push_back(json::to_matrix(init[i], "initial[" + std::to_string(i) + "]"));
      gen.emplace(complete_operator(mats, static_cast<std::size_t>(m), cfg.tol, cfg.seed.value_or(0x5eed)));
    } else {
      throw ArgumentError("schema violation at '<root>': expected 'xi' or 'initial'");
    }
    r["feasible"] = true;
    r["family"] = json::from_family(gen->family());
    const auto [upper, lower] = gen->ratio_bounds();
    r["ratio_bounds"] = Json::array({upper, lower});
    r["shift"] = json::from_shift_spec(gen->materialize(N));
    return {true, std::move(r)};
  } catch (const CompletionInfeasible& e) {
    r["feasible"] = false;
    r["atom"] = e.atom();
    r["witness"] = e.witness();
    return {false, std::move(r)};
  }
}

Outcome recover(const Json& input, const RunConfig& cfg, Json& truncation) {
  if (!input.is_object() || !input.contains("weights"))
    throw ArgumentError("schema violation at 'weights': recover expects a shift description");
  const ShiftSpec spec = json::to_shift_spec(input);
  truncation = Json::object();
  truncation["N"] = spec.N;
  const Index m = param(cfg.m, input, "m", std::nullopt);
  Json r = Json::object();
  r["m"] = m;
  try {
    r["family"] = json::from_family(recover_family(spec, static_cast<std::size_t>(m), cfg.tol, cfg.seed.value_or(0x5eed)));
    r["m_isometric"] = true;
    return {true, std::move(r)};
  } catch (const NotMIsometric& e) {
    r["m_isometric"] = false;
    r["max_difference"] = e.max_difference();
    return {false, std::move(r)};
  }
}

Outcome graph(const Json& input, const RunConfig& cfg, Json& truncation) {
  if (!input.is_object() || !input.contains("kappa"))
    throw ArgumentError("schema violation at 'kappa': graph expects a one-circuit graph description");
  const OneCircuitGraph g = json::to_graph(input);
  truncation = Json::object();
  if (const auto depth = g.known_depth()) truncation["known_depth"] = *depth;
  else truncation["known_depth"] = nullptr;

  const Index k = param(cfg.k, input, "k", 1);
  Json r = Json::object();
  const GraphKernelReport kc = kernel_condition_graph(g, k);
  bool verdict = kc.verdict;
  r["kernel_condition"] = json::from_report(kc);
  if (cfg.m || input.contains("m")) {
    const GraphMIsometryReport mi = is_m_isometry_graph(g, param(cfg.m, input, "m", std::nullopt));
    r["m_isometry"] = json::from_report(mi);
    verdict = verdict && mi.verdict;
  }
  try {
    const auto [a, b] = linear_branch_parameters(g);
    Json lb = Json::object();
    lb["a"] = json::from_rational(a);
    lb["b"] = json::from_rational(b);
    Json products = Json::array();
    for (Index kk = 0; kk <= 3; ++kk) {
      Json row = Json::object();
      row["k"] = kk;
      row["l"] = kk + 1;
      row["exact"] = json::from_rational(mk_inner_product_exact(g, kk, kk + 1));
      row["float"] = mk_inner_product(g, kk, kk + 1, 1.0, 1.0, ArithmeticMode::Float).real();
      products.push_back(std::move(row));
    }
    lb["mk_inner_products"] = std::move(products);
    r["linear_branch"] = std::move(lb);
  } catch (const PreconditionError&) {
    // Not a linear-branch model.
  }
  r["verdict"] = verdict;
  return {verdict, std::move(r)};
}

Outcome wold(const Json& input, const RunConfig& cfg, Json& truncation) {
  const OperatorInput in = load_operator(input, cfg);
  truncation = truncation_of(in);
  const Index m = param(cfg.m, input, "m", 2);
  const WoldReport rep = admits_wold(in.op, m, cfg.tol, cfg.n_max);
  truncation["n_max"] = rep.n_max;
  truncation["excluded_band_start"] = rep.excluded_band_start;
  Json r = json::from_report(rep);
  const bool verdict = rep.clause_kernel && rep.clause_ladder;
  r["verdict"] = verdict;
  return {verdict, std::move(r)};
}

Outcome shift_model_cmd(const Json& input, const RunConfig& cfg, Json& truncation) {
  const OperatorInput in = load_operator(input, cfg);
  truncation = truncation_of(in);
  Json r = Json::object();
  try {
    const ShiftModel model = shift_model(in.op, cfg.n_max, cfg.tol, cfg.seed);
    truncation["n_max"] = static_cast<Index>(model.S_weights.size());
    r = json::from_shift_model(model);
    bool verdict = model.intertwine_residual <= cfg.tol.tol_identity;
    if (cfg.m || input.contains("m")) {
      const Index m = param(cfg.m, input, "m", std::nullopt);
      const DefectReport assembled = is_m_isometry(assemble_shift(model.as_shift_spec(), cfg.tol), m, cfg.tol);
      r["assembled_defect"] = json::from_report(assembled);
      verdict = verdict && assembled.verdict;
    }
    r["verdict"] = verdict;
    return {verdict, std::move(r)};
  } catch (const NotShiftEquivalent& e) {
    r["verdict"] = false;
    r["failed_clause"] = e.clause();
    r["residual"] = e.residual();
    return {false, std::move(r)};
  }
}

struct ExampleRow {
  std::string model;
  std::string property;
  bool expected = false;
  bool observed = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

std::vector<ExampleRow> example_rows(const RunConfig& cfg) {
  const ToleranceConfig& tol = cfg.tol;
  const Index N = cfg.N.value_or(kExamplesN);
  const Index J = cfg.J.value_or(kExamplesJ);
  std::vector<ExampleRow> rows;

  {
    const WeightGenerator gen = complete_scalar({std::sqrt(2.0), std::sqrt(1.5)}, 3);
    const auto& c = gen.atoms().front().newton_coeffs();
    const bool linear = std::abs(c[0] - 1) <= 1e-12 && std::abs(c[1] - 1) <= 1e-12 && std::abs(c[2]) <= 1e-12;
    rows.push_back({"scalar completion xi=(sqrt2, sqrt(3/2))", "W(n) = 1 + n", true, linear,
                    "newton (" + fmt(c[0]) + ", " + fmt(c[1]) + ", " + fmt(c[2]) + ")"});
  }
  {
    bool feasible = true;
    std::string detail;
    try {
      complete_scalar({std::sqrt(2.0), 1 / std::sqrt(2.0)}, 3);
    } catch (const CompletionInfeasible& e) {
      feasible = false;
      detail = "witness n = " + std::to_string(e.witness());
    }
    rows.push_back({"scalar completion xi=(sqrt2, 1/sqrt2)", "completion feasible", false, feasible, detail});
  }
  {
    const ShiftSpec spec = models::dirichlet_shift(N);
    const FiniteOperator t = assemble_shift(spec, tol);
    const DefectReport two = is_m_isometry(t, 2, tol);
    rows.push_back({"dirichlet shift", "2-isometry", true, two.verdict, "defect " + fmt(two.residual_norm)});
    rows.push_back({"dirichlet shift", "strict 2-isometry", true, is_strict_m_isometry(t, 2, tol), ""});
    const WoldReport w = admits_wold(t, 2, tol);
    rows.push_back({"dirichlet shift", "wold clauses agree (m=2)", true, w.agree && w.clause_ladder,
                    "kernel " + std::to_string(w.clause_kernel) + " ladder " + std::to_string(w.clause_ladder)});
  }
  {
    const ShiftSpec spec = models::polynomial_shift({1, 2, 1}, N);
    const DefectReport two = is_m_isometry(assemble_shift(spec, tol), 2, tol);
    const DefectReport three = is_m_isometry(assemble_shift(spec, tol), 3, tol);
    rows.push_back({"shift s(n)=(n+1)^2", "2-isometry", false, two.verdict, "defect " + fmt(two.residual_norm)});
    rows.push_back({"shift s(n)=(n+1)^2", "3-isometry", true, three.verdict, "defect " + fmt(three.residual_norm)});
  }
  {
    const OneCircuitGraph g = models::linear_branch_graph(1, 1);
    const std::string name = "linear branch graph a=b=1";
    const Rational ip = mk_inner_product_exact(g, 2, 3);
    rows.push_back({name, "<M_2, M_3> != 0", true, ip != 0, "exact " + ip.str()});
    rows.push_back({name, "1-kernel condition", true, kernel_condition_graph(g, 1).verdict, ""});
    const GraphKernelReport k2 = kernel_condition_graph(g, 2);
    std::string witness;
    if (!k2.violations.empty())
      witness = "h " + k2.violations.front().h_first.str() + " vs " + k2.violations.front().h_second.str();
    rows.push_back({name, "2-kernel condition", false, k2.verdict, witness});
    rows.push_back({name, "3-isometry", true, is_m_isometry_graph(g, 3).verdict, ""});
    const FiniteOperator c = assemble_composition(g, J);
    rows.push_back({name, "expansive", true, is_expansive(c, tol), "margin " + fmt(expansivity_margin(c))});
    const WoldReport w = admits_wold(c, 3, tol);
    rows.push_back({name, "wold decomposition (m=3)", false, w.clause_kernel && w.clause_ladder,
                    "clauses agree: " + std::string(w.agree ? "yes" : "no")});
  }
  {
    const FiniteOperator a = assemble_shift(models::dirichlet_shift(N), tol);
    const FiniteOperator b = assemble_shift(models::polynomial_shift({1, 2, 1}, N), tol);
    const ShiftModel model = shift_model(direct_sum(a, b), std::nullopt, tol);
    rows.push_back({"direct sum of polynomial shifts", "shift model, fiber 2", true,
                    model.fiber_dim == 2 && model.intertwine_residual <= tol.tol_identity,
                    "residual " + fmt(model.intertwine_residual)});
  }
  {
    const ShiftModel model = shift_model(models::rotation_mixed_shift({1, 1, 1}, std::max<Index>(N, 12)), std::nullopt, tol);
    rows.push_back({"rotation-mixed l2 operator", "shift model, fiber 1", true,
                    model.fiber_dim == 1 && model.intertwine_residual <= tol.tol_identity,
                    "residual " + fmt(model.intertwine_residual)});
  }
  {
    const OneCircuitGraph g = models::geometric_graph(J + 4);
    rows.push_back({"geometric-measure graph", "3-kernel condition", true, kernel_condition_graph(g, 3).verdict, ""});
    rows.push_back({"geometric-measure graph", "2-isometry", false, is_m_isometry_graph(g, 2).verdict, ""});
    const WoldReport w = admits_wold(assemble_composition(g, J), 2, tol);
    rows.push_back({"geometric-measure graph", "wold clauses agree (m=2)", true, w.agree, ""});
  }
  return rows;
}

Outcome examples(const RunConfig& cfg, Json& truncation) {
  truncation = Json::object();
  truncation["N"] = cfg.N.value_or(kExamplesN);
  truncation["J"] = cfg.J.value_or(kExamplesJ);
  bool all = true;
  Json rows = Json::array();
  for (const auto& row : example_rows(cfg)) {
    Json j = Json::object();
    j["model"] = row.model;
    j["property"] = row.property;
    j["expected"] = row.expected;
    j["observed"] = row.observed;
    j["pass"] = row.expected == row.observed;
    j["detail"] = row.detail;
    all = all && row.expected == row.observed;
    rows.push_back(std::move(j));
  }
  Json r = Json::object();
  r["rows"] = std::move(rows);
  r["all_pass"] = all;
  return {all, std::move(r)};
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "null";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  std::string text = json::dump(v, 0);
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, path.empty() ? key : path + "." + key, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(path, scalar_text(j));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string render(const Json& doc, Format format) {
  if (format == Format::Json) return json::dump(doc);
  const Json& report = doc.at("report");
  std::ostringstream os;
  if (report.contains("rows")) {
    if (format == Format::Csv) {
      os << "model,property,expected,observed,pass,detail\n";
      for (const auto& r : report.at("rows"))
        os << csv_field(r.at("model").get<std::string>()) << ',' << csv_field(r.at("property").get<std::string>()) << ','
           << scalar_text(r.at("expected")) << ',' << scalar_text(r.at("observed")) << ',' << scalar_text(r.at("pass"))
           << ',' << csv_field(r.at("detail").get<std::string>()) << '\n';
    } else {
      for (const auto& r : report.at("rows"))
        os << (r.at("pass").get<bool>() ? "PASS " : "FAIL ") << std::left << std::setw(42)
           << r.at("model").get<std::string>() << std::setw(30) << r.at("property").get<std::string>()
           << r.at("detail").get<std::string>() << '\n';
      os << "all_pass: " << scalar_text(report.at("all_pass")) << '\n';
    }
    return os.str();
  }
  std::vector<std::pair<std::string, std::string>> leaves;
  flatten(doc, "", leaves);
  if (format == Format::Csv) {
    os << "field,value\n";
    for (const auto& [k, v] : leaves) os << csv_field(k) << ',' << csv_field(v) << '\n';
  } else {
    for (const auto& [k, v] : leaves) os << k << ": " << v << '\n';
  }
  return os.str();
}

}  // namespace

Command command_from_string(const std::string& s) {
  for (const auto& [c, name] : kCommandNames)
    if (s == name) return c;
  throw ArgumentError("unknown command '" + s + "'");
}

std::string to_string(Command c) {
  for (const auto& [cc, name] : kCommandNames)
    if (cc == c) return name;
  return "unknown";
}

Format format_from_string(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "text") return Format::Text;
  throw ArgumentError("unknown format '" + s + "' (expected json, csv or text)");
}

void RunConfig::validate() const {
  tol.validate();
  auto positive = [](const std::optional<Index>& v, const char* name) {
    if (v && *v <= 0) throw ArgumentError(std::string("--") + name + " must be positive");
  };
  positive(N, "N");
  positive(J, "J");
  positive(n_max, "n-max");
  positive(m, "m");
  positive(k, "k");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Json doc = Json::object();
  bool verdict = false;
  try {
    config.validate();
    Json truncation;
    Outcome outcome;
    if (config.command == Command::Examples) {
      outcome = examples(config, truncation);
    } else {
      const Json input = read_input(config.input_path);
      switch (config.command) {
        case Command::CheckMiso: outcome = check_miso(input, config, truncation); break;
        case Command::KernelCond: outcome = kernel_cond(input, config, truncation); break;
        case Command::Complete: outcome = complete(input, config, truncation); break;
        case Command::Recover: outcome = recover(input, config, truncation); break;
        case Command::Graph: outcome = graph(input, config, truncation); break;
        case Command::Wold: outcome = wold(input, config, truncation); break;
        case Command::ShiftModel: outcome = shift_model_cmd(input, config, truncation); break;
        case Command::Examples: break;
      }
    }
    verdict = outcome.verdict;
    doc["command"] = to_string(config.command);
    doc["verdict"] = verdict;
    doc["tolerances"] = json::from_tolerance(config.tol);
    doc["truncation"] = std::move(truncation);
    if (config.seed) doc["seed"] = *config.seed;
    doc["report"] = std::move(outcome.report);
  } catch (const Json::parse_error& e) {
    err << "error: malformed JSON input: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  const std::string text = render(doc, config.format);
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary);
    if (!file || !(file << text)) {
      err << "error: cannot write '" << *config.output_path << "'\n";
      return kExitError;
    }
  } else {
    out << text;
  }
  return verdict ? kExitTrue : kExitFalse;
}

}  // namespace mwold::cli
