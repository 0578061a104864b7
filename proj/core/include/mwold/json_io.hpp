#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mwold/completion.hpp"
#include "mwold/graphops.hpp"
#include "mwold/linalg.hpp"
#include "mwold/miso.hpp"
#include "mwold/operators.hpp"
#include "mwold/wold.hpp"

namespace mwold::json {

using Json = nlohmann::ordered_json;

/// Serializes with fixed key order and every float printed with "%.17g".
std::string dump(const Json& j, int indent = 2);

Json from_matrix(const ComplexMatrix& m);
/// {"rows", "cols", "data": [[re, im] | re, ...]}; `field` names the value in errors.
ComplexMatrix to_matrix(const Json& j, const std::string& field);

Json from_rational(const Rational& r);
/// Accepts a JSON number (converted exactly) or a "p/q" string.
Rational to_rational(const Json& j, const std::string& field);

Json from_tolerance(const ToleranceConfig& tol);

Json from_shift_spec(const ShiftSpec& spec);
ShiftSpec to_shift_spec(const Json& j);

Json from_finite_operator(const FiniteOperator& t);
FiniteOperator to_finite_operator(const Json& j);

Json from_graph(const OneCircuitGraph& g);
OneCircuitGraph to_graph(const Json& j);

Json from_point(const GraphPoint& p);

Json from_report(const DefectReport& r);
Json from_report(const KernelConditionReport& r);
Json from_report(const GraphKernelReport& r);
Json from_report(const GraphMIsometryReport& r);
Json from_report(const WoldReport& r);
Json from_shift_model(const ShiftModel& s);
Json from_family(const PolynomialFamily& f);

}  // namespace mwold::json
