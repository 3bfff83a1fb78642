#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "frif/convergence.hpp"
#include "frif/data_model.hpp"
#include "frif/evaluator.hpp"
#include "frif/ifs.hpp"
#include "frif/shape.hpp"

namespace frif {

using Json = nlohmann::json;

struct EvaluationOptions {
  std::optional<int> depth;
  std::optional<std::size_t> grid;  // Picard grid size; selects the Picard path
  std::optional<int> iterations;
  int derivative_order = 0;
};

/// {"data": {...}, "params": {...}, "mode": "monotone"|"convex",
///  "options": {"depth", "grid", "iterations", "derivative_order"}}
/// Only "data" is required.
struct ProblemDocument {
  HermiteData data;
  std::optional<IFSParameters> params;
  std::optional<ShapeMode> mode;
  EvaluationOptions options;
};

/// {"knots": [...], "values": [...], "derivatives": [...] | null}.
/// Throws Error(malformed_data).
HermiteData parse_data(const Json& doc);

/// {"alpha": [...], "u": [...], "v": [...], "k": 1}. Missing arrays default to
/// alpha = 0, u = 1, v = 0; a bare number is broadcast to every interval.
/// Throws Error(malformed_parameters).
IFSParameters parse_params(const Json& doc, std::size_t intervals);

ProblemDocument parse_problem(const Json& doc);
/// Parses text first; syntax errors are Error(malformed_data).
Json parse_json_text(std::string_view text);
ProblemDocument parse_problem_text(std::string_view text);

Json to_json(const CurveSamples& samples);
Json to_json(const IFSParameters& params);
Json to_json(const ValidationReport& report);
Json to_json(const ShapeBounds& bounds);
Json to_json(const ShapeReport& report);
Json to_json(const ErrorBoundReport& report);
Json to_json(const OrderFit& fit);
Json error_json(const Error& error);

/// Compact JSON with every floating-point number written with 17 significant
/// digits and non-finite numbers written as null.
std::string dump_json(const Json& doc);

/// "x,y" rows (plus a "left" column for second derivatives).
std::string to_csv(const CurveSamples& samples);
/// "level,knots,h,error,running_slope" rows.
std::string to_csv(const OrderFit& fit);
/// Polyline of the samples with zero-length round-capped markers where the
/// curve crosses each knot abscissa. No text elements.
std::string to_svg(const CurveSamples& samples, std::span<const double> knots);

std::string format_number(double value);

}  // namespace frif
