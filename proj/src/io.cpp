#include "frif/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "frif/error.hpp"

namespace frif {

namespace {

std::vector<double> number_array(const Json& node, const char* name,
                                 ErrorKind kind) {
  if (!node.is_array()) {
    throw Error(kind, std::string("'") + name + "' must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) {
      throw Error(kind, std::string("'") + name + "[" + std::to_string(i + 1) +
                            "]' is not a number");
    }
    out.push_back(node[i].get<double>());
  }
  return out;
}

std::vector<double> per_interval(const Json& doc, const char* name,
                                 std::size_t intervals, double fallback) {
  if (!doc.contains(name) || doc[name].is_null()) {
    return std::vector<double>(intervals, fallback);
  }
  const Json& node = doc[name];
  if (node.is_number()) return std::vector<double>(intervals, node.get<double>());
  auto values = number_array(node, name, ErrorKind::malformed_parameters);
  if (values.size() != intervals) {
    throw Error(ErrorKind::malformed_parameters,
                std::string("'") + name + "' has " + std::to_string(values.size()) +
                    " entries for " + std::to_string(intervals) + " intervals");
  }
  return values;
}

template <typename T>
std::optional<T> optional_integer(const Json& doc, const char* name) {
  if (!doc.contains(name) || doc[name].is_null()) return std::nullopt;
  const Json& node = doc[name];
  if (!node.is_number_integer() && !node.is_number_unsigned()) {
    throw Error(ErrorKind::malformed_parameters,
                std::string("'") + name + "' must be an integer");
  }
  if constexpr (std::is_unsigned_v<T>) {
    if (node.is_number_integer() && node.get<long long>() < 0) {
      throw Error(ErrorKind::malformed_parameters,
                  std::string("'") + name + "' must be non-negative");
    }
  }
  return node.get<T>();
}

void dump_into(const Json& node, std::string& out) {
  switch (node.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += node.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(node.get<long long>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(node.get<unsigned long long>());
      break;
    case Json::value_t::number_float:
      out += format_number(node.get<double>());
      break;
    case Json::value_t::string:
      out += node.dump();
      break;
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : node) {
        if (!first) out += ',';
        first = false;
        dump_into(item, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = node.begin(); it != node.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump_into(it.value(), out);
      }
      out += '}';
      break;
    }
    default:
      out += "null";
  }
}

Json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

Json double_array(std::span<const double> xs) {
  Json arr = Json::array();
  for (double x : xs) arr.push_back(finite_or_null(x));
  return arr;
}

Json bool_array(const std::vector<bool>& xs) {
  Json arr = Json::array();
  for (bool b : xs) arr.push_back(b);
  return arr;
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  if (value == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

HermiteData parse_data(const Json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorKind::malformed_data, "data must be a JSON object");
  }
  for (const char* key : {"knots", "values"}) {
    if (!doc.contains(key)) {
      throw Error(ErrorKind::malformed_data, std::string("data is missing '") + key + "'");
    }
  }
  auto knots = number_array(doc["knots"], "knots", ErrorKind::malformed_data);
  auto values = number_array(doc["values"], "values", ErrorKind::malformed_data);
  std::optional<std::vector<double>> derivatives;
  if (doc.contains("derivatives") && !doc["derivatives"].is_null()) {
    derivatives = number_array(doc["derivatives"], "derivatives",
                               ErrorKind::malformed_data);
  }
  return HermiteData(std::move(knots), std::move(values), std::move(derivatives));
}

IFSParameters parse_params(const Json& doc, std::size_t intervals) {
  if (doc.is_null()) return IFSParameters::classical(intervals);
  if (!doc.is_object()) {
    throw Error(ErrorKind::malformed_parameters, "params must be a JSON object");
  }
  IFSParameters p;
  p.alpha = per_interval(doc, "alpha", intervals, 0.0);
  p.u = per_interval(doc, "u", intervals, 1.0);
  p.v = per_interval(doc, "v", intervals, 0.0);
  p.smoothness_order = optional_integer<int>(doc, "k").value_or(1);
  if (p.smoothness_order != 1 && p.smoothness_order != 2) {
    throw Error(ErrorKind::malformed_parameters, "'k' must be 1 or 2");
  }
  return p;
}

ProblemDocument parse_problem(const Json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorKind::malformed_data, "problem must be a JSON object");
  }
  if (!doc.contains("data")) {
    throw Error(ErrorKind::malformed_data, "problem is missing 'data'");
  }
  ProblemDocument problem{parse_data(doc["data"]), std::nullopt, std::nullopt, {}};
  if (doc.contains("params") && !doc["params"].is_null()) {
    problem.params = parse_params(doc["params"], problem.data.intervals());
  }
  if (doc.contains("mode") && !doc["mode"].is_null()) {
    if (!doc["mode"].is_string()) {
      throw Error(ErrorKind::malformed_parameters, "'mode' must be a string");
    }
    problem.mode = parse_shape_mode(doc["mode"].get<std::string>());
  }
  if (doc.contains("options") && !doc["options"].is_null()) {
    const Json& opt = doc["options"];
    if (!opt.is_object()) {
      throw Error(ErrorKind::malformed_parameters, "'options' must be an object");
    }
    problem.options.depth = optional_integer<int>(opt, "depth");
    problem.options.grid = optional_integer<std::size_t>(opt, "grid");
    problem.options.iterations = optional_integer<int>(opt, "iterations");
    problem.options.derivative_order =
        optional_integer<int>(opt, "derivative_order").value_or(0);
  }
  return problem;
}

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::malformed_data, std::string("invalid JSON: ") + e.what());
  }
}

ProblemDocument parse_problem_text(std::string_view text) {
  return parse_problem(parse_json_text(text));
}

Json to_json(const CurveSamples& samples) {
  Json j;
  j["derivative_order"] = samples.derivative_order;
  j["method"] = to_string(samples.method);
  j["depth"] = samples.depth;
  j["residual"] = finite_or_null(samples.residual);
  j["count"] = samples.size();
  const auto xs = samples.abscissae();
  const auto ys = samples.ordinates();
  j["x"] = double_array(xs);
  j["y"] = double_array(ys);
  if (samples.derivative_order == 2) j["left"] = double_array(samples.left_limits);
  return j;
}

Json to_json(const IFSParameters& params) {
  return Json{{"alpha", double_array(params.alpha)},
              {"u", double_array(params.u)},
              {"v", double_array(params.v)},
              {"k", params.smoothness_order}};
}

Json to_json(const ValidationReport& report) {
  Json issues = Json::array();
  for (const auto& issue : report.issues) {
    issues.push_back({{"interval", issue.interval},
                      {"constraint", issue.constraint},
                      {"detail", issue.detail}});
  }
  return Json{{"ok", report.ok()}, {"issues", issues}};
}

Json to_json(const ShapeBounds& bounds) {
  return Json{{"mode", to_string(bounds.mode)},
              {"alpha_max", double_array(bounds.alpha_max)},
              {"alpha_max_inclusive", bool_array(bounds.alpha_max_inclusive)},
              {"alpha", double_array(bounds.alpha)},
              {"u", double_array(bounds.u)},
              {"v_min", double_array(bounds.v_min)},
              {"degenerate", bool_array(bounds.degenerate)},
              {"derivatives", double_array(bounds.derivatives)}};
}

Json to_json(const ShapeReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"x", finite_or_null(v.x)},
                          {"quantity", v.quantity},
                          {"value", finite_or_null(v.value)}});
  }
  return Json{{"verified", report.verified},
              {"tolerance", report.tolerance},
              {"scale", report.scale},
              {"violations", violations}};
}

Json to_json(const ErrorBoundReport& r) {
  return Json{{"M", r.M},
              {"s", r.s},
              {"K0", r.K0},
              {"classical_norm_bound", r.classical_norm_bound},
              {"alpha_inf", r.alpha_inf},
              {"h", r.h},
              {"perturbation_bound", r.bound},
              {"measured_sup_distance", r.measured_sup_distance},
              {"depth", r.depth}};
}

Json to_json(const OrderFit& fit) {
  Json levels = Json::array();
  for (const auto& l : fit.levels) {
    levels.push_back({{"level", l.level},
                      {"knots", l.knots},
                      {"h", l.h},
                      {"error", l.error},
                      {"running_slope", finite_or_null(l.running_slope)}});
  }
  return Json{{"target", fit.target},
              {"mode", to_string(fit.mode)},
              {"k", fit.k},
              {"slope", finite_or_null(fit.slope)},
              {"exact", fit.exact},
              {"levels", levels}};
}

Json error_json(const Error& error) {
  Json j{{"error", to_string(error.kind())}, {"message", error.what()}};
  if (const auto* failure = dynamic_cast<const ValidationFailure*>(&error)) {
    j["issues"] = to_json(failure->report())["issues"];
  }
  return j;
}

std::string dump_json(const Json& doc) {
  std::string out;
  dump_into(doc, out);
  return out;
}

std::string to_csv(const CurveSamples& samples) {
  const bool left = samples.derivative_order == 2;
  std::string out = left ? "x,y,left\n" : "x,y\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out += format_number(samples.entries[i].x);
    out += ',';
    out += format_number(samples.entries[i].y);
    if (left) {
      out += ',';
      const double l = samples.left_limits[i];
      if (std::isfinite(l)) out += format_number(l);
    }
    out += '\n';
  }
  return out;
}

std::string to_csv(const OrderFit& fit) {
  std::string out = "level,knots,h,error,running_slope\n";
  for (const auto& l : fit.levels) {
    out += std::to_string(l.level) + ',' + std::to_string(l.knots) + ',' +
           format_number(l.h) + ',' + format_number(l.error) + ',';
    if (std::isfinite(l.running_slope)) out += format_number(l.running_slope);
    out += '\n';
  }
  return out;
}

std::string to_svg(const CurveSamples& samples, std::span<const double> knots) {
  if (samples.size() == 0) {
    throw Error(ErrorKind::insufficient_data, "nothing to render");
  }
  double x_lo = samples.entries.front().x, x_hi = samples.entries.back().x;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  for (const auto& p : samples.entries) {
    if (!std::isfinite(p.y)) continue;
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  if (!(y_lo <= y_hi)) y_lo = y_hi = 0.0;
  double w = x_hi - x_lo, h = y_hi - y_lo;
  if (w <= 0.0) w = 1.0;
  if (h <= 0.0) h = std::max(std::abs(y_hi), 1.0);
  const double px = 0.05 * w, py = 0.05 * h;

  // Flip y by plotting -y; the viewBox then covers [-y_hi, -y_lo].
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
      << "preserveAspectRatio=\"none\" viewBox=\"" << format_number(x_lo - px) << ' '
      << format_number(-(y_lo + h) - py) << ' ' << format_number(w + 2 * px) << ' '
      << format_number(h + 2 * py) << "\">\n";
  svg << "<polyline fill=\"none\" stroke=\"#1f4e9a\" stroke-width=\"1.5\" "
         "vector-effect=\"non-scaling-stroke\" points=\"";
  bool first = true;
  for (const auto& p : samples.entries) {
    if (!std::isfinite(p.y)) continue;
    if (!first) svg << ' ';
    first = false;
    svg << format_number(p.x) << ',' << format_number(-p.y);
  }
  svg << "\"/>\n";

  for (double k : knots) {
    auto it = std::lower_bound(samples.entries.begin(), samples.entries.end(), k,
                               [](const SamplePoint& p, double x) { return p.x < x; });
    double y;
    if (it == samples.entries.end()) {
      y = samples.entries.back().y;
    } else if (it->x == k || it == samples.entries.begin()) {
      y = it->y;
    } else {
      const auto& a = *(it - 1);
      y = a.y + (it->y - a.y) * (k - a.x) / (it->x - a.x);
    }
    if (!std::isfinite(y)) continue;
    svg << "<path d=\"M" << format_number(k) << ',' << format_number(-y)
        << "h0\" stroke=\"#c0392b\" stroke-width=\"7\" stroke-linecap=\"round\" "
           "vector-effect=\"non-scaling-stroke\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace frif
