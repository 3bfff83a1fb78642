#include "frif/service.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "httplib.h"

#include "frif/error.hpp"

namespace frif {

namespace {

constexpr double kDefaultMargin = 0.9;
constexpr double kVerifyTolerance = 1e-9;

const char* const kFallbackIndex = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>frif</title></head>
<body>
<h1>frif service</h1>
<p>POST JSON to <code>/api/evaluate</code>, <code>/api/bounds</code> or
<code>/api/autoselect</code>. Start the server with <code>--static DIR</code>
to host the explorer bundle here.</p>
</body></html>
)";

int fitting_depth(std::size_t knots, int depth, std::size_t max_points) {
  while (depth > 1 && recursion_point_count(knots, depth) > max_points) --depth;
  return depth;
}

ShapeMode required_mode(const Json& doc) {
  if (!doc.contains("mode") || !doc["mode"].is_string()) {
    throw Error(ErrorKind::malformed_parameters,
                "'mode' must be \"monotone\" or \"convex\"");
  }
  return parse_shape_mode(doc["mode"].get<std::string>());
}

std::vector<double> optional_vector(const Json& doc, const char* name,
                                    std::size_t intervals) {
  if (!doc.contains(name) || doc[name].is_null()) return {};
  // Reuse the params parser for length and type checks.
  return parse_params(Json{{"alpha", doc[name]}}, intervals).alpha;
}

template <typename F>
HttpReply guarded(F&& body) {
  try {
    return HttpReply{200, body()};
  } catch (const Error& e) {
    return HttpReply{status_for(e), dump_json(error_json(e))};
  } catch (const std::exception& e) {
    return HttpReply{500, dump_json(Json{{"error", "internal"}, {"message", e.what()}})};
  }
}

}  // namespace

IFSParameters resolve_parameters(const ProblemDocument& problem) {
  if (problem.params) return *problem.params;
  if (problem.mode) {
    return auto_select(with_estimated_derivatives(problem.data), *problem.mode,
                       kDefaultMargin)
        .params;
  }
  return IFSParameters::classical(problem.data.intervals());
}

CurveSamples evaluate_problem(const ProblemDocument& problem,
                              std::size_t max_points) {
  HermiteData data = with_estimated_derivatives(problem.data);
  IFSParameters params;
  if (problem.params) {
    params = *problem.params;
  } else if (problem.mode) {
    ShapeSelection sel = auto_select(data, *problem.mode, kDefaultMargin);
    data = sel.data;
    params = sel.params;
  } else {
    params = IFSParameters::classical(data.intervals());
  }

  const auto& opt = problem.options;
  if (opt.derivative_order < 0 || opt.derivative_order > 2) {
    throw Error(ErrorKind::malformed_parameters, "derivative order must be 0, 1 or 2");
  }

  if (opt.grid) {
    if (opt.derivative_order != 0) {
      throw Error(ErrorKind::malformed_parameters,
                  "Picard evaluation produces g only (derivative order 0)");
    }
    if (*opt.grid > max_points) {
      throw Error(ErrorKind::resource_limit,
                  "grid of " + std::to_string(*opt.grid) + " points exceeds the cap of " +
                      std::to_string(max_points));
    }
    int iterations = 0;
    if (opt.iterations) {
      iterations = *opt.iterations;
    } else {
      const PicardResult probe = picard_evaluate(data, params, *opt.grid, 1);
      double scale = 1.0;
      for (double y : data.values()) scale = std::max(scale, std::abs(y));
      iterations = std::min(
          10000, std::max(1, picard_iterations_for(max_abs_scaling(params),
                                                   probe.initial_oscillation,
                                                   1e-12 * scale)));
    }
    return picard_evaluate(data, params, *opt.grid, iterations).samples;
  }

  const int depth = opt.depth ? *opt.depth : default_depth(data.size(), max_points);
  switch (opt.derivative_order) {
    case 1:
      return sample_derivative_fif(data, params, depth, max_points);
    case 2:
      return sample_second_derivative_fif(data, params, depth, max_points);
    default:
      return sample_fif(data, params, depth, max_points);
  }
}

AutoselectOutcome run_autoselect(const HermiteData& data, ShapeMode mode,
                                 double margin, int depth,
                                 std::size_t max_points) {
  ShapeSelection selection =
      auto_select(with_estimated_derivatives(data), mode, margin);
  const int d = fitting_depth(data.size(), depth, max_points);
  const CurveSamples samples = sample_fif(selection.data, selection.params, d, max_points);
  ShapeReport report = verify_shape(samples, mode, kVerifyTolerance);
  return AutoselectOutcome{std::move(selection), std::move(report), d};
}

Json to_json(const AutoselectOutcome& outcome) {
  const auto d = outcome.selection.data.derivatives();
  return Json{{"mode", to_string(outcome.selection.bounds.mode)},
              {"params", to_json(outcome.selection.params)},
              {"derivatives", std::vector<double>(d.begin(), d.end())},
              {"bounds", to_json(outcome.selection.bounds)},
              {"report", to_json(outcome.report)},
              {"depth", outcome.depth}};
}

int status_for(const Error& error) {
  return error.kind() == ErrorKind::resource_limit ? 413 : 400;
}

HttpReply handle_evaluate(std::string_view body) {
  return guarded([&] {
    return dump_json(to_json(evaluate_problem(parse_problem_text(body))));
  });
}

HttpReply handle_bounds(std::string_view body) {
  return guarded([&] {
    const Json doc = parse_json_text(body);
    if (!doc.is_object() || !doc.contains("data")) {
      throw Error(ErrorKind::malformed_data, "request is missing 'data'");
    }
    const HermiteData data = with_estimated_derivatives(parse_data(doc["data"]));
    const ShapeMode mode = required_mode(doc);
    auto u = optional_vector(doc, "u", data.intervals());
    if (u.empty()) u.assign(data.intervals(), 1.0);
    const auto alpha = optional_vector(doc, "alpha", data.intervals());
    return dump_json(to_json(shape_bounds(mode, data, u, alpha)));
  });
}

HttpReply handle_autoselect(std::string_view body) {
  return guarded([&] {
    const Json doc = parse_json_text(body);
    if (!doc.is_object() || !doc.contains("data")) {
      throw Error(ErrorKind::malformed_data, "request is missing 'data'");
    }
    const HermiteData data = parse_data(doc["data"]);
    const ShapeMode mode = required_mode(doc);
    double margin = kDefaultMargin;
    if (doc.contains("margin") && !doc["margin"].is_null()) {
      if (!doc["margin"].is_number()) {
        throw Error(ErrorKind::malformed_parameters, "'margin' must be a number");
      }
      margin = doc["margin"].get<double>();
    }
    int depth = 6;
    if (doc.contains("depth") && doc["depth"].is_number_integer()) {
      depth = doc["depth"].get<int>();
    }
    return dump_json(to_json(run_autoselect(data, mode, margin, depth)));
  });
}

void mount_routes(httplib::Server& server, const ServeOptions& options) {
  auto route = [&server](const char* path, HttpReply (*handler)(std::string_view)) {
    server.Post(path, [handler](const httplib::Request& req, httplib::Response& res) {
      const HttpReply reply = handler(req.body);
      res.status = reply.status;
      res.set_content(reply.body, reply.content_type);
    });
  };
  route("/api/evaluate", handle_evaluate);
  route("/api/bounds", handle_bounds);
  route("/api/autoselect", handle_autoselect);

  std::error_code ec;
  const bool has_static = !options.static_dir.empty() &&
                          std::filesystem::is_directory(options.static_dir, ec) &&
                          server.set_mount_point("/", options.static_dir);
  if (!has_static || !std::filesystem::exists(
                         std::filesystem::path(options.static_dir) / "index.html", ec)) {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kFallbackIndex, "text/html");
    });
  }
}

bool serve(const ServeOptions& options) {
  httplib::Server server;
  mount_routes(server, options);
  return server.listen(options.host, options.port);
}

}  // namespace frif
