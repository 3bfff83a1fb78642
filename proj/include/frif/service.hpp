#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "frif/evaluator.hpp"
#include "frif/io.hpp"
#include "frif/shape.hpp"

namespace httplib {
class Server;
}

namespace frif {

/// Evaluates a problem document exactly as both the CLI and the HTTP service
/// do. Missing derivatives are estimated; missing params with a shape mode
/// are auto-selected at margin 0.9, otherwise alpha = 0, u = 1, v = 0.
/// options.grid selects Picard iteration (order 0 only).
CurveSamples evaluate_problem(const ProblemDocument& problem,
                              std::size_t max_points = default_point_cap());

/// Parameters actually used by evaluate_problem.
IFSParameters resolve_parameters(const ProblemDocument& problem);

struct AutoselectOutcome {
  ShapeSelection selection;
  ShapeReport report;
  int depth = 0;
};

/// auto_select followed by verify_shape on recursion samples of the given
/// depth (reduced to fit the point cap).
AutoselectOutcome run_autoselect(const HermiteData& data, ShapeMode mode,
                                 double margin, int depth = 6,
                                 std::size_t max_points = default_point_cap());

Json to_json(const AutoselectOutcome& outcome);

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Stateless request handlers; bodies are JSON text.
HttpReply handle_evaluate(std::string_view body);
HttpReply handle_bounds(std::string_view body);
HttpReply handle_autoselect(std::string_view body);

/// 413 for resource limits, 400 for every other library error.
int status_for(const Error& error);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir = "web";
};

/// Installs the API routes and static hosting on `server`.
void mount_routes(httplib::Server& server, const ServeOptions& options);

/// Blocks until the server stops. Returns false if the port could not be bound.
bool serve(const ServeOptions& options);

}  // namespace frif
