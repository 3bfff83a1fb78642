// Command-line front end: interpolate, bounds, autoselect, error-bound,
// converge and serve.
//
// Exit codes: 0 success, 1 shape verification failed (autoselect),
// 2 malformed input or parameter validation, 3 shape necessary condition,
// 4 point-count cap.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "frif/convergence.hpp"
#include "frif/error.hpp"
#include "frif/io.hpp"
#include "frif/service.hpp"

namespace {

using namespace frif;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::necessary_condition:
      return 3;
    case ErrorKind::resource_limit:
      return 4;
    default:
      return 2;
  }
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::malformed_data, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::malformed_parameters, "cannot write '" + path + "'");
  out << text;
}

void report_error(const Error& e) {
  std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
  if (const auto* failure = dynamic_cast<const ValidationFailure*>(&e)) {
    for (const auto& issue : failure->report().issues) {
      std::cerr << "  interval " << issue.interval << ": " << issue.constraint << ": "
                << issue.detail << '\n';
    }
  }
}

struct InterpolateArgs {
  std::string file;
  std::optional<int> depth;
  std::optional<int> deriv;
  std::optional<std::size_t> grid;
  std::optional<int> iterations;
  std::string format = "csv";
  std::string output;
};

int run_interpolate(const InterpolateArgs& a) {
  ProblemDocument problem = parse_problem_text(read_file(a.file));
  if (a.depth) problem.options.depth = a.depth;
  if (a.deriv) problem.options.derivative_order = *a.deriv;
  if (a.grid) problem.options.grid = a.grid;
  if (a.iterations) problem.options.iterations = a.iterations;
  const CurveSamples samples = evaluate_problem(problem);
  std::string text;
  if (a.format == "json") {
    text = dump_json(to_json(samples));
  } else if (a.format == "svg") {
    text = to_svg(samples, problem.data.knots());
  } else {
    text = to_csv(samples);
  }
  write_output(a.output, text);
  return 0;
}

std::optional<ShapeMode> mode_from(const std::string& flag,
                                   const std::optional<ShapeMode>& fallback) {
  if (!flag.empty()) return parse_shape_mode(flag);
  return fallback;
}

int run_bounds(const std::string& file, const std::string& mode_flag) {
  const ProblemDocument problem = parse_problem_text(read_file(file));
  const auto mode = mode_from(mode_flag, problem.mode);
  if (!mode) throw Error(ErrorKind::malformed_parameters, "--mode is required");
  const HermiteData data = with_estimated_derivatives(problem.data);
  std::vector<double> u(data.intervals(), 1.0);
  std::vector<double> alpha;
  if (problem.params) {
    u = problem.params->u;
    alpha = problem.params->alpha;
  }
  write_output("", dump_json(to_json(shape_bounds(*mode, data, u, alpha))));
  return 0;
}

int run_autoselect_cmd(const std::string& file, const std::string& mode_flag,
                       double margin, int depth) {
  const ProblemDocument problem = parse_problem_text(read_file(file));
  const auto mode = mode_from(mode_flag, problem.mode);
  if (!mode) throw Error(ErrorKind::malformed_parameters, "--mode is required");
  const AutoselectOutcome outcome = run_autoselect(problem.data, *mode, margin, depth);
  write_output("", dump_json(to_json(outcome)));
  if (!outcome.report.verified) {
    std::cerr << "shape verification failed: " << outcome.report.violations.size()
              << " violation(s)\n";
    return 1;
  }
  std::cerr << to_string(*mode) << " verified on " << outcome.depth
            << "-level samples\n";
  return 0;
}

int run_error_bound(const std::string& file, int depth) {
  const ProblemDocument problem = parse_problem_text(read_file(file));
  const IFSParameters params = resolve_parameters(problem);
  write_output("", dump_json(to_json(perturbation_bound(problem.data, params, depth))));
  return 0;
}

struct ConvergeArgs {
  std::string target = "sin";
  std::string mode = "g-vs-c";
  std::string format = "csv";
  int k = 3;
  int levels = 5;
  int first_level = 3;
  double u = 1.0;
  double v = 1.0;
};

int run_converge(const ConvergeArgs& a) {
  OrderOptions opt;
  opt.k = a.k;
  opt.levels = a.levels;
  opt.first_level = a.first_level;
  opt.mode = parse_convergence_mode(a.mode);
  opt.u = a.u;
  opt.v = a.v;
  const OrderFit fit = empirical_order(named_target(a.target), opt);
  if (a.format == "json") {
    write_output("", dump_json(to_json(fit)));
  } else {
    write_output("", to_csv(fit));
    std::cerr << "fitted slope " << format_number(fit.slope) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational cubic spline fractal interpolation"};
  app.require_subcommand(1);

  InterpolateArgs ia;
  auto* interp = app.add_subcommand("interpolate", "Sample g, g' or g''");
  interp->add_option("problem", ia.file, "Problem JSON file ('-' for stdin)")->required();
  interp->add_option("--depth", ia.depth, "Recursion depth");
  interp->add_option("--deriv", ia.deriv, "Derivative order")->check(CLI::Range(0, 2));
  interp->add_option("--grid", ia.grid, "Evaluate by Picard iteration on this many points");
  interp->add_option("--iters", ia.iterations, "Picard iterations");
  interp->add_option("--format", ia.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  interp->add_option("-o,--output", ia.output, "Output path (stdout by default)");

  std::string file, mode_flag;
  auto* bounds = app.add_subcommand("bounds", "Print shape-preserving parameter bounds");
  bounds->add_option("problem", file)->required();
  bounds->add_option("--mode", mode_flag)->check(CLI::IsMember({"monotone", "convex"}));

  double margin = 0.9;
  int depth = 6;
  auto* select = app.add_subcommand("autoselect", "Pick and verify shape-preserving parameters");
  select->add_option("problem", file)->required();
  select->add_option("--mode", mode_flag)->check(CLI::IsMember({"monotone", "convex"}));
  select->add_option("--margin", margin, "Fraction of the admissible range")
      ->capture_default_str();
  select->add_option("--depth", depth, "Verification depth")->capture_default_str();

  auto* bound = app.add_subcommand("error-bound", "A-priori bound on ||g - C||");
  bound->add_option("problem", file)->required();
  bound->add_option("--depth", depth, "Measurement depth")->capture_default_str();

  ConvergeArgs ca;
  auto* conv = app.add_subcommand("converge", "Empirical convergence order");
  conv->add_option("--target", ca.target)->check(CLI::IsMember(target_names()))
      ->capture_default_str();
  conv->add_option("--k", ca.k, "alpha_n = 0.5 a_n^k")->check(CLI::Range(1, 3))
      ->capture_default_str();
  conv->add_option("--levels", ca.levels)->check(CLI::Range(4, 12))->capture_default_str();
  conv->add_option("--first-level", ca.first_level)->check(CLI::Range(1, 12))
      ->capture_default_str();
  conv->add_option("--mode", ca.mode)->check(CLI::IsMember({"phi-vs-g", "g-vs-c"}))
      ->capture_default_str();
  conv->add_option("--u", ca.u)->capture_default_str();
  conv->add_option("--v", ca.v)->capture_default_str();
  conv->add_option("--format", ca.format)->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  ServeOptions so;
  auto* srv = app.add_subcommand("serve", "HTTP API and static explorer hosting");
  srv->add_option("--port", so.port)->capture_default_str();
  srv->add_option("--host", so.host)->capture_default_str();
  srv->add_option("--static", so.static_dir, "Directory served at /")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*interp) return run_interpolate(ia);
    if (*bounds) return run_bounds(file, mode_flag);
    if (*select) return run_autoselect_cmd(file, mode_flag, margin, depth);
    if (*bound) return run_error_bound(file, depth);
    if (*conv) return run_converge(ca);
    if (*srv) {
      std::cerr << "listening on http://" << so.host << ':' << so.port << '\n';
      if (!serve(so)) {
        std::cerr << "cannot bind " << so.host << ':' << so.port << '\n';
        return 2;
      }
      return 0;
    }
  } catch (const Error& e) {
    report_error(e);
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
