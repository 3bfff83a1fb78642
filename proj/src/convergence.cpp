#include "frif/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frif/error.hpp"
#include "frif/evaluator.hpp"

namespace frif {

namespace {

double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

int fitting_depth(std::size_t knots, int depth, std::size_t max_points) {
  while (depth > 1 && recursion_point_count(knots, depth) > max_points) --depth;
  return depth;
}

double sup_distance(const CurveSamples& a, const CurveSamples& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::malformed_parameters,
                "sample sets do not share abscissae");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.entries[i].y - b.entries[i].y));
  }
  return worst;
}

}  // namespace

ErrorBoundReport perturbation_bound(const HermiteData& input,
                                    const IFSParameters& params, int depth,
                                    std::size_t max_points) {
  const HermiteData data = with_estimated_derivatives(input);
  const Partition part = build_partition(data);

  ErrorBoundReport r;
  r.alpha_inf = max_abs_scaling(params);
  if (!(r.alpha_inf < 1.0)) {
    throw Error(ErrorKind::divergent_bound, "|alpha|_inf must be < 1");
  }
  require_admissible(params, part);

  const auto y = data.values();
  const auto d = data.derivatives();
  const double y_inf = max_abs(y);
  const double d_inf = max_abs(d);
  const double u_inf = max_abs(params.u);
  const double v_inf = max_abs(params.v);
  const double y_end = std::max(std::abs(y.front()), std::abs(y.back()));
  const double d_end = std::max(std::abs(d.front()), std::abs(d.back()));
  const double width = part.total_width;

  r.M = y_inf + y_end;
  r.h = *std::max_element(part.widths.begin(), part.widths.end());
  r.s = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < params.u.size(); ++n) {
    r.s = std::min(r.s, params.u[n] + 0.25 * params.v[n]);
  }
  r.classical_norm_bound =
      (u_inf * y_inf + 0.25 * ((3.0 * u_inf + v_inf) * y_inf + u_inf * r.h * d_inf)) /
      r.s;
  r.K0 = ((u_inf + 0.25 * (3.0 * u_inf + v_inf)) * y_end +
          0.25 * u_inf * width * d_end) /
         r.s;
  const double braces =
      u_inf * r.M +
      0.25 * ((3.0 * u_inf + v_inf) * r.M + u_inf * (r.h * d_inf + width * d_end));
  r.bound = r.alpha_inf / (r.s * (1.0 - r.alpha_inf)) * braces;

  if (depth > 0) {
    r.depth = fitting_depth(data.size(), depth, max_points);
    IFSParameters classical = params;
    std::fill(classical.alpha.begin(), classical.alpha.end(), 0.0);
    const CurveSamples g = sample_fif(data, params, r.depth, max_points);
    const CurveSamples c = sample_fif(data, classical, r.depth, max_points);
    r.measured_sup_distance = sup_distance(g, c);
  }
  return r;
}

TargetFunction named_target(std::string_view name) {
  if (name == "sin") {
    return {"sin", [](double x) { return std::sin(x); },
            [](double x) { return std::cos(x); }};
  }
  if (name == "exp") {
    return {"exp", [](double x) { return std::exp(x); },
            [](double x) { return std::exp(x); }};
  }
  if (name == "xlog1p") {
    return {"xlog1p", [](double x) { return x * std::log1p(x); },
            [](double x) { return std::log1p(x) + x / (1.0 + x); }};
  }
  if (name == "affine") {
    return {"affine", [](double x) { return 2.0 * x + 1.0; },
            [](double) { return 2.0; }};
  }
  throw Error(ErrorKind::malformed_parameters,
              "unknown target '" + std::string(name) +
                  "' (expected sin, exp, xlog1p or affine)");
}

std::vector<std::string> target_names() {
  return {"sin", "exp", "xlog1p", "affine"};
}

const char* to_string(ConvergenceMode mode) {
  return mode == ConvergenceMode::target_vs_fif ? "phi-vs-g" : "g-vs-c";
}

ConvergenceMode parse_convergence_mode(std::string_view text) {
  if (text == "phi-vs-g") return ConvergenceMode::target_vs_fif;
  if (text == "g-vs-c") return ConvergenceMode::fif_vs_classical;
  throw Error(ErrorKind::malformed_parameters,
              "convergence mode must be 'phi-vs-g' or 'g-vs-c'");
}

OrderFit empirical_order(const TargetFunction& target,
                         const OrderOptions& options) {
  if (options.levels < 4) {
    throw Error(ErrorKind::malformed_parameters,
                "an order fit needs at least 4 mesh levels");
  }
  if (options.k < 1 || options.k > 3) {
    throw Error(ErrorKind::malformed_parameters, "scaling rule k must be 1, 2 or 3");
  }
  if (options.first_level < 1) {
    throw Error(ErrorKind::malformed_parameters, "first level must be >= 1");
  }

  OrderFit fit;
  fit.k = options.k;
  fit.mode = options.mode;
  fit.target = target.name;

  double scale = 0.0;
  for (int j = 0; j < options.levels; ++j) {
    const int level = options.first_level + j;
    const std::size_t intervals = std::size_t{1} << level;
    const std::size_t count = intervals + 1;
    std::vector<double> x(count), y(count), d(count);
    for (std::size_t i = 0; i < count; ++i) {
      x[i] = target.lower + (target.upper - target.lower) *
                                static_cast<double>(i) / static_cast<double>(intervals);
      y[i] = target.value(x[i]);
      d[i] = target.derivative(x[i]);
      scale = std::max(scale, std::abs(y[i]));
    }
    const HermiteData data(std::move(x), std::move(y), std::move(d));
    const Partition part = build_partition(data);

    IFSParameters params = IFSParameters::classical(intervals, options.u, options.v);
    params.smoothness_order = options.k == 1 ? 1 : 2;
    for (std::size_t n = 0; n < intervals; ++n) {
      params.alpha[n] =
          options.scaling_factor * std::pow(part.map_slopes[n], options.k);
    }

    const int depth = fitting_depth(count, options.max_depth, options.max_points);
    const CurveSamples g = sample_fif(data, params, depth, options.max_points);
    double error = 0.0;
    if (options.mode == ConvergenceMode::target_vs_fif) {
      for (const auto& p : g.entries) {
        error = std::max(error, std::abs(target.value(p.x) - p.y));
      }
    } else {
      IFSParameters classical = params;
      std::fill(classical.alpha.begin(), classical.alpha.end(), 0.0);
      error = sup_distance(g, sample_fif(data, classical, depth, options.max_points));
    }

    OrderLevel row;
    row.level = level;
    row.knots = count;
    row.h = *std::max_element(part.widths.begin(), part.widths.end());
    row.error = error;
    row.running_slope = std::numeric_limits<double>::quiet_NaN();
    if (!fit.levels.empty()) {
      const OrderLevel& prev = fit.levels.back();
      row.running_slope =
          std::log(std::max(error, std::numeric_limits<double>::min()) /
                   std::max(prev.error, std::numeric_limits<double>::min())) /
          std::log(row.h / prev.h);
    }
    fit.levels.push_back(row);
  }

  const double floor = 1e-13 * std::max(scale, 1.0);
  fit.exact = std::all_of(fit.levels.begin(), fit.levels.end(),
                          [&](const OrderLevel& l) { return l.error <= floor; });

  // Least-squares slope of log(error) against log(h).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(fit.levels.size());
  for (const auto& l : fit.levels) {
    const double lx = std::log(l.h);
    const double ly = std::log(std::max(l.error, std::numeric_limits<double>::min()));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

}  // namespace frif
