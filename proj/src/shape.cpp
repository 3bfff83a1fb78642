#include "frif/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frif/error.hpp"

namespace frif {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFlatTolerance = 1e-12;
constexpr double kStrictnessPad = 1e-9;

[[noreturn]] void necessary(const std::string& message) {
  throw Error(ErrorKind::necessary_condition, message);
}

std::vector<double> resolve_u(std::span<const double> u, std::size_t intervals) {
  if (u.empty()) return std::vector<double>(intervals, 1.0);
  if (u.size() != intervals) {
    throw Error(ErrorKind::malformed_parameters,
                "u must have one entry per interval");
  }
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (!(u[n] > 0.0)) {
      throw Error(ErrorKind::malformed_parameters,
                  "u[" + std::to_string(n + 1) + "] must be > 0");
    }
  }
  return {u.begin(), u.end()};
}

std::vector<double> resolve_alpha(std::span<const double> alpha,
                                  std::size_t intervals) {
  if (alpha.empty()) return std::vector<double>(intervals, 0.0);
  if (alpha.size() != intervals) {
    throw Error(ErrorKind::malformed_parameters,
                "alpha must have one entry per interval");
  }
  return {alpha.begin(), alpha.end()};
}

// Scaled quantities Delta*_n, d*_n, d*_{n+1} for a candidate scaling.
struct Starred {
  double secant;
  double left;
  double right;
};

Starred starred(const Partition& part, std::span<const double> y,
                std::span<const double> d, std::size_t n, double alpha) {
  const double k = alpha / part.widths[n];
  return {part.slopes[n] - k * (y.back() - y.front()),
          d[n] - k * part.total_width * d.front(),
          d[n + 1] - k * part.total_width * d.back()};
}

double monotone_v_min(const Partition& part, std::span<const double> y,
                      std::span<const double> d, std::size_t n, double alpha,
                      double u) {
  const Starred s = starred(part, y, d, n, alpha);
  if (!(s.secant > 0.0)) return kInf;
  const double r = std::max({s.left, s.right, s.left + s.right});
  return std::max(0.0, u * r / s.secant);
}

double convex_v_min(const Partition& part, std::span<const double> y,
                    std::span<const double> d, std::size_t n, double alpha,
                    double u) {
  const Starred s = starred(part, y, d, n, alpha);
  const double lower = s.secant - s.left;
  const double upper = s.right - s.secant;
  if (!(lower > 0.0) || !(upper > 0.0)) return kInf;
  return std::max({0.0, u * upper / lower, u * lower / upper});
}

double evaluate_v_min(ShapeMode mode, const Partition& part,
                      std::span<const double> y, std::span<const double> d,
                      std::size_t n, double alpha, double u) {
  return mode == ShapeMode::monotone ? monotone_v_min(part, y, d, n, alpha, u)
                                     : convex_v_min(part, y, d, n, alpha, u);
}

void fill_v_min(ShapeBounds& b, const Partition& part, std::span<const double> y) {
  for (std::size_t n = 0; n < b.alpha.size(); ++n) {
    if (b.degenerate[n]) {
      b.v_min[n] = b.alpha[n] == 0.0 ? 0.0 : kInf;
    } else {
      b.v_min[n] = evaluate_v_min(b.mode, part, y, b.derivatives, n,
                                  b.alpha[n], b.u[n]);
    }
  }
}

std::string fmt(double value) {
  std::ostringstream out;
  out.precision(10);
  out << value;
  return out.str();
}

}  // namespace

const char* to_string(ShapeMode mode) {
  return mode == ShapeMode::monotone ? "monotone" : "convex";
}

ShapeMode parse_shape_mode(std::string_view text) {
  if (text == "monotone") return ShapeMode::monotone;
  if (text == "convex") return ShapeMode::convex;
  throw Error(ErrorKind::malformed_parameters,
              "shape mode must be 'monotone' or 'convex'");
}

ShapeBounds monotone_bounds(const HermiteData& input, std::span<const double> u,
                            std::span<const double> alpha) {
  const HermiteData data = with_estimated_derivatives(input);
  const Partition part = build_partition(data);
  const auto y = data.values();
  const std::size_t intervals = part.intervals();

  for (std::size_t i = 0; i + 1 < data.size(); ++i) {
    if (y[i + 1] < y[i]) {
      necessary("data decreases between points " + std::to_string(i + 1) +
                " and " + std::to_string(i + 2) + " (y = " + fmt(y[i]) +
                " > " + fmt(y[i + 1]) + ")");
    }
  }
  const auto d_in = data.derivatives();
  for (std::size_t i = 0; i < d_in.size(); ++i) {
    if (d_in[i] < 0.0) {
      necessary("derivative d[" + std::to_string(i + 1) + "] = " +
                fmt(d_in[i]) + " is negative; monotone data needs d >= 0");
    }
  }

  ShapeBounds b;
  b.mode = ShapeMode::monotone;
  b.u = resolve_u(u, intervals);
  b.alpha = resolve_alpha(alpha, intervals);
  b.derivatives.assign(d_in.begin(), d_in.end());
  b.degenerate.assign(intervals, false);
  b.alpha_max.assign(intervals, 0.0);
  b.alpha_max_inclusive.assign(intervals, true);
  b.v_min.assign(intervals, 0.0);

  double y_scale = 0.0;
  for (double v : y) y_scale = std::max(y_scale, std::abs(v));
  for (std::size_t n = 0; n < intervals; ++n) {
    if (std::abs(y[n + 1] - y[n]) <= kFlatTolerance * y_scale) {
      b.degenerate[n] = true;
      b.derivatives[n] = 0.0;
      b.derivatives[n + 1] = 0.0;
    }
  }

  const std::span<const double> d = b.derivatives;
  const double rise = y.back() - y.front();
  const double width = part.total_width;
  for (std::size_t n = 0; n < intervals; ++n) {
    if (b.degenerate[n]) continue;
    const double h = part.widths[n];
    double best = part.map_slopes[n];
    bool inclusive = false;  // alpha_n = a_n is excluded
    auto consider = [&](double candidate) {
      if (candidate < best) {
        best = candidate;
        inclusive = true;
      }
    };
    if (d.front() > 0.0) consider(h * d[n] / (d.front() * width));
    if (d.back() > 0.0) consider(h * d[n + 1] / (d.back() * width));
    consider(h * part.slopes[n] / rise);
    b.alpha_max[n] = std::max(0.0, best);
    b.alpha_max_inclusive[n] = inclusive;
  }
  fill_v_min(b, part, y);
  return b;
}

ShapeBounds convex_bounds(const HermiteData& input, std::span<const double> u,
                          std::span<const double> alpha) {
  const HermiteData data = with_estimated_derivatives(input);
  const Partition part = build_partition(data);
  const auto y = data.values();
  const std::size_t intervals = part.intervals();
  const auto d_in = data.derivatives();

  double slope_scale = 0.0;
  for (double s : part.slopes) slope_scale = std::max(slope_scale, std::abs(s));
  for (double s : d_in) slope_scale = std::max(slope_scale, std::abs(s));
  const double tol = kFlatTolerance * std::max(slope_scale, 1e-300);

  ShapeBounds b;
  b.mode = ShapeMode::convex;
  b.u = resolve_u(u, intervals);
  b.alpha = resolve_alpha(alpha, intervals);
  b.derivatives.assign(d_in.begin(), d_in.end());
  b.degenerate.assign(intervals, false);
  b.alpha_max.assign(intervals, 0.0);
  b.alpha_max_inclusive.assign(intervals, false);
  b.v_min.assign(intervals, 0.0);

  for (std::size_t n = 0; n < intervals; ++n) {
    const double delta = part.slopes[n];
    if (d_in[n] > delta + tol) {
      necessary("convexity chain broken at index " + std::to_string(n + 1) +
                ": d[" + std::to_string(n + 1) + "] = " + fmt(d_in[n]) +
                " exceeds Delta[" + std::to_string(n + 1) + "] = " + fmt(delta));
    }
    if (delta > d_in[n + 1] + tol) {
      necessary("convexity chain broken at index " + std::to_string(n + 1) +
                ": Delta[" + std::to_string(n + 1) + "] = " + fmt(delta) +
                " exceeds d[" + std::to_string(n + 2) + "] = " +
                fmt(d_in[n + 1]));
    }
    if (std::abs(delta - d_in[n]) <= tol || std::abs(d_in[n + 1] - delta) <= tol) {
      b.degenerate[n] = true;
    }
  }

  // Degenerate intervals become straight segments: d_n = d_{n+1} = Delta_n.
  std::vector<bool> pinned(data.size(), false);
  for (std::size_t n = 0; n < intervals; ++n) {
    if (!b.degenerate[n]) continue;
    const double delta = part.slopes[n];
    for (std::size_t k : {n, n + 1}) {
      if (pinned[k] && std::abs(b.derivatives[k] - delta) > tol) {
        necessary("degenerate intervals " + std::to_string(k) + " and " +
                  std::to_string(k + 1) +
                  " force conflicting derivatives at point " +
                  std::to_string(k + 1));
      }
      b.derivatives[k] = delta;
      pinned[k] = true;
    }
  }
  const std::span<const double> d = b.derivatives;
  for (std::size_t n = 0; n < intervals; ++n) {
    if (d[n] > part.slopes[n] + tol || part.slopes[n] > d[n + 1] + tol) {
      necessary("convexity chain broken at index " + std::to_string(n + 1) +
                " after forcing straight segments on degenerate intervals");
    }
  }

  const double rise = y.back() - y.front();
  const double width = part.total_width;
  const double below = rise - d.front() * width;  // > 0 unless all degenerate
  const double above = d.back() * width - rise;
  for (std::size_t n = 0; n < intervals; ++n) {
    if (b.degenerate[n]) continue;
    const double h = part.widths[n];
    double best = part.map_slopes[n] * part.map_slopes[n];
    if (below > 0.0) best = std::min(best, h * (part.slopes[n] - d[n]) / below);
    if (above > 0.0) best = std::min(best, h * (d[n + 1] - part.slopes[n]) / above);
    b.alpha_max[n] = std::max(0.0, best);
  }
  fill_v_min(b, part, y);
  return b;
}

ShapeBounds shape_bounds(ShapeMode mode, const HermiteData& data,
                         std::span<const double> u,
                         std::span<const double> alpha) {
  return mode == ShapeMode::monotone ? monotone_bounds(data, u, alpha)
                                     : convex_bounds(data, u, alpha);
}

ValidationReport check_sufficient_conditions(const HermiteData& data,
                                             const IFSParameters& params,
                                             ShapeMode mode) {
  const ShapeBounds b = shape_bounds(mode, data, params.u, params.alpha);
  ValidationReport report;
  auto fail = [&](std::size_t n, std::string what, std::string detail) {
    report.issues.push_back({n + 1, std::move(what), std::move(detail)});
  };
  const auto d = with_estimated_derivatives(data).derivatives();
  for (std::size_t n = 0; n < b.alpha.size(); ++n) {
    const double a = b.alpha[n];
    if (a < 0.0) fail(n, "alpha >= 0", "alpha = " + fmt(a));
    const bool within = b.alpha_max_inclusive[n] ? a <= b.alpha_max[n]
                                                 : a < b.alpha_max[n];
    if (!within && !(b.degenerate[n] && a == 0.0)) {
      fail(n, "scaling bound",
           "alpha = " + fmt(a) + (b.alpha_max_inclusive[n] ? " > " : " >= ") +
               fmt(b.alpha_max[n]));
    }
    if (!(params.v[n] > 0.0) && !b.degenerate[n]) {
      fail(n, "v > 0", "v = " + fmt(params.v[n]));
    }
    if (!(params.v[n] >= b.v_min[n])) {
      fail(n, "shape parameter bound",
           "v = " + fmt(params.v[n]) + " < v_min = " + fmt(b.v_min[n]));
    }
    if (b.degenerate[n]) {
      if (d[n] != b.derivatives[n] || d[n + 1] != b.derivatives[n + 1]) {
        fail(n, "forced derivatives",
             "degenerate interval needs d = " + fmt(b.derivatives[n]) + ", " +
                 fmt(b.derivatives[n + 1]));
      }
    }
  }
  return report;
}

ShapeSelection auto_select(const HermiteData& input, ShapeMode mode,
                           double margin, std::span<const double> u) {
  if (!(margin > 0.0 && margin < 1.0)) {
    throw Error(ErrorKind::malformed_parameters, "margin must lie in (0, 1)");
  }
  const HermiteData data = with_estimated_derivatives(input);
  ShapeBounds b = shape_bounds(mode, data, u);
  const HermiteData adjusted = data.with_derivatives(b.derivatives);
  const Partition part = build_partition(adjusted);
  const auto y = adjusted.values();
  const std::size_t intervals = part.intervals();

  IFSParameters params;
  params.smoothness_order = mode == ShapeMode::monotone ? 1 : 2;
  params.u = b.u;
  params.alpha.assign(intervals, 0.0);
  params.v.assign(intervals, 0.0);
  for (std::size_t n = 0; n < intervals; ++n) {
    double a = b.degenerate[n] ? 0.0 : margin * b.alpha_max[n];
    double v_min = b.degenerate[n] ? 0.0
                                   : evaluate_v_min(mode, part, y, b.derivatives,
                                                    n, a, b.u[n]);
    for (int tries = 0; !std::isfinite(v_min) && tries < 64; ++tries) {
      a *= margin;
      v_min = evaluate_v_min(mode, part, y, b.derivatives, n, a, b.u[n]);
    }
    if (!std::isfinite(v_min)) {
      a = 0.0;
      v_min = evaluate_v_min(mode, part, y, b.derivatives, n, a, b.u[n]);
    }
    params.alpha[n] = a;
    params.v[n] = v_min * (1.0 + margin) + kStrictnessPad * b.u[n];
  }
  b.alpha = params.alpha;
  fill_v_min(b, part, y);
  return {adjusted, std::move(params), std::move(b)};
}

ShapeReport verify_shape(const CurveSamples& samples, ShapeMode mode,
                         double tolerance) {
  if (samples.derivative_order != 0) {
    throw Error(ErrorKind::malformed_parameters,
                "shape verification needs order-0 samples");
  }
  const auto& e = samples.entries;
  if (e.size() < 3) {
    throw Error(ErrorKind::insufficient_data,
                "shape verification needs at least 3 samples");
  }
  ShapeReport report;
  report.tolerance = tolerance;

  if (mode == ShapeMode::monotone) {
    double scale = 0.0;
    for (const auto& p : e) scale = std::max(scale, std::abs(p.y));
    if (scale == 0.0) scale = 1.0;
    report.scale = scale;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      const double rise = e[i + 1].y - e[i].y;
      if (rise < -tolerance * scale) {
        report.violations.push_back({e[i].x, "increment", rise});
      }
    }
  } else {
    std::vector<double> chord(e.size() - 1);
    double scale = 0.0, height = 0.0;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      chord[i] = (e[i + 1].y - e[i].y) / (e[i + 1].x - e[i].x);
      scale = std::max(scale, std::abs(chord[i]));
    }
    for (const auto& p : e) height = std::max(height, std::abs(p.y));
    if (scale == 0.0) scale = 1.0;
    report.scale = scale;
    // Ordinates carry a few ulps of error, which a chord over a gap dx
    // amplifies by 1/dx. Deep recursion produces gaps near 1e-9 of the
    // domain, where that noise dwarfs tolerance * scale.
    const double ordinate_noise = 16.0 * std::numeric_limits<double>::epsilon() * height;
    for (std::size_t i = 0; i + 1 < chord.size(); ++i) {
      const double jump = chord[i + 1] - chord[i];
      const double noise = 2.0 * ordinate_noise *
                           (1.0 / (e[i + 1].x - e[i].x) + 1.0 / (e[i + 2].x - e[i + 1].x));
      if (jump < -(tolerance * scale + noise)) {
        report.violations.push_back({e[i + 1].x, "second_divided_difference",
                                     jump / (e[i + 2].x - e[i].x)});
      }
    }
  }
  report.verified = report.violations.empty();
  return report;
}

}  // namespace frif
