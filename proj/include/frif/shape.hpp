#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frif/data_model.hpp"
#include "frif/evaluator.hpp"
#include "frif/ifs.hpp"

namespace frif {

enum class ShapeMode { monotone, convex };

const char* to_string(ShapeMode mode);
/// Accepts "monotone" or "convex"; throws Error(malformed_parameters).
ShapeMode parse_shape_mode(std::string_view text);

/// Sufficient-condition region for one shape goal, per interval.
///
/// `v_min` is evaluated at the scalings in `alpha` (zero unless requested)
/// and is +inf where the region is empty at that scaling. `derivatives` are
/// the derivative parameters after the forced equalities on degenerate
/// intervals; bounds are computed from them.
struct ShapeBounds {
  ShapeMode mode = ShapeMode::monotone;
  std::vector<double> alpha_max;
  std::vector<bool> alpha_max_inclusive;
  std::vector<double> alpha;
  std::vector<double> u;
  std::vector<double> v_min;
  std::vector<bool> degenerate;
  std::vector<double> derivatives;
};

/// Nondecreasing data. Throws Error(necessary_condition) naming the first
/// decreasing pair or the first negative derivative. Flat intervals are
/// degenerate: alpha forced to 0 and both end derivatives forced to 0.
ShapeBounds monotone_bounds(const HermiteData& data, std::span<const double> u,
                            std::span<const double> alpha = {});

/// Convex data with d_1 <= Delta_1 <= d_2 <= ... <= d_N. Throws
/// Error(necessary_condition) naming the index where the chain breaks.
/// Intervals with Delta_n = d_n or d_{n+1} = Delta_n are degenerate: alpha
/// forced to 0 and d_n = d_{n+1} = Delta_n.
ShapeBounds convex_bounds(const HermiteData& data, std::span<const double> u,
                          std::span<const double> alpha = {});

ShapeBounds shape_bounds(ShapeMode mode, const HermiteData& data,
                         std::span<const double> u,
                         std::span<const double> alpha = {});

/// Checks a parameter set against the sufficient conditions of `mode`.
ValidationReport check_sufficient_conditions(const HermiteData& data,
                                             const IFSParameters& params,
                                             ShapeMode mode);

struct ShapeSelection {
  HermiteData data;  // derivatives after forced equalities
  IFSParameters params;
  ShapeBounds bounds;  // v_min evaluated at the selected alpha
};

/// alpha_n = margin * alpha_max_n, v_n = v_min_n (1 + margin) + 1e-9 u_n.
/// `u` defaults to 1 on every interval when empty. Where v_min is unbounded
/// at the chosen scaling, alpha_n is shrunk by `margin` until it is not.
ShapeSelection auto_select(const HermiteData& data, ShapeMode mode,
                           double margin, std::span<const double> u = {});

struct ShapeViolation {
  double x = 0.0;
  std::string quantity;
  double value = 0.0;
};

struct ShapeReport {
  bool verified = true;
  std::vector<ShapeViolation> violations;
  double tolerance = 0.0;
  double scale = 0.0;
};

/// Discrete shape check on order-0 samples.
///
/// Monotone: flags y_{i+1} - y_i < -tol * max|y|.
/// Convex: flags s_{i+1} - s_i < -(tol * max|s| + noise_i) for consecutive
/// chord slopes s, reporting the second divided difference at the middle
/// abscissa. noise_i = 32 eps max|y| (1/dx_i + 1/dx_{i+1}) bounds the
/// roundoff of the slope difference over short gaps.
ShapeReport verify_shape(const CurveSamples& samples, ShapeMode mode,
                         double tolerance);

}  // namespace frif
