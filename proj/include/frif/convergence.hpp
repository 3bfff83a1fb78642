#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "frif/data_model.hpp"
#include "frif/ifs.hpp"

namespace frif {

/// A-priori bound on ||g - C||_inf between the fractal interpolant g and the
/// classical rational spline C built from the same data and shape parameters,
/// together with the sup distance actually measured on common samples.
struct ErrorBoundReport {
  double M = 0.0;          // |y|_inf + max(|y_1|, |y_N|)
  double s = 0.0;          // min_n (u_n + v_n / 4)
  double K0 = 0.0;         // bound on |dq_n / d alpha_n|
  double classical_norm_bound = 0.0;  // bound on ||C||_inf
  double alpha_inf = 0.0;
  double h = 0.0;          // max h_n
  double bound = 0.0;
  double measured_sup_distance = 0.0;
  int depth = 0;           // recursion depth of the measurement, 0 if skipped
};

/// Throws Error(divergent_bound) when |alpha|_inf >= 1. A positive `depth`
/// also measures sup|g - C| on the depth-`depth` images of the knots
/// (reduced if the point count would exceed `max_points`).
ErrorBoundReport perturbation_bound(const HermiteData& data,
                                    const IFSParameters& params, int depth = 6,
                                    std::size_t max_points = std::size_t{1} << 20);

struct TargetFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double lower = 0.0;
  double upper = 1.0;
};

/// "sin", "exp", "xlog1p" (x log(1 + x)) and "affine" (2x + 1), all on [0, 1].
TargetFunction named_target(std::string_view name);
std::vector<std::string> target_names();

enum class ConvergenceMode { target_vs_fif, fif_vs_classical };

const char* to_string(ConvergenceMode mode);
/// Accepts "phi-vs-g" and "g-vs-c".
ConvergenceMode parse_convergence_mode(std::string_view text);

struct OrderOptions {
  int first_level = 3;  // 2^first_level + 1 knots on the coarsest mesh
  int levels = 5;
  int k = 3;            // alpha_n = scaling_factor * a_n^k
  ConvergenceMode mode = ConvergenceMode::fif_vs_classical;
  double scaling_factor = 0.5;
  double u = 1.0;
  double v = 1.0;
  int max_depth = 6;
  std::size_t max_points = std::size_t{1} << 20;
};

struct OrderLevel {
  int level = 0;
  std::size_t knots = 0;
  double h = 0.0;
  double error = 0.0;
  double running_slope = 0.0;  // NaN on the first level
};

struct OrderFit {
  std::vector<OrderLevel> levels;
  double slope = 0.0;  // least squares on log(error) against log(h)
  int k = 0;
  ConvergenceMode mode = ConvergenceMode::fif_vs_classical;
  std::string target;
  bool exact = false;  // every error at roundoff level
};

OrderFit empirical_order(const TargetFunction& target, const OrderOptions& options);

}  // namespace frif
