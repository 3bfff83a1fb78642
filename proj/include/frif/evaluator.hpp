#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "frif/data_model.hpp"
#include "frif/ifs.hpp"

namespace frif {

enum class GenerationMethod { recursion, picard, closed_form, affine_limit };

const char* to_string(GenerationMethod method);

struct SamplePoint {
  double x = 0.0;
  double y = 0.0;
};

/// Sorted evaluations of g, g' or g''.
///
/// For derivative order 2 the ordinate is the right-hand limit g''(x+)
/// (the left-hand limit at x_N) and `left_limits` holds g''(x-) for every
/// entry, NaN at x_1. Orders 0 and 1 leave `left_limits` empty.
struct CurveSamples {
  std::vector<SamplePoint> entries;
  std::vector<double> left_limits;
  int derivative_order = 0;
  GenerationMethod method = GenerationMethod::recursion;
  int depth = 0;        // recursion depth, Picard iterations, or 0
  double residual = 0.0;  // max functional-equation residual

  std::size_t size() const noexcept { return entries.size(); }
  std::vector<double> abscissae() const;
  std::vector<double> ordinates() const;
};

/// FRIF_MAX_POINTS from the environment, otherwise 2^22.
std::size_t default_point_cap();

/// Number of points produced by `depth` levels of recursion on N knots.
std::size_t recursion_point_count(std::size_t knots, int depth);

/// Smallest depth reaching 2000 points, reduced until it fits under the cap.
int default_depth(std::size_t knots, std::size_t max_points = default_point_cap());

/// Exact values of g on all images L_{n_1} o ... o L_{n_D}(x_j) of the knots.
/// Throws Error(resource_limit) when the point count would exceed max_points.
CurveSamples sample_fif(const HermiteData& data, const IFSParameters& params,
                        int depth, std::size_t max_points = default_point_cap());

/// g' through the derivative IFS, seeded with g'(x_i) = d_i. Requires
/// |alpha_n| < a_n.
CurveSamples sample_derivative_fif(const HermiteData& data,
                                   const IFSParameters& params, int depth,
                                   std::size_t max_points = default_point_cap());

/// One-sided g'' through the second-derivative IFS. Requires |alpha_n| < a_n^2.
CurveSamples sample_second_derivative_fif(
    const HermiteData& data, const IFSParameters& params, int depth,
    std::size_t max_points = default_point_cap());

/// Recursion with the rational correction dropped: the v -> infinity limit
/// g(L_n x) = alpha_n g(x) + (y_n - alpha_n y_1)(1 - t) + (y_{n+1} - alpha_n y_N) t.
CurveSamples affine_fif_limit(const HermiteData& data,
                              const IFSParameters& params, int depth,
                              std::size_t max_points = default_point_cap());

struct PicardResult {
  CurveSamples samples;
  double initial_oscillation = 0.0;  // ||T g_0 - g_0||
  double last_step = 0.0;            // ||T g_m - g_m||
  double step_bound = 0.0;           // |alpha|^m * initial_oscillation
};

/// Iterates the Read-Bajraktarevic operator from the piecewise-linear
/// interpolant of the data on the given sorted grid, which must start at x_1
/// and end at x_N. The previous iterate is read back at L_n^{-1}(x) by linear
/// interpolation on the grid.
PicardResult picard_evaluate(const HermiteData& data,
                             const IFSParameters& params,
                             std::span<const double> grid, int iterations);

/// Same on a uniform grid of `grid_points` points.
PicardResult picard_evaluate(const HermiteData& data,
                             const IFSParameters& params,
                             std::size_t grid_points, int iterations);

/// Iterations needed for |alpha|^m * oscillation < target.
int picard_iterations_for(double max_scaling, double oscillation, double target);

/// Piecewise non-recursive rational cubic (alpha = 0).
class ClassicalSpline {
 public:
  ClassicalSpline(const HermiteData& data, std::span<const double> u,
                  std::span<const double> v);

  double operator()(double x) const;

 private:
  std::vector<double> knots_;
  std::vector<RationalPiece> pieces_;
};

double classical_eval(const HermiteData& data, std::span<const double> u,
                      std::span<const double> v, double x);

}  // namespace frif
