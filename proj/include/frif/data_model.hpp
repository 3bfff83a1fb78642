#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace frif {

/// Hermite interpolation problem: strictly increasing knots, values, and
/// (optionally) derivative parameters at the knots.
///
/// Construction validates the invariants and throws Error(malformed_data)
/// with the offending index otherwise. Knots closer than 1e-12 of the total
/// width are rejected as duplicates.
class HermiteData {
 public:
  HermiteData(std::vector<double> knots, std::vector<double> values,
              std::optional<std::vector<double>> derivatives = std::nullopt);

  std::size_t size() const noexcept { return knots_.size(); }
  std::size_t intervals() const noexcept { return knots_.size() - 1; }

  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> values() const noexcept { return values_; }

  bool has_derivatives() const noexcept { return derivatives_.has_value(); }
  /// Throws Error(malformed_data) when no derivatives were supplied.
  std::span<const double> derivatives() const;

  /// Copy of this problem with the given derivative parameters.
  HermiteData with_derivatives(std::vector<double> derivatives) const;

  double first_knot() const noexcept { return knots_.front(); }
  double last_knot() const noexcept { return knots_.back(); }
  double total_width() const noexcept { return knots_.back() - knots_.front(); }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::optional<std::vector<double>> derivatives_;
};

/// Geometry of the knot partition and the affine maps L_n(x) = a_n x + b_n
/// that send [x_1, x_N] onto [x_n, x_{n+1}].
struct Partition {
  std::vector<double> widths;       // h_n
  std::vector<double> map_slopes;   // a_n = h_n / |I|
  std::vector<double> map_offsets;  // b_n
  std::vector<double> slopes;       // Delta_n = (y_{n+1} - y_n) / h_n
  double first = 0.0;
  double last = 0.0;
  double total_width = 0.0;

  std::size_t intervals() const noexcept { return widths.size(); }

  /// Local coordinate of x in [x_1, x_N]: (x - x_1) / |I|.
  double global_coordinate(double x) const noexcept {
    return (x - first) / total_width;
  }
  /// L_n(x).
  double map(std::size_t n, double x) const noexcept {
    return map_slopes[n] * x + map_offsets[n];
  }
};

Partition build_partition(const HermiteData& data);

/// Weighted arithmetic-mean derivative estimates with three-point endpoint
/// extrapolation. Interior weights are the neighbouring interval widths.
std::vector<double> estimate_derivatives_amm(const HermiteData& data);

/// Returns `data` unchanged if it carries derivatives, otherwise a copy with
/// arithmetic-mean estimates filled in.
HermiteData with_estimated_derivatives(const HermiteData& data);

/// Index of the interval containing x (the last interval for x == x_N).
/// x outside [x_1, x_N] is clamped.
std::size_t locate_interval(std::span<const double> knots, double x);

}  // namespace frif
