#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "frif/data_model.hpp"
#include "frif/error.hpp"

namespace frif {

/// Free design knobs of the rational IFS: one scaling factor and one pair of
/// denominator shape parameters per interval.
struct IFSParameters {
  std::vector<double> alpha;  // scaling factors
  std::vector<double> u;      // > 0
  std::vector<double> v;      // > -4u
  int smoothness_order = 1;   // k in |alpha_n| < a_n^k

  /// alpha = 0 everywhere: the fixed point is the classical rational spline.
  static IFSParameters classical(std::size_t intervals, double u = 1.0,
                                 double v = 0.0);
};

/// |alpha|_inf.
double max_abs_scaling(const IFSParameters& params);

/// kappa = max_n |alpha_n| / a_n^k.
double contraction_kappa(const IFSParameters& params, const Partition& part);

struct ValidationIssue {
  std::size_t interval = 0;  // 1-based
  std::string constraint;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return issues.empty(); }
  std::string summary() const;
};

/// Checks |alpha_n| < a_n^k (strict), u_n > 0 and v_n > -4 u_n.
/// Throws Error(malformed_parameters) on length mismatch or k outside {1, 2}.
ValidationReport validate_parameters(const IFSParameters& params,
                                     const Partition& part);

/// Error(validation) that keeps the per-interval diagnostics.
class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(ValidationReport report)
      : Error(ErrorKind::validation, report.summary()), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Throws ValidationFailure when the report is not clean.
void require_admissible(const IFSParameters& params, const Partition& part);

/// Closed-form coefficients of q_n = P_n / Q_n on one interval, together with
/// the coefficient arrays of the first- and second-derivative IFS forcing
/// terms. Everything is expressed in the local coordinate theta in [0, 1].
struct RationalPiece {
  std::size_t index = 0;
  double scaling = 0.0;    // alpha_n
  double width = 0.0;      // h_n
  double map_slope = 0.0;  // a_n
  double shape_u = 1.0;
  double shape_v = 0.0;

  // U_n, V_n, W_n, Z_n against (1-t)^3, (1-t)^2 t, (1-t) t^2, t^3.
  std::array<double, 4> numerator{};
  // A_0n..A_4n against t^j (1-t)^(4-j), over Q^2.
  std::array<double, 5> slope_coeffs{};
  // B_0n..B_5n against t^j (1-t)^(5-j), over h_n Q^3.
  std::array<double, 6> curvature_coeffs{};

  // q_n(0) and q_n(1): y_n - alpha_n y_1 and y_{n+1} - alpha_n y_N.
  double left_value = 0.0;
  double right_value = 0.0;
  // Scaled secant and end slopes: Delta*_n, d*_n, d*_{n+1}.
  double secant_star = 0.0;
  double left_slope_star = 0.0;
  double right_slope_star = 0.0;

  double denominator(double theta) const noexcept {
    return shape_u + shape_v * theta * (1.0 - theta);
  }
  /// P*(theta) / Q*(theta), unchecked.
  double value(double theta) const noexcept;
  /// Forcing term of the derivative IFS: sum A_j t^j (1-t)^(4-j) / Q^2.
  double slope_term(double theta) const noexcept;
  /// Forcing term R_n of the second-derivative IFS.
  double curvature_term(double theta) const noexcept;
};

std::vector<RationalPiece> build_pieces(const HermiteData& data,
                                        const IFSParameters& params,
                                        const Partition& part);

/// Checked evaluation of q_n at theta. Throws Error(malformed_parameters) for
/// theta outside [0, 1] and Error(denominator_positivity) when Q*(theta) <= 0.
double q_eval(const RationalPiece& piece, double theta);

struct TensionParts {
  double affine = 0.0;
  double correction = 0.0;
};

/// Splits q_n into its affine interpolant of the end values and the
/// correction term u h t(1-t)[(2t-1)Delta* + (1-t)d*_n - t d*_{n+1}] / Q,
/// which vanishes as v_n grows.
TensionParts tension_decomposition(const RationalPiece& piece, double theta);

}  // namespace frif
