#include "frif/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frif/error.hpp"

namespace frif {

IFSParameters IFSParameters::classical(std::size_t intervals, double u,
                                       double v) {
  IFSParameters params;
  params.alpha.assign(intervals, 0.0);
  params.u.assign(intervals, u);
  params.v.assign(intervals, v);
  return params;
}

double max_abs_scaling(const IFSParameters& params) {
  double result = 0.0;
  for (double a : params.alpha) result = std::max(result, std::abs(a));
  return result;
}

double contraction_kappa(const IFSParameters& params, const Partition& part) {
  double kappa = 0.0;
  for (std::size_t n = 0; n < params.alpha.size(); ++n) {
    const double bound = std::pow(part.map_slopes[n], params.smoothness_order);
    kappa = std::max(kappa, std::abs(params.alpha[n]) / bound);
  }
  return kappa;
}

std::string ValidationReport::summary() const {
  if (issues.empty()) return "parameters admissible";
  std::ostringstream out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) out << "; ";
    out << "interval " << issues[i].interval << ": " << issues[i].constraint
        << " (" << issues[i].detail << ")";
  }
  return out.str();
}

ValidationReport validate_parameters(const IFSParameters& params,
                                     const Partition& part) {
  const std::size_t n = part.intervals();
  if (params.alpha.size() != n || params.u.size() != n ||
      params.v.size() != n) {
    std::ostringstream msg;
    msg << "parameter vectors must have length " << n << " (alpha "
        << params.alpha.size() << ", u " << params.u.size() << ", v "
        << params.v.size() << ")";
    throw Error(ErrorKind::malformed_parameters, msg.str());
  }
  if (params.smoothness_order != 1 && params.smoothness_order != 2) {
    throw Error(ErrorKind::malformed_parameters,
                "smoothness order k must be 1 or 2, got " +
                    std::to_string(params.smoothness_order));
  }

  ValidationReport report;
  auto fail = [&](std::size_t i, std::string constraint, std::string detail) {
    report.issues.push_back({i + 1, std::move(constraint), std::move(detail)});
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double alpha = params.alpha[i];
    const double u = params.u[i];
    const double v = params.v[i];
    if (!std::isfinite(alpha) || !std::isfinite(u) || !std::isfinite(v)) {
      fail(i, "finite parameters", "non-finite alpha, u or v");
      continue;
    }
    const double bound = std::pow(part.map_slopes[i], params.smoothness_order);
    if (!(std::abs(alpha) < bound)) {
      std::ostringstream d;
      d.precision(6);
      d << "|alpha| = " << std::abs(alpha) << " must be < a^"
        << params.smoothness_order << " = " << bound;
      fail(i, "scaling bound", d.str());
    }
    if (!(u > 0.0)) {
      std::ostringstream d;
      d << "u = " << u << " must be > 0";
      fail(i, "shape parameter u", d.str());
    } else if (!(v > -4.0 * u)) {
      std::ostringstream d;
      d << "v = " << v << " must be > -4u = " << -4.0 * u;
      fail(i, "denominator positivity", d.str());
    }
  }
  return report;
}

void require_admissible(const IFSParameters& params, const Partition& part) {
  const auto report = validate_parameters(params, part);
  if (!report.ok()) throw ValidationFailure(report);
}

double RationalPiece::value(double t) const noexcept {
  const double s = 1.0 - t;
  const double p = numerator[0] * s * s * s + numerator[1] * s * s * t +
                   numerator[2] * s * t * t + numerator[3] * t * t * t;
  return p / denominator(t);
}

double RationalPiece::slope_term(double t) const noexcept {
  const double s = 1.0 - t;
  double sum = 0.0;
  double tp = 1.0;
  for (std::size_t j = 0; j < slope_coeffs.size(); ++j) {
    sum += slope_coeffs[j] * tp * std::pow(s, 4 - static_cast<int>(j));
    tp *= t;
  }
  const double q = denominator(t);
  return sum / (q * q);
}

double RationalPiece::curvature_term(double t) const noexcept {
  const double s = 1.0 - t;
  double sum = 0.0;
  double tp = 1.0;
  for (std::size_t j = 0; j < curvature_coeffs.size(); ++j) {
    sum += curvature_coeffs[j] * tp * std::pow(s, 5 - static_cast<int>(j));
    tp *= t;
  }
  const double q = denominator(t);
  return sum / (width * q * q * q);
}

std::vector<RationalPiece> build_pieces(const HermiteData& data,
                                        const IFSParameters& params,
                                        const Partition& part) {
  require_admissible(params, part);
  const auto y = data.values();
  const auto d = data.derivatives();
  const double y_first = y.front();
  const double y_last = y.back();
  const double d_first = d.front();
  const double d_last = d.back();
  const double span = part.total_width;

  std::vector<RationalPiece> pieces(part.intervals());
  for (std::size_t n = 0; n < pieces.size(); ++n) {
    RationalPiece& pc = pieces[n];
    const double a = params.alpha[n];
    const double u = params.u[n];
    const double v = params.v[n];
    const double h = part.widths[n];

    pc.index = n;
    pc.scaling = a;
    pc.width = h;
    pc.map_slope = part.map_slopes[n];
    pc.shape_u = u;
    pc.shape_v = v;

    pc.left_value = y[n] - a * y_first;
    pc.right_value = y[n + 1] - a * y_last;
    pc.numerator[0] = u * pc.left_value;
    pc.numerator[1] =
        (3.0 * u + v) * pc.left_value + u * h * d[n] - a * u * span * d_first;
    pc.numerator[2] = (3.0 * u + v) * pc.right_value - u * h * d[n + 1] +
                      a * u * span * d_last;
    pc.numerator[3] = u * pc.right_value;

    const double ds = part.slopes[n] - a / h * (y_last - y_first);
    const double dl = d[n] - a / h * span * d_first;
    const double dr = d[n + 1] - a / h * span * d_last;
    pc.secant_star = ds;
    pc.left_slope_star = dl;
    pc.right_slope_star = dr;

    const double uu = u * u;
    pc.slope_coeffs = {
        uu * dl,
        (6.0 * uu + 2.0 * u * v) * ds - 2.0 * uu * dr,
        (12.0 * uu + 6.0 * u * v + v * v) * ds - (3.0 * uu + u * v) * (dl + dr),
        (6.0 * uu + 2.0 * u * v) * ds - 2.0 * uu * dl,
        uu * dr,
    };

    pc.curvature_coeffs = {
        2.0 * uu * ((3.0 * u + v) * ds - u * dr - (2.0 * u + v) * dl),
        2.0 * uu * ((7.0 * u + 2.0 * v) * (ds - dl) + 2.0 * u * (ds - dr)),
        2.0 * u * ((6.0 * uu + u * v) * ds - (8.0 * uu + u * v) * dl +
                   2.0 * uu * dr),
        2.0 * u * (-(6.0 * uu + u * v) * ds + (8.0 * uu + u * v) * dr -
                   2.0 * uu * dl),
        2.0 * uu * ((7.0 * u + 2.0 * v) * (dr - ds) - 2.0 * u * (ds - dl)),
        2.0 * uu * (-(3.0 * u + v) * ds + u * dl + (2.0 * u + v) * dr),
    };
  }
  return pieces;
}

double q_eval(const RationalPiece& piece, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorKind::malformed_parameters,
                "local coordinate must lie in [0, 1]");
  }
  if (!(piece.denominator(theta) > 0.0)) {
    throw Error(ErrorKind::denominator_positivity,
                "Q*(theta) <= 0 on interval " + std::to_string(piece.index + 1));
  }
  return piece.value(theta);
}

TensionParts tension_decomposition(const RationalPiece& piece, double theta) {
  const double t = theta;
  const double s = 1.0 - t;
  TensionParts parts;
  parts.affine = piece.left_value * s + piece.right_value * t;
  const double bracket = (2.0 * t - 1.0) * piece.secant_star +
                         s * piece.left_slope_star - t * piece.right_slope_star;
  parts.correction = piece.shape_u * piece.width * t * s * bracket /
                     piece.denominator(t);
  return parts;
}

}  // namespace frif
