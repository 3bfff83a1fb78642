#include "frif/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frif/error.hpp"

namespace frif {

namespace {

constexpr double kKnotSeparation = 1e-12;

void require_finite(std::span<const double> xs, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) {
      throw Error(ErrorKind::malformed_data, std::string(what) + "[" +
                                                 std::to_string(i + 1) +
                                                 "] is not finite");
    }
  }
}

}  // namespace

HermiteData::HermiteData(std::vector<double> knots, std::vector<double> values,
                         std::optional<std::vector<double>> derivatives)
    : knots_(std::move(knots)),
      values_(std::move(values)),
      derivatives_(std::move(derivatives)) {
  if (knots_.size() < 3) {
    throw Error(ErrorKind::malformed_data,
                "at least 3 knots are required, got " +
                    std::to_string(knots_.size()));
  }
  if (values_.size() != knots_.size()) {
    throw Error(ErrorKind::malformed_data,
                "values has length " + std::to_string(values_.size()) +
                    ", expected " + std::to_string(knots_.size()));
  }
  if (derivatives_ && derivatives_->size() != knots_.size()) {
    throw Error(ErrorKind::malformed_data,
                "derivatives has length " +
                    std::to_string(derivatives_->size()) + ", expected " +
                    std::to_string(knots_.size()));
  }
  require_finite(knots_, "knots");
  require_finite(values_, "values");
  if (derivatives_) require_finite(*derivatives_, "derivatives");

  const double width = knots_.back() - knots_.front();
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double h = knots_[i + 1] - knots_[i];
    if (!(h > 0.0) || !(h > kKnotSeparation * width)) {
      throw Error(ErrorKind::malformed_data,
                  "knots must be strictly increasing: x[" +
                      std::to_string(i + 2) + "] does not exceed x[" +
                      std::to_string(i + 1) + "]");
    }
  }
}

std::span<const double> HermiteData::derivatives() const {
  if (!derivatives_) {
    throw Error(ErrorKind::malformed_data, "derivative parameters are missing");
  }
  return *derivatives_;
}

HermiteData HermiteData::with_derivatives(std::vector<double> derivatives) const {
  return HermiteData(knots_, values_, std::move(derivatives));
}

Partition build_partition(const HermiteData& data) {
  const auto x = data.knots();
  const auto y = data.values();
  const std::size_t n = data.intervals();

  Partition part;
  part.first = x.front();
  part.last = x.back();
  part.total_width = part.last - part.first;
  part.widths.resize(n);
  part.map_slopes.resize(n);
  part.map_offsets.resize(n);
  part.slopes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = x[i + 1] - x[i];
    part.widths[i] = h;
    part.map_slopes[i] = h / part.total_width;
    part.map_offsets[i] =
        (x[i] * part.last - x[i + 1] * part.first) / part.total_width;
    part.slopes[i] = (y[i + 1] - y[i]) / h;
  }
  return part;
}

std::vector<double> estimate_derivatives_amm(const HermiteData& data) {
  const auto x = data.knots();
  const auto y = data.values();
  const std::size_t count = data.size();

  std::vector<double> h(count - 1);
  std::vector<double> delta(count - 1);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }

  std::vector<double> d(count);
  for (std::size_t i = 1; i + 1 < count; ++i) {
    d[i] = (h[i - 1] * delta[i] + h[i] * delta[i - 1]) / (h[i - 1] + h[i]);
  }
  d.front() = delta[0] + (delta[0] - delta[1]) * h[0] / (h[0] + h[1]);
  const std::size_t m = count - 2;  // last interval
  d.back() = delta[m] + (delta[m] - delta[m - 1]) * h[m] / (h[m - 1] + h[m]);
  return d;
}

HermiteData with_estimated_derivatives(const HermiteData& data) {
  if (data.has_derivatives()) return data;
  return data.with_derivatives(estimate_derivatives_amm(data));
}

std::size_t locate_interval(std::span<const double> knots, double x) {
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  if (it == knots.begin()) return 0;
  const auto index = static_cast<std::size_t>(it - knots.begin()) - 1;
  return std::min(index, knots.size() - 2);
}

}  // namespace frif
