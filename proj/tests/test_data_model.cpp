#include <cmath>
#include <limits>

#include "doctest.h"
#include "frif/data_model.hpp"
#include "frif/error.hpp"
#include "test_support.hpp"

using namespace frif;
using frif::testing::InstanceGenerator;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::validation;
}

}  // namespace

TEST_CASE("amm derivatives of the monotone set") {
  const auto d = estimate_derivatives_amm(testing::monotone_sample());
  const double expected[] = {501.6738, 326.3262, 262.7807, 566.3102};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(d[i] - expected[i]) < 5e-5);
}

TEST_CASE("amm derivatives of the convex set") {
  const auto d = estimate_derivatives_amm(testing::convex_sample());
  const double expected[] = {2.3347, 32.7505, 47.3920, 61.4672};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(d[i] - expected[i]) < 5e-5);
}

TEST_CASE("amm is exact on quadratics") {
  // Weighted slope means reproduce p' for any quadratic p, including the
  // three-point end extrapolation.
  InstanceGenerator gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = gen.knots(gen.integer(3, 9));
    const double a = gen.uniform(-3, 3), b = gen.uniform(-3, 3), c = gen.uniform(-3, 3);
    std::vector<double> y;
    for (double xi : x) y.push_back(a * xi * xi + b * xi + c);
    const auto d = estimate_derivatives_amm(HermiteData(x, y));
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(d[i] == doctest::Approx(2 * a * x[i] + b).epsilon(1e-10));
    }
  }
}

TEST_CASE("amm does not clamp negative estimates on monotone data") {
  // Nondecreasing values whose end extrapolation overshoots below zero.
  const HermiteData data({0, 1, 2, 3}, {0, 0.9, 1.0, 1.0});
  const auto d = estimate_derivatives_amm(data);
  CHECK(d[3] < 0.0);
}

TEST_CASE("with_estimated_derivatives keeps supplied derivatives") {
  const HermiteData given({0, 1, 2}, {0, 1, 4}, std::vector<double>{7, 8, 9});
  const auto kept = with_estimated_derivatives(given);
  CHECK(kept.derivatives()[1] == 8.0);
  const auto filled = with_estimated_derivatives(HermiteData({0, 1, 2}, {0, 1, 4}));
  CHECK(filled.has_derivatives());
  CHECK(filled.derivatives()[1] == doctest::Approx(2.0));
}

TEST_CASE("construction rejects malformed data") {
  CHECK(kind_of([] { HermiteData({0, 1}, {0, 1}); }) == ErrorKind::malformed_data);
  CHECK(kind_of([] { HermiteData({0, 1, 2}, {0, 1}); }) == ErrorKind::malformed_data);
  CHECK(kind_of([] {
          HermiteData({0, 1, 2}, {0, 1, 2}, std::vector<double>{1, 1});
        }) == ErrorKind::malformed_data);
  CHECK(kind_of([] {
          HermiteData({0, 1, 2}, {0, std::numeric_limits<double>::quiet_NaN(), 2});
        }) == ErrorKind::malformed_data);
  CHECK(kind_of([] { HermiteData({0, 1, std::numeric_limits<double>::infinity()}, {0, 1, 2}); }) ==
        ErrorKind::malformed_data);
}

TEST_CASE("non-increasing knots are named by index") {
  try {
    HermiteData({0, 2, 1, 3}, {0, 1, 2, 3});
    FAIL("accepted decreasing knots");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::malformed_data);
    CHECK(std::string(e.what()).find("x[3]") != std::string::npos);
  }
}

TEST_CASE("near-duplicate knots are rejected relative to the total width") {
  CHECK_THROWS_AS(HermiteData({0, 1, 1 + 5e-13, 2}, {0, 1, 2, 3}), Error);
  CHECK_NOTHROW(HermiteData({0, 1, 1 + 1e-9, 2}, {0, 1, 2, 3}));
}

TEST_CASE("derivatives accessor requires derivatives") {
  const HermiteData data({0, 1, 2}, {0, 1, 2});
  CHECK_FALSE(data.has_derivatives());
  CHECK(kind_of([&] { (void)data.derivatives(); }) == ErrorKind::malformed_data);
}

TEST_CASE("maps send the whole interval onto each subinterval") {
  InstanceGenerator gen(12);
  for (int trial = 0; trial < 40; ++trial) {
    const auto data = gen.general();
    const auto part = build_partition(data);
    const auto x = data.knots();
    double sum = 0.0;
    for (std::size_t n = 0; n < part.intervals(); ++n) {
      CHECK(part.map(n, x.front()) == doctest::Approx(x[n]).epsilon(1e-14).scale(1));
      CHECK(part.map(n, x.back()) == doctest::Approx(x[n + 1]).epsilon(1e-14).scale(1));
      CHECK(part.map_slopes[n] > 0.0);
      CHECK(part.map_slopes[n] < 1.0);
      sum += part.map_slopes[n];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("monotone set map slopes") {
  const auto part = build_partition(testing::monotone_sample());
  CHECK(part.map_slopes[0] == doctest::Approx(0.15152).epsilon(1e-4));
  CHECK(part.map_slopes[1] == doctest::Approx(0.51515).epsilon(1e-4));
  CHECK(part.map_slopes[2] == doctest::Approx(0.33333).epsilon(1e-4));
  CHECK(part.slopes[0] == doctest::Approx(414.0));
}

TEST_CASE("locate_interval") {
  const std::vector<double> x{0, 1, 3, 4};
  CHECK(locate_interval(x, 0.0) == 0);
  CHECK(locate_interval(x, 0.5) == 0);
  CHECK(locate_interval(x, 1.0) == 1);
  CHECK(locate_interval(x, 3.5) == 2);
  CHECK(locate_interval(x, 4.0) == 2);
  CHECK(locate_interval(x, -1.0) == 0);
  CHECK(locate_interval(x, 9.0) == 2);
}
