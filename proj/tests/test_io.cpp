#include <cmath>
#include <limits>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "frif/error.hpp"
#include "frif/io.hpp"
#include "test_support.hpp"

using namespace frif;

namespace {

CurveSamples table_row_a(int order, int depth) {
  const auto data = with_estimated_derivatives(testing::monotone_sample());
  const auto p = testing::monotone_rows()[0].params();
  if (order == 1) return sample_derivative_fif(data, p, depth);
  return sample_fif(data, p, depth);
}

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

TEST_CASE("numbers round-trip through 17 significant digits") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 835.0, 0.0}) {
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "null");
}

TEST_CASE("dump_json writes compact, ordered, null-for-nonfinite output") {
  Json j{{"b", 1}, {"a", {0.5, std::numeric_limits<double>::infinity()}}, {"s", "q\"x"}, {"t", true}};
  CHECK(dump_json(j) == R"({"a":[0.5,null],"b":1,"s":"q\"x","t":true})");
  CHECK(dump_json(Json::parse("[]")) == "[]");
  CHECK(dump_json(Json{{"n", nullptr}}) == R"({"n":null})");
}

TEST_CASE("parse_data") {
  const auto data = parse_data(Json::parse(R"({"knots":[0,1,2],"values":[1,2,4],"derivatives":null})"));
  CHECK(data.size() == 3);
  CHECK_FALSE(data.has_derivatives());
  const auto with = parse_data(Json::parse(R"({"knots":[0,1,2],"values":[1,2,4],"derivatives":[1,1,1]})"));
  CHECK(with.has_derivatives());
  CHECK(kind_of([] { parse_data(Json::parse(R"({"knots":[0,1,2]})")); }) == ErrorKind::malformed_data);
  CHECK(kind_of([] { parse_data(Json::parse(R"({"knots":[0,"a",2],"values":[1,2,3]})")); }) ==
        ErrorKind::malformed_data);
  CHECK(kind_of([] { parse_data(Json::parse(R"([1,2])")); }) == ErrorKind::malformed_data);
  CHECK(kind_of([] { parse_data(Json::parse(R"({"knots":[0,2,1],"values":[1,2,3]})")); }) ==
        ErrorKind::malformed_data);
}

TEST_CASE("parse_params defaults and broadcasting") {
  const auto p = parse_params(Json::parse(R"({"v":[0.5,1,2]})"), 3);
  CHECK(p.alpha == std::vector<double>{0, 0, 0});
  CHECK(p.u == std::vector<double>{1, 1, 1});
  CHECK(p.v == std::vector<double>{0.5, 1, 2});
  CHECK(p.smoothness_order == 1);
  const auto q = parse_params(Json::parse(R"({"alpha":0.01,"u":2,"k":2})"), 2);
  CHECK(q.alpha == std::vector<double>{0.01, 0.01});
  CHECK(q.u == std::vector<double>{2, 2});
  CHECK(q.smoothness_order == 2);
  CHECK(kind_of([] { parse_params(Json::parse(R"({"alpha":[0,0]})"), 3); }) ==
        ErrorKind::malformed_parameters);
  CHECK(kind_of([] { parse_params(Json::parse(R"({"k":3})"), 3); }) == ErrorKind::malformed_parameters);
  CHECK(kind_of([] { parse_params(Json::parse(R"({"k":1.5})"), 3); }) == ErrorKind::malformed_parameters);
}

TEST_CASE("parse_problem") {
  const auto doc = parse_problem_text(R"({
    "data": {"knots":[0,0.5,2.2,3.3],"values":[124,331,379,835],"derivatives":null},
    "params": {"alpha":[0.08,0.06,0.15],"u":[0.1,0.1,0.1],"v":[0.09,15,0.15],"k":1},
    "mode": "monotone",
    "options": {"depth": 4, "derivative_order": 1}
  })");
  REQUIRE(doc.params);
  CHECK(doc.params->alpha[2] == 0.15);
  CHECK(doc.mode == ShapeMode::monotone);
  CHECK(doc.options.depth == 4);
  CHECK(doc.options.derivative_order == 1);
  CHECK_FALSE(doc.options.grid);
  CHECK(kind_of([] { parse_problem_text("{not json"); }) == ErrorKind::malformed_data);
  CHECK(kind_of([] { parse_problem_text(R"({"params":{}})"); }) == ErrorKind::malformed_data);
  CHECK(kind_of([] {
          parse_problem_text(R"({"data":{"knots":[0,1,2],"values":[0,1,2]},"options":{"grid":-5}})");
        }) == ErrorKind::malformed_parameters);
  CHECK(kind_of([] {
          parse_problem_text(R"({"data":{"knots":[0,1,2],"values":[0,1,2]},"mode":"wavy"})");
        }) == ErrorKind::malformed_parameters);
}

TEST_CASE("curve samples as JSON") {
  const auto s = table_row_a(0, 3);
  const Json j = Json::parse(dump_json(to_json(s)));
  CHECK(j["derivative_order"] == 0);
  CHECK(j["method"] == "recursion");
  CHECK(j["depth"] == 3);
  CHECK(j["count"] == s.size());
  CHECK_FALSE(j.contains("left"));
  REQUIRE(j["x"].size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(j["x"][i].get<double>() == s.entries[i].x);
    CHECK(j["y"][i].get<double>() == s.entries[i].y);
  }
}

TEST_CASE("second-derivative JSON and CSV carry left limits") {
  const auto data = with_estimated_derivatives(testing::convex_sample());
  const auto s = sample_second_derivative_fif(data, testing::convex_rows()[1].params(), 2);
  const Json j = Json::parse(dump_json(to_json(s)));
  REQUIRE(j.contains("left"));
  CHECK(j["left"][0].is_null());
  CHECK(j["left"][1].get<double>() == s.left_limits[1]);
  const auto csv = to_csv(s);
  CHECK(csv.rfind("x,y,left\n", 0) == 0);
  const auto second_line = csv.substr(9, csv.find('\n', 9) - 9);
  CHECK(second_line.back() == ',');
}

TEST_CASE("CSV output") {
  const auto s = table_row_a(0, 2);
  const auto csv = to_csv(s);
  CHECK(csv.rfind("x,y\n0,124\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == s.size() + 1);
  // Every value parses back exactly.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  for (std::size_t i = 0; std::getline(in, line); ++i) {
    const auto comma = line.find(',');
    CHECK(std::strtod(line.substr(0, comma).c_str(), nullptr) == s.entries[i].x);
    CHECK(std::strtod(line.substr(comma + 1).c_str(), nullptr) == s.entries[i].y);
  }
}

TEST_CASE("SVG output is text-free with padded viewBox") {
  const auto s = table_row_a(0, 3);
  const auto knots = testing::monotone_sample().knots();
  const auto svg = to_svg(s, knots);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<text") == std::string::npos);
  std::size_t markers = 0;
  for (auto pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1)) ++markers;
  CHECK(markers == knots.size());
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, std::regex("viewBox=\"([^ ]+) ([^ ]+) ([^ ]+) ([^\"]+)\"")));
  double y_lo = 1e300, y_hi = -1e300;
  for (const auto& p : s.entries) {
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  const double w = 3.3, h = y_hi - y_lo;
  CHECK(std::stod(m[1]) == doctest::Approx(-0.05 * w));
  CHECK(std::stod(m[3]) == doctest::Approx(1.1 * w));
  CHECK(std::stod(m[2]) == doctest::Approx(-y_hi - 0.05 * h));
  CHECK(std::stod(m[4]) == doctest::Approx(1.1 * h));
}

TEST_CASE("bounds, reports and fits serialize") {
  const auto data = with_estimated_derivatives(testing::convex_sample());
  const Json b = to_json(convex_bounds(data, std::vector<double>(3, 1.0)));
  CHECK(b["mode"] == "convex");
  CHECK(b["alpha_max"].size() == 3);
  CHECK(b["degenerate"][0] == false);

  ShapeReport report;
  report.verified = false;
  report.tolerance = 1e-9;
  report.violations.push_back({0.25, "rise", -1.0});
  const Json r = to_json(report);
  CHECK(r["violations"][0]["quantity"] == "rise");

  OrderFit fit;
  fit.target = "sin";
  fit.k = 3;
  fit.slope = 3.0;
  fit.levels.push_back({3, 9, 0.125, 1e-5, std::numeric_limits<double>::quiet_NaN()});
  fit.levels.push_back({4, 17, 0.0625, 1.25e-6, 3.0});
  CHECK(to_csv(fit) == "level,knots,h,error,running_slope\n3,9,0.125,1.0000000000000001e-05,\n"
                       "4,17,0.0625,1.2500000000000001e-06,3\n");
  CHECK(to_json(fit)["levels"][0]["running_slope"].is_null());
}

TEST_CASE("validation failures serialize their issues") {
  ValidationReport report;
  report.issues.push_back({1, "scaling bound", "|alpha| too large"});
  const Json j = error_json(ValidationFailure(report));
  CHECK(j["error"] == "validation");
  CHECK(j["issues"][0]["interval"] == 1);
}
