#include <cmath>

#include "doctest.h"
#include "frif/convergence.hpp"
#include "frif/error.hpp"
#include "frif/evaluator.hpp"
#include "test_support.hpp"

using namespace frif;
using frif::testing::InstanceGenerator;

namespace {

HermiteData monotone_with_amm() {
  return with_estimated_derivatives(testing::monotone_sample());
}

OrderOptions options(ConvergenceMode mode, int k, double v = 1.0) {
  OrderOptions o;
  o.mode = mode;
  o.k = k;
  o.v = v;
  o.first_level = 3;
  o.levels = 5;
  return o;
}

}  // namespace

TEST_CASE("zero scaling gives a zero bound and zero distance") {
  const auto r = perturbation_bound(monotone_with_amm(), testing::monotone_rows()[5].params());
  CHECK(r.bound == 0.0);
  CHECK(r.measured_sup_distance == 0.0);
  CHECK(r.depth == 6);
}

TEST_CASE("bound terms for monotone row (a)") {
  const auto data = monotone_with_amm();
  const auto params = testing::monotone_rows()[0].params();
  const auto r = perturbation_bound(data, params);
  CHECK(r.M == doctest::Approx(835.0 + 835.0));
  CHECK(r.s == doctest::Approx(0.1 + 0.09 / 4));
  CHECK(r.alpha_inf == 0.15);
  CHECK(r.h == doctest::Approx(1.7));
  // The closed form splits as alpha / (1 - alpha) times the two norm bounds.
  CHECK(r.bound == doctest::Approx(0.15 / 0.85 * (r.classical_norm_bound + r.K0)));
  CHECK(r.measured_sup_distance > 0.0);
  CHECK(r.measured_sup_distance <= r.bound);
}

TEST_CASE("measured distance is below the bound on random instances") {
  InstanceGenerator gen(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = gen.admissible();
    const auto r = perturbation_bound(inst.data, inst.params, 4);
    CHECK(r.s > 0.0);
    CHECK(r.bound >= 0.0);
    CHECK(r.measured_sup_distance <= r.bound);
  }
}

TEST_CASE("bound is invariant under common scaling of u and v") {
  InstanceGenerator gen(62);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = gen.admissible();
    auto scaled = inst.params;
    const double lambda = gen.uniform(0.05, 20.0);
    for (auto& u : scaled.u) u *= lambda;
    for (auto& v : scaled.v) v *= lambda;
    const auto a = perturbation_bound(inst.data, inst.params, 0);
    const auto b = perturbation_bound(inst.data, scaled, 0);
    CHECK(b.bound == doctest::Approx(a.bound).epsilon(1e-12));
  }
}

TEST_CASE("bound is nondecreasing in the largest scaling") {
  InstanceGenerator gen(63);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = gen.admissible();
    const auto base = inst.params.alpha;
    double previous = -1.0;
    for (double t : {0.0, 0.1, 0.3, 0.5, 0.8, 1.0}) {
      for (std::size_t n = 0; n < base.size(); ++n) inst.params.alpha[n] = t * base[n];
      const double bound = perturbation_bound(inst.data, inst.params, 0).bound;
      CHECK(bound >= previous);
      previous = bound;
    }
  }
}

TEST_CASE("scaling of one or more is a divergent bound") {
  const auto data = monotone_with_amm();
  IFSParameters p = IFSParameters::classical(3);
  p.alpha[2] = 1.0;
  try {
    perturbation_bound(data, p);
    FAIL("accepted alpha = 1");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::divergent_bound);
  }
}

TEST_CASE("targets and their derivatives") {
  for (const auto& name : target_names()) {
    const auto t = named_target(name);
    CHECK(t.name == name);
    for (double x : {0.1, 0.5, 0.9}) {
      const double e = 1e-6;
      CHECK(t.derivative(x) == doctest::Approx((t.value(x + e) - t.value(x - e)) / (2 * e)).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(named_target("cos"), Error);
}

TEST_CASE("k = 3 distance to the classical spline converges at third order") {
  for (const char* name : {"sin", "exp", "xlog1p"}) {
    const auto fit = empirical_order(named_target(name), options(ConvergenceMode::fif_vs_classical, 3));
    CAPTURE(name);
    CHECK(fit.levels.size() == 5);
    CHECK(std::isnan(fit.levels[0].running_slope));
    CHECK(std::isfinite(fit.slope));
    CHECK(fit.slope >= 2.7);
  }
}

TEST_CASE("k = 2 distance to the classical spline converges at second order") {
  const auto fit = empirical_order(named_target("sin"), options(ConvergenceMode::fif_vs_classical, 2));
  CHECK(fit.slope >= 1.8);
}

TEST_CASE("distance to the target with the cubic Hermite shape is third order") {
  for (const char* name : {"sin", "exp", "xlog1p"}) {
    const auto fit =
        empirical_order(named_target(name), options(ConvergenceMode::target_vs_fif, 3, 0.0));
    CAPTURE(name);
    CHECK(fit.slope >= 2.7);
  }
}

TEST_CASE("a fixed v = 1 caps the distance to the target at second order") {
  // The classical rational spline itself is only O(h^2) for fixed v != 0,
  // which dominates the O(h^3) perturbation term.
  const auto fit = empirical_order(named_target("sin"), options(ConvergenceMode::target_vs_fif, 3, 1.0));
  CHECK(fit.slope > 1.8);
  CHECK(fit.slope < 2.3);
}

TEST_CASE("affine target is reproduced exactly at every level") {
  for (auto mode : {ConvergenceMode::target_vs_fif, ConvergenceMode::fif_vs_classical}) {
    const auto fit = empirical_order(named_target("affine"), options(mode, 3));
    CHECK(fit.exact);
    for (const auto& l : fit.levels) CHECK(l.error <= 1e-12);
    CHECK(std::isfinite(fit.slope));
  }
}

TEST_CASE("order fits need four levels and a valid rule") {
  auto o = options(ConvergenceMode::fif_vs_classical, 3);
  o.levels = 3;
  CHECK_THROWS_AS(empirical_order(named_target("sin"), o), Error);
  o.levels = 4;
  o.k = 4;
  CHECK_THROWS_AS(empirical_order(named_target("sin"), o), Error);
  CHECK(parse_convergence_mode("phi-vs-g") == ConvergenceMode::target_vs_fif);
  CHECK(std::string(to_string(ConvergenceMode::fif_vs_classical)) == "g-vs-c");
  CHECK_THROWS_AS(parse_convergence_mode("x"), Error);
}
