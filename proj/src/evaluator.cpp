#include "frif/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "frif/error.hpp"

namespace frif {

namespace {

constexpr double kDuplicateTolerance = 1e-14;
constexpr std::size_t kDefaultPointCap = std::size_t{1} << 22;
constexpr std::size_t kDefaultTargetPoints = 2000;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// One level of the composition tree. `left` is only populated for
// two-sided (second-derivative) sampling.
struct Level {
  std::vector<double> x;
  std::vector<double> right;
  std::vector<double> left;
};

struct RecursionPlan {
  std::vector<double> factors;  // multiplier of the parent ordinate
  bool two_sided = false;
  bool exact_knots = true;  // knot images take the seed values verbatim
};

template <class Forcing>
Level run_recursion(const HermiteData& data, const Partition& part,
                    const RecursionPlan& plan, Level level, int depth,
                    std::size_t max_points, Forcing&& forcing) {
  if (depth < 0) {
    throw Error(ErrorKind::malformed_parameters, "depth must be non-negative");
  }
  const std::size_t predicted = recursion_point_count(data.size(), depth);
  if (predicted > max_points) {
    std::ostringstream msg;
    msg << "depth " << depth << " would produce " << predicted
        << " points, above the cap of " << max_points;
    throw Error(ErrorKind::resource_limit, msg.str());
  }

  const auto knots = data.knots();
  const std::size_t intervals = part.intervals();
  const Level seeds = level;
  const double tol = kDuplicateTolerance * part.total_width;

  for (int step = 0; step < depth; ++step) {
    const std::size_t parent_count = level.x.size();
    Level next;
    const std::size_t reserve = intervals * (parent_count - 1) + 1;
    next.x.reserve(reserve);
    next.right.reserve(reserve);
    if (plan.two_sided) next.left.reserve(reserve);

    for (std::size_t n = 0; n < intervals; ++n) {
      const double f = plan.factors[n];
      const double x0 = knots[n];
      const double h = part.widths[n];
      for (std::size_t j = 0; j < parent_count; ++j) {
        const bool first = j == 0;
        const bool last = j + 1 == parent_count;
        const double theta =
            first ? 0.0 : last ? 1.0 : part.global_coordinate(level.x[j]);
        const double x = first ? knots[n] : last ? knots[n + 1] : x0 + h * theta;
        const double term = forcing(n, theta);

        double right = f * level.right[j] + term;
        double left = plan.two_sided ? f * level.left[j] + term : right;
        if (plan.exact_knots && (first || last)) {
          const std::size_t k = first ? n : n + 1;
          right = seeds.right[k];
          left = right;
        }
        if (last && plan.two_sided) right = kNaN;  // no right limit at x_N image yet

        if (first && n > 0) {
          // Shared endpoint with the previous interval's image of x_N.
          if (plan.two_sided) next.right.back() = right;
          continue;
        }
        if (!next.x.empty() && x <= next.x.back() + tol) continue;
        next.x.push_back(x);
        next.right.push_back(right);
        if (plan.two_sided) next.left.push_back(first ? kNaN : left);
      }
    }
    level = std::move(next);
  }
  return level;
}

Level knot_level(const HermiteData& data, std::span<const double> seeds) {
  Level level;
  level.x.assign(data.knots().begin(), data.knots().end());
  level.right.assign(seeds.begin(), seeds.end());
  return level;
}

CurveSamples to_samples(const Level& level, int order, GenerationMethod method,
                        int depth) {
  CurveSamples out;
  out.derivative_order = order;
  out.method = method;
  out.depth = depth;
  out.entries.resize(level.x.size());
  for (std::size_t i = 0; i < level.x.size(); ++i) {
    out.entries[i] = {level.x[i], level.right[i]};
  }
  if (!level.left.empty()) {
    out.left_limits = level.left;
    out.entries.back().y = level.left.back();
  }
  return out;
}

// Max |v - f_n v' - F_n(theta')| over all samples, where the parent x' is
// looked up in the same sample set through L_n^{-1}.
template <class Forcing>
double functional_residual(const CurveSamples& samples, const HermiteData& data,
                           const Partition& part,
                           std::span<const double> factors, Forcing&& forcing) {
  const auto knots = data.knots();
  const auto& e = samples.entries;
  double worst = 0.0;
  for (const auto& s : e) {
    const std::size_t n = locate_interval(knots, s.x);
    const double theta =
        std::clamp((s.x - knots[n]) / part.widths[n], 0.0, 1.0);
    const double parent_x = part.first + theta * part.total_width;
    auto it = std::lower_bound(
        e.begin(), e.end(), parent_x,
        [](const SamplePoint& p, double x) { return p.x < x; });
    if (it == e.end()) {
      --it;
    } else if (it != e.begin() &&
               std::abs(std::prev(it)->x - parent_x) < std::abs(it->x - parent_x)) {
      --it;
    }
    const double parent_theta = part.global_coordinate(it->x);
    const double r =
        std::abs(s.y - factors[n] * it->y - forcing(n, parent_theta));
    worst = std::max(worst, r);
  }
  return worst;
}

void require_scaling_below(const IFSParameters& params, const Partition& part,
                           int power) {
  for (std::size_t n = 0; n < params.alpha.size() && n < part.intervals(); ++n) {
    const double bound = std::pow(part.map_slopes[n], power);
    if (!(std::abs(params.alpha[n]) < bound)) {
      std::ostringstream msg;
      msg << "interval " << n + 1 << ": |alpha| = " << std::abs(params.alpha[n])
          << " must be < a^" << power << " = " << bound
          << " for derivative order " << power;
      throw Error(ErrorKind::smoothness_order, msg.str());
    }
  }
}

std::vector<double> scaled_factors(const IFSParameters& params,
                                   const Partition& part, int power) {
  std::vector<double> f(part.intervals());
  for (std::size_t n = 0; n < f.size(); ++n) {
    f[n] = params.alpha[n] / std::pow(part.map_slopes[n], power);
  }
  return f;
}

}  // namespace

const char* to_string(GenerationMethod method) {
  switch (method) {
    case GenerationMethod::recursion: return "recursion";
    case GenerationMethod::picard: return "picard";
    case GenerationMethod::closed_form: return "closed-form";
    case GenerationMethod::affine_limit: return "affine-limit";
  }
  return "unknown";
}

std::vector<double> CurveSamples::abscissae() const {
  std::vector<double> xs(entries.size());
  std::transform(entries.begin(), entries.end(), xs.begin(),
                 [](const SamplePoint& p) { return p.x; });
  return xs;
}

std::vector<double> CurveSamples::ordinates() const {
  std::vector<double> ys(entries.size());
  std::transform(entries.begin(), entries.end(), ys.begin(),
                 [](const SamplePoint& p) { return p.y; });
  return ys;
}

std::size_t default_point_cap() {
  if (const char* env = std::getenv("FRIF_MAX_POINTS")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) {
      return static_cast<std::size_t>(value);
    }
  }
  return kDefaultPointCap;
}

std::size_t recursion_point_count(std::size_t knots, int depth) {
  const std::size_t branches = knots - 1;
  std::size_t count = knots;
  for (int i = 0; i < depth; ++i) {
    if (count - 1 > (std::numeric_limits<std::size_t>::max() - 1) / branches) {
      return std::numeric_limits<std::size_t>::max();
    }
    count = branches * (count - 1) + 1;
  }
  return count;
}

int default_depth(std::size_t knots, std::size_t max_points) {
  int depth = 1;
  while (recursion_point_count(knots, depth) < kDefaultTargetPoints) ++depth;
  while (depth > 1 && recursion_point_count(knots, depth) > max_points) --depth;
  return depth;
}

CurveSamples sample_fif(const HermiteData& data, const IFSParameters& params,
                        int depth, std::size_t max_points) {
  const Partition part = build_partition(data);
  const auto pieces = build_pieces(data, params, part);
  RecursionPlan plan;
  plan.factors = params.alpha;
  auto forcing = [&](std::size_t n, double t) { return pieces[n].value(t); };
  const Level level = run_recursion(data, part, plan,
                                    knot_level(data, data.values()), depth,
                                    max_points, forcing);
  CurveSamples out = to_samples(level, 0, GenerationMethod::recursion, depth);
  out.residual = functional_residual(out, data, part, plan.factors, forcing);
  return out;
}

CurveSamples sample_derivative_fif(const HermiteData& data,
                                   const IFSParameters& params, int depth,
                                   std::size_t max_points) {
  const Partition part = build_partition(data);
  require_scaling_below(params, part, 1);
  const auto pieces = build_pieces(data, params, part);
  RecursionPlan plan;
  plan.factors = scaled_factors(params, part, 1);
  auto forcing = [&](std::size_t n, double t) { return pieces[n].slope_term(t); };
  const Level level = run_recursion(data, part, plan,
                                    knot_level(data, data.derivatives()), depth,
                                    max_points, forcing);
  CurveSamples out = to_samples(level, 1, GenerationMethod::recursion, depth);
  out.residual = functional_residual(out, data, part, plan.factors, forcing);
  return out;
}

CurveSamples sample_second_derivative_fif(const HermiteData& data,
                                          const IFSParameters& params,
                                          int depth, std::size_t max_points) {
  const Partition part = build_partition(data);
  require_scaling_below(params, part, 2);
  const auto pieces = build_pieces(data, params, part);
  RecursionPlan plan;
  plan.factors = scaled_factors(params, part, 2);
  plan.two_sided = true;
  plan.exact_knots = false;
  auto forcing = [&](std::size_t n, double t) {
    return pieces[n].curvature_term(t);
  };

  // One-sided seeds: fixed points of the first and last maps at the ends,
  // then one step of the recursion for the interior knots.
  const std::size_t last = part.intervals() - 1;
  const double at_first = forcing(0, 0.0) / (1.0 - plan.factors[0]);
  const double at_last = forcing(last, 1.0) / (1.0 - plan.factors[last]);
  Level level;
  level.x.assign(data.knots().begin(), data.knots().end());
  level.right.assign(data.size(), kNaN);
  level.left.assign(data.size(), kNaN);
  level.right.front() = at_first;
  level.left.back() = at_last;
  for (std::size_t j = 1; j + 1 < data.size(); ++j) {
    level.right[j] = plan.factors[j] * at_first + forcing(j, 0.0);
    level.left[j] = plan.factors[j - 1] * at_last + forcing(j - 1, 1.0);
  }

  const Level result =
      run_recursion(data, part, plan, level, depth, max_points, forcing);
  CurveSamples out = to_samples(result, 2, GenerationMethod::recursion, depth);
  out.residual = functional_residual(out, data, part, plan.factors, forcing);
  return out;
}

CurveSamples affine_fif_limit(const HermiteData& data,
                              const IFSParameters& params, int depth,
                              std::size_t max_points) {
  const Partition part = build_partition(data);
  require_admissible(params, part);
  const auto y = data.values();
  RecursionPlan plan;
  plan.factors = params.alpha;
  auto forcing = [&](std::size_t n, double t) {
    const double a = params.alpha[n];
    return (y[n] - a * y.front()) * (1.0 - t) + (y[n + 1] - a * y.back()) * t;
  };
  const Level level = run_recursion(data, part, plan, knot_level(data, y),
                                    depth, max_points, forcing);
  CurveSamples out = to_samples(level, 0, GenerationMethod::affine_limit, depth);
  out.residual = functional_residual(out, data, part, plan.factors, forcing);
  return out;
}

PicardResult picard_evaluate(const HermiteData& data,
                             const IFSParameters& params,
                             std::span<const double> grid, int iterations) {
  if (iterations < 1) {
    throw Error(ErrorKind::malformed_parameters, "iterations must be >= 1");
  }
  if (grid.size() < data.size()) {
    throw Error(ErrorKind::malformed_parameters,
                "Picard grid needs at least as many points as knots");
  }
  const Partition part = build_partition(data);
  const auto pieces = build_pieces(data, params, part);
  const double alpha_inf = max_abs_scaling(params);
  if (!(alpha_inf < 1.0)) {
    throw Error(ErrorKind::contraction_violation,
                "|alpha|_inf must be < 1 for the operator to contract");
  }
  const double tol = 1e-12 * part.total_width;
  if (std::abs(grid.front() - part.first) > tol ||
      std::abs(grid.back() - part.last) > tol) {
    throw Error(ErrorKind::malformed_parameters,
                "Picard grid must start at x_1 and end at x_N");
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) {
      throw Error(ErrorKind::malformed_parameters,
                  "Picard grid must be strictly increasing");
    }
  }

  const std::size_t m = grid.size();
  const auto knots = data.knots();
  const auto y = data.values();
  std::vector<double> xs(grid.begin(), grid.end());
  xs.front() = part.first;
  xs.back() = part.last;

  // Per grid point: owning interval, forcing value, and where L_n^{-1}(x)
  // falls on the grid.
  std::vector<double> scale(m), forcing(m), weight(m);
  std::vector<std::size_t> cell(m);
  std::vector<double> current(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t n = locate_interval(knots, xs[i]);
    const double theta = std::clamp((xs[i] - knots[n]) / part.widths[n], 0.0, 1.0);
    scale[i] = params.alpha[n];
    forcing[i] = pieces[n].value(theta);
    const double pre = part.first + theta * part.total_width;
    std::size_t k = locate_interval(xs, pre);
    cell[i] = k;
    weight[i] = std::clamp((pre - xs[k]) / (xs[k + 1] - xs[k]), 0.0, 1.0);

    const double s = (xs[i] - knots[n]) / part.widths[n];
    current[i] = y[n] + (y[n + 1] - y[n]) * std::clamp(s, 0.0, 1.0);
  }

  std::vector<double> next(m);
  auto apply = [&](const std::vector<double>& g, std::vector<double>& out) {
    double step = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t k = cell[i];
      const double w = weight[i];
      const double back = (1.0 - w) * g[k] + w * g[k + 1];
      out[i] = scale[i] * back + forcing[i];
      step = std::max(step, std::abs(out[i] - g[i]));
    }
    return step;
  };

  PicardResult result;
  for (int it = 0; it < iterations; ++it) {
    const double step = apply(current, next);
    if (it == 0) result.initial_oscillation = step;
    current.swap(next);
  }
  result.last_step = apply(current, next);
  result.step_bound =
      std::pow(alpha_inf, iterations) * result.initial_oscillation;

  CurveSamples& out = result.samples;
  out.derivative_order = 0;
  out.method = GenerationMethod::picard;
  out.depth = iterations;
  out.residual = result.last_step;
  out.entries.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.entries[i] = {xs[i], current[i]};
  return result;
}

PicardResult picard_evaluate(const HermiteData& data,
                             const IFSParameters& params,
                             std::size_t grid_points, int iterations) {
  if (grid_points < 2) {
    throw Error(ErrorKind::malformed_parameters, "grid needs at least 2 points");
  }
  std::vector<double> grid(grid_points);
  const double a = data.first_knot();
  const double w = data.total_width();
  for (std::size_t i = 0; i < grid_points; ++i) {
    grid[i] = a + w * static_cast<double>(i) / static_cast<double>(grid_points - 1);
  }
  grid.back() = data.last_knot();
  return picard_evaluate(data, params, grid, iterations);
}

int picard_iterations_for(double max_scaling, double oscillation,
                          double target) {
  if (oscillation <= target || max_scaling <= 0.0) return 1;
  if (!(max_scaling < 1.0)) {
    throw Error(ErrorKind::contraction_violation,
                "|alpha|_inf must be < 1 for the operator to contract");
  }
  const double m = std::log(target / oscillation) / std::log(max_scaling);
  return std::max(1, static_cast<int>(std::ceil(m)) + 1);
}

ClassicalSpline::ClassicalSpline(const HermiteData& data,
                                 std::span<const double> u,
                                 std::span<const double> v)
    : knots_(data.knots().begin(), data.knots().end()) {
  IFSParameters params = IFSParameters::classical(data.intervals());
  params.u.assign(u.begin(), u.end());
  params.v.assign(v.begin(), v.end());
  const Partition part = build_partition(data);
  pieces_ = build_pieces(data, params, part);
}

double ClassicalSpline::operator()(double x) const {
  const std::size_t n = locate_interval(knots_, x);
  const double theta =
      std::clamp((x - knots_[n]) / (knots_[n + 1] - knots_[n]), 0.0, 1.0);
  if (theta == 0.0) return pieces_[n].left_value;
  if (theta == 1.0) return pieces_[n].right_value;
  return pieces_[n].value(theta);
}

double classical_eval(const HermiteData& data, std::span<const double> u,
                      std::span<const double> v, double x) {
  if (!(x >= data.first_knot() && x <= data.last_knot())) {
    throw Error(ErrorKind::malformed_parameters,
                "evaluation point lies outside [x_1, x_N]");
  }
  return ClassicalSpline(data, u, v)(x);
}

}  // namespace frif
