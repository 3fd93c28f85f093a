#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "internal.hpp"
#include "vecirs/optimizer.hpp"

namespace vecirs {

double min_cascaded_gain(const Scenario& scenario, Vec2 drone_xy) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < scenario.vehicles.size(); ++n)
    g = std::min(g, link_geometry(scenario, n, drone_xy).pl_cascaded);
  return g;
}

namespace {

bool better_seed(double value, Vec2 xy, double best_value, Vec2 best_xy) {
  if (value != best_value) return value > best_value;
  if (xy.x != best_xy.x) return xy.x < best_xy.x;
  return xy.y < best_xy.y;
}

Vec2 clamp_to_area(Vec2 p, double side) {
  return {std::clamp(p.x, 0.0, side), std::clamp(p.y, 0.0, side)};
}

/// Concave minorizer of the log cascaded gain of every vehicle around q0.
///
/// -ln(u) >= -ln(u0) - (u - u0)/u0 for the squared slant distances u, so each
/// vehicle's surrogate is a concave quadratic in the drone position that
/// touches the true log gain at q0.
class LogGainSurrogate {
 public:
  LogGainSurrogate(const Scenario& scenario, Vec2 q0) : scenario_(scenario) {
    const SystemConfig& c = scenario.config;
    h2_ = c.drone_height * c.drone_height;
    half_exp_ = 0.5 * c.pathloss_exp_los;
    const Vec2 ap = scenario.ap_position;
    ap_u0_ = squared(q0, ap) + h2_;
    for (const Vehicle& v : scenario.vehicles) u0_.push_back(squared(q0, v.position) + h2_);
  }

  double operator()(Vec2 q) const {
    const double ap_term = linearized(squared(q, scenario_.ap_position) + h2_, ap_u0_);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < u0_.size(); ++n) {
      const double u = squared(q, scenario_.vehicles[n].position) + h2_;
      worst = std::min(worst, -half_exp_ * (linearized(u, u0_[n]) + ap_term));
    }
    return worst;
  }

 private:
  static double squared(Vec2 a, Vec2 b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
  }
  // Upper bound of ln(u) tangent at u0.
  static double linearized(double u, double u0) { return std::log(u0) + (u - u0) / u0; }

  const Scenario& scenario_;
  double h2_ = 0.0;
  double half_exp_ = 0.0;
  double ap_u0_ = 0.0;
  std::vector<double> u0_;
};

/// Maximizes a concave function over the square [0, side]^2 by nested
/// golden-section searches (the partial maximum over y is concave in x).
Vec2 maximize_concave(const LogGainSurrogate& f, double side) {
  auto best_y = [&](double x) {
    return detail::golden_section_min([&](double y) { return -f({x, y}); }, 0.0, side, 50);
  };
  const double x = detail::golden_section_min([&](double x) { return -f({x, best_y(x)}); },
                                              0.0, side, 50);
  return {x, best_y(x)};
}

}  // namespace

PlacementResult place_drone_sca(const Scenario& scenario, Vec2 init_xy,
                                const SolveOptions& options) {
  const double side = scenario.config.area_side;
  const std::size_t res = std::max<std::size_t>(options.grid_resolution, 1);

  Vec2 q = clamp_to_area(init_xy, side);
  double value = min_cascaded_gain(scenario, q);
  for (std::size_t i = 0; i < res; ++i) {
    for (std::size_t j = 0; j < res; ++j) {
      const double step = res > 1 ? side / static_cast<double>(res - 1) : 0.0;
      const Vec2 p{static_cast<double>(i) * step, static_cast<double>(j) * step};
      const double g = min_cascaded_gain(scenario, p);
      if (better_seed(g, p, value, q)) {
        value = g;
        q = p;
      }
    }
  }

  PlacementResult out;
  out.trace.push_back(value);
  for (std::size_t it = 0; it < options.sca_max_iters; ++it) {
    const LogGainSurrogate surrogate(scenario, q);
    const Vec2 next = maximize_concave(surrogate, side);
    ++out.iterations;
    const double next_value = min_cascaded_gain(scenario, next);
    // The minorizer guarantees ascent up to line-search precision; keep the
    // iterate monotone regardless.
    if (!(next_value >= value) || !(surrogate(next) >= surrogate(q))) break;
    const double step = distance(next, q);
    q = next;
    value = next_value;
    out.trace.push_back(value);
    if (step < options.sca_step_tol) break;
  }
  out.drone_xy = q;
  return out;
}

}  // namespace vecirs
