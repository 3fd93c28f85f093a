#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vecirs/error.hpp"
#include "vecirs/optimizer.hpp"

// Grid search used to validate the coordinate-descent solver. It shares only
// the physical model (path loss, rate, time and energy formulas) with the
// solver; gains come from the closed-form aligned amplitude rather than from
// phase vectors, and splits from a scan of the split grid.

namespace vecirs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEnergySlack = 1e-9;

struct GridPoint {
  double time = kInf;
  std::size_t split_index = 0;
};

class VehicleGrid {
 public:
  VehicleGrid(const Scenario& sc, std::size_t n, Scheme scheme, std::size_t split_steps)
      : v_(sc.vehicles[n]), cfg_(sc.config), scheme_(scheme), steps_(split_steps) {}

  double split_at(std::size_t k) const {
    return static_cast<double>(k) / static_cast<double>(steps_);
  }

  double energy(std::size_t k, double rate) const {
    return vehicle_energy(split_at(k), v_.task, v_.local_cpu, cfg_.tx_power, rate, cfg_.kappa);
  }

  double time(std::size_t k, double rate, double cpu) const {
    const double s = split_at(k);
    return completion_time(local_time(s, v_.task, v_.local_cpu),
                           offload_time(s, v_.task, rate, cpu));
  }

  /// Contiguous range of energy-feasible split indices at this rate; empty
  /// when first > last. Energy is affine in the split, so the feasible set is
  /// an interval found by binary search on the budget predicate.
  std::pair<long, long> feasible_range(double rate) const {
    const long top = scheme_ == Scheme::vec_irs ? 0 : static_cast<long>(steps_);
    auto ok = [&](long k) { return energy(static_cast<std::size_t>(k), rate) <=
                                   cfg_.energy_budget + kEnergySlack; };
    const bool ok0 = ok(0), ok_top = ok(top);
    if (ok0 && ok_top) return {0, top};
    if (!ok0 && !ok_top) {
      // Neither end fits; an affine function then fits nowhere in between.
      return {1, 0};
    }
    long lo = 0, hi = top;
    if (ok0) {  // feasible prefix [0, last]
      while (hi - lo > 1) {
        const long mid = (lo + hi) / 2;
        (ok(mid) ? lo : hi) = mid;
      }
      return {0, lo};
    }
    while (hi - lo > 1) {  // feasible suffix [first, top]
      const long mid = (lo + hi) / 2;
      (ok(mid) ? hi : lo) = mid;
    }
    return {hi, top};
  }

  /// Exact minimum over the split grid on [first, last]. The completion time
  /// is a maximum of two affine functions of the split, hence a convex
  /// sequence; its first non-decreasing forward difference marks the minimum.
  GridPoint best(std::pair<long, long> range, double rate, double cpu) const {
    auto [first, last] = range;
    if (first > last) return {};
    auto t = [&](long k) { return time(static_cast<std::size_t>(k), rate, cpu); };
    long lo = first, hi = last;
    while (lo < hi) {
      const long mid = lo + (hi - lo) / 2;
      if (t(mid + 1) >= t(mid)) hi = mid;
      else lo = mid + 1;
    }
    return {t(lo), static_cast<std::size_t>(lo)};
  }

 private:
  const Vehicle& v_;
  const SystemConfig& cfg_;
  Scheme scheme_;
  std::size_t steps_;
};

double combine(Objective objective, double a, double b) {
  return objective == Objective::sum_completion ? a + b : std::max(a, b);
}

}  // namespace

OracleResult brute_force_oracle(const Scenario& scenario,
                                const ChannelRealization& realization, Scheme scheme,
                                Objective objective, const OracleGrid& grid) {
  const std::size_t n = scenario.vehicles.size();
  if (n > 3)
    throw TooLargeError("brute_force_oracle accepts at most 3 vehicles (got " +
                        std::to_string(n) + ")");
  if (grid.split_steps < 1 || grid.drone_points < 1 || grid.share_steps < 1)
    throw std::invalid_argument("brute_force_oracle: grid counts must be >= 1");

  const SystemConfig& cfg = scenario.config;
  const std::size_t m = grid.share_steps;
  const std::size_t shares = m + 1;

  std::vector<VehicleGrid> vehicles;
  std::vector<double> direct_amp(n), cascade_amp(n);
  for (std::size_t i = 0; i < n; ++i) {
    vehicles.emplace_back(scenario, i, scheme, grid.split_steps);
    direct_amp[i] = std::abs(realization.direct[i]);
    double s = 0.0;
    for (std::size_t k = 0; k < realization.irs_to_ap.size(); ++k)
      s += std::abs(realization.to_irs[i][k]) * std::abs(realization.irs_to_ap[k]);
    cascade_amp[i] = s;
  }

  const bool uses_drone = scheme != Scheme::vha_no_irs;
  const std::size_t points = uses_drone ? grid.drone_points : 1;
  const double step =
      points > 1 ? cfg.area_side / static_cast<double>(points - 1) : 0.0;

  OracleResult best;
  best.objective = kInf;
  std::vector<std::size_t> best_b(n, 0), best_c(n, 0), best_k(n, 0);

  // table[i][bw share][cpu share]
  std::vector<std::vector<GridPoint>> table(n, std::vector<GridPoint>(shares * shares));
  for (std::size_t px = 0; px < points; ++px) {
    for (std::size_t py = 0; py < points; ++py) {
      const Vec2 q{static_cast<double>(px) * step, static_cast<double>(py) * step};
      for (std::size_t i = 0; i < n; ++i) {
        const LinkGeometry geo = link_geometry(scenario, i, q);
        double amp = std::sqrt(geo.pl_direct) * direct_amp[i];
        if (uses_drone) amp += std::sqrt(geo.pl_cascaded) * cascade_amp[i];
        const double gain = amp * amp;
        for (std::size_t b = 0; b < shares; ++b) {
          const double bw = cfg.bandwidth_total * static_cast<double>(b) / static_cast<double>(m);
          const double rate = achievable_rate(bw, cfg.tx_power, gain, cfg.noise_density);
          const auto range = vehicles[i].feasible_range(rate);
          for (std::size_t c = 0; c < shares; ++c) {
            const double cpu =
                cfg.edge_cpu_total * static_cast<double>(c) / static_cast<double>(m);
            table[i][b * shares + c] = vehicles[i].best(range, rate, cpu);
          }
        }
      }

      auto consider = [&](double value, const std::vector<std::size_t>& bs,
                          const std::vector<std::size_t>& cs) {
        if (!(value < best.objective)) return;
        best.objective = value;
        best.decision.drone_xy = q;
        best_b = bs;
        best_c = cs;
        for (std::size_t i = 0; i < n; ++i)
          best_k[i] = table[i][bs[i] * shares + cs[i]].split_index;
      };

      if (n == 1) {
        consider(table[0][m * shares + m].time, {m}, {m});
      } else if (n == 2) {
        for (std::size_t b = 0; b <= m; ++b)
          for (std::size_t c = 0; c <= m; ++c)
            consider(combine(objective, table[0][b * shares + c].time,
                             table[1][(m - b) * shares + (m - c)].time),
                     {b, m - b}, {c, m - c});
      } else {
        for (std::size_t b0 = 0; b0 <= m; ++b0)
          for (std::size_t c0 = 0; c0 <= m; ++c0) {
            const double t0 = table[0][b0 * shares + c0].time;
            if (!(t0 < best.objective)) continue;
            for (std::size_t b1 = 0; b0 + b1 <= m; ++b1)
              for (std::size_t c1 = 0; c0 + c1 <= m; ++c1) {
                const double t01 = combine(objective, t0, table[1][b1 * shares + c1].time);
                const std::size_t b2 = m - b0 - b1, c2 = m - c0 - c1;
                consider(combine(objective, t01, table[2][b2 * shares + c2].time),
                         {b0, b1, b2}, {c0, c1, c2});
              }
          }
      }
    }
  }

  if (std::isinf(best.objective))
    throw InfeasibleError({"oracle_grid", std::nullopt, kInf, 0.0});

  AllocationDecision& d = best.decision;
  for (std::size_t i = 0; i < n; ++i) {
    d.split.push_back(vehicles[i].split_at(best_k[i]));
    d.bandwidth.push_back(cfg.bandwidth_total * static_cast<double>(best_b[i]) /
                          static_cast<double>(m));
    d.edge_cpu.push_back(cfg.edge_cpu_total * static_cast<double>(best_c[i]) /
                         static_cast<double>(m));
    d.phases.push_back(
        optimal_phases(realization.direct[i], realization.to_irs[i], realization.irs_to_ap));
  }
  return best;
}

}  // namespace vecirs
