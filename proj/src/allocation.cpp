#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "internal.hpp"
#include "vecirs/optimizer.hpp"

namespace vecirs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBisection = 200;
constexpr double kDeadlineRelTol = 1e-9;

/// Scales `x` up so it sums to `total`; spreads evenly when all are zero.
void fill_to_total(std::vector<double>& x, double total) {
  const double sum = std::accumulate(x.begin(), x.end(), 0.0);
  if (x.empty()) return;
  if (sum <= 0.0) {
    std::fill(x.begin(), x.end(), total / static_cast<double>(x.size()));
    return;
  }
  const double scale = total / sum;
  for (double& v : x) v *= scale;
}

/// Minimizes the sum of per-item nonincreasing convex costs subject to
/// sum(x) <= total by bisection on the Lagrange multiplier.
/// Pairwise exchange descent: moves a quantum of resource from one item to
/// another whenever that lowers the pair's cost, halving the quantum once no
/// move helps. Never increases the total cost; handles non-convex costs.
void transfer_descent(std::vector<double>& x, double total,
                      const std::function<double(std::size_t, double)>& cost) {
  const std::size_t n = x.size();
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = cost(i, x[i]);
  for (double delta = total / 4.0; delta > total * 1e-6; delta /= 2.0) {
    for (int pass = 0; pass < 50; ++pass) {
      bool moved = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j || x[j] <= 0.0) continue;
          const double d = std::min(delta, x[j]);
          const double ci = cost(i, x[i] + d), cj = cost(j, x[j] - d);
          const double before = c[i] + c[j];
          if (ci + cj < before - 1e-12 * std::abs(before)) {
            x[i] += d;
            x[j] -= d;
            c[i] = ci;
            c[j] = cj;
            moved = true;
          }
        }
      }
      if (!moved) break;
    }
  }
}

double total_cost(const std::vector<double>& x,
                  const std::function<double(std::size_t, double)>& cost) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += cost(i, x[i]);
  return s;
}

std::vector<double> lagrange_allocate(std::size_t n, double total,
                                      const std::function<double(std::size_t, double)>& cost,
                                      const char* constraint) {
  std::vector<double> floor(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isinf(cost(i, total)))
      throw InfeasibleError({constraint, i, total, total});
    floor[i] = detail::bisect_threshold([&](double x) { return !std::isinf(cost(i, x)); },
                                        total);
  }
  const double floor_sum = std::accumulate(floor.begin(), floor.end(), 0.0);
  if (floor_sum > total) throw InfeasibleError({constraint, std::nullopt, floor_sum, total});

  auto respond = [&](double mu) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = detail::scanned_min([&](double v) { return cost(i, v) + mu * v; }, floor[i],
                                 total);
    }
    return x;
  };
  auto sum_of = [](const std::vector<double>& x) {
    return std::accumulate(x.begin(), x.end(), 0.0);
  };

  std::vector<double> unpriced = respond(0.0);
  if (sum_of(unpriced) <= total) {
    fill_to_total(unpriced, total);
    return unpriced;
  }
  // Bracket the multiplier in log space: sum(x(mu_hi)) <= total < sum(x(mu_lo)).
  double log_hi = 0.0;
  for (int k = 0; k < 200 && sum_of(respond(std::exp(log_hi))) > total; ++k) log_hi += 5.0;
  double log_lo = log_hi - 5.0;
  for (int k = 0; k < 200 && sum_of(respond(std::exp(log_lo))) <= total; ++k) log_lo -= 5.0;
  for (int k = 0; k < 64; ++k) {
    const double mid = 0.5 * (log_lo + log_hi);
    if (sum_of(respond(std::exp(mid))) > total) log_lo = mid;
    else log_hi = mid;
  }
  std::vector<double> x = respond(std::exp(log_hi));
  // Give the slack back; every cost is nonincreasing in its share.
  const double slack = total - sum_of(x);
  if (slack > 0.0) {
    const double active = sum_of(x);
    for (double& v : x)
      v += active > 0.0 ? slack * v / active : slack / static_cast<double>(n);
  }
  return x;
}

}  // namespace

EdgeCpuAllocation allocate_edge_cpu(std::span<const double> offloaded_cycles,
                                    std::span<const double> fixed_times, double total) {
  if (!(total > 0.0)) throw std::invalid_argument("allocate_edge_cpu: total must be > 0");
  if (offloaded_cycles.size() != fixed_times.size())
    throw std::invalid_argument("allocate_edge_cpu: length mismatch");
  const std::size_t n = offloaded_cycles.size();
  EdgeCpuAllocation out;
  out.edge_cpu.assign(n, 0.0);

  double cycle_sum = 0.0;
  double fixed_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (offloaded_cycles[i] < 0.0)
      throw std::invalid_argument("allocate_edge_cpu: negative cycles");
    if (offloaded_cycles[i] > 0.0) {
      cycle_sum += offloaded_cycles[i];
      fixed_max = std::max(fixed_max, fixed_times[i]);
    }
  }
  if (cycle_sum == 0.0) {
    for (std::size_t i = 0; i < n; ++i) out.deadline = std::max(out.deadline, fixed_times[i]);
    return out;
  }

  auto demand = [&](double deadline) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (offloaded_cycles[i] > 0.0) s += offloaded_cycles[i] / (deadline - fixed_times[i]);
    return s;
  };
  double lo = fixed_max;
  double hi = fixed_max + cycle_sum / total;  // every branch meets it with <= total
  // Bisect to machine precision: when fixed times dominate, a small relative
  // error in the deadline is a large one in the branch compute times.
  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (demand(mid) <= total) hi = mid;
    else lo = mid;
  }
  if (hi - lo > kDeadlineRelTol * hi)
    throw ConvergenceError("allocate_edge_cpu did not converge", lo, hi);

  for (std::size_t i = 0; i < n; ++i)
    if (offloaded_cycles[i] > 0.0)
      out.edge_cpu[i] = offloaded_cycles[i] / (hi - fixed_times[i]);
  // Renormalize to the exact total to remove floating drift.
  const double used = std::accumulate(out.edge_cpu.begin(), out.edge_cpu.end(), 0.0);
  for (double& r : out.edge_cpu) r *= total / used;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = offloaded_cycles[i] > 0.0
                         ? fixed_times[i] + offloaded_cycles[i] / out.edge_cpu[i]
                         : fixed_times[i];
    out.deadline = std::max(out.deadline, t);
  }
  return out;
}

BandwidthAllocation allocate_bandwidth(std::span<const VehicleContext> vehicles, double total,
                                       BandwidthMode mode) {
  if (!(total > 0.0)) throw std::invalid_argument("allocate_bandwidth: total must be > 0");
  const std::size_t n = vehicles.size();
  BandwidthAllocation out;
  if (n == 0) return out;

  auto max_completion = [&](const std::vector<double>& b) {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      t = std::max(t, completion_with_bandwidth(vehicles[i], b[i]));
    return t;
  };

  std::vector<double> equal(n, total / static_cast<double>(n));
  if (mode == BandwidthMode::equal_split) {
    out.bandwidth = equal;
    out.deadline = max_completion(equal);
    return out;
  }

  // Lower bracket: each vehicle alone with the whole band.
  double lo = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = completion_with_bandwidth(vehicles[i], total);
    if (std::isinf(t)) throw InfeasibleError({"bandwidth_total", i, total, total});
    lo = std::max(lo, t);
  }

  auto required = [&](std::size_t i, double deadline) {
    if (completion_with_bandwidth(vehicles[i], total) > deadline) return kInf;
    return detail::bisect_threshold(
        [&](double b) { return completion_with_bandwidth(vehicles[i], b) <= deadline; }, total);
  };
  auto required_sum = [&](double deadline) {
    double s = 0.0;
    for (std::size_t i = 0; i < n && s <= total; ++i) s += required(i, deadline);
    return s;
  };

  double hi = max_completion(equal);
  if (std::isinf(hi)) {
    // Equal shares break someone's energy budget; bracket from the minimum
    // feasible shares instead.
    std::vector<double> floor(n);
    for (std::size_t i = 0; i < n; ++i)
      floor[i] = detail::bisect_threshold(
          [&](double b) { return !std::isinf(completion_with_bandwidth(vehicles[i], b)); },
          total);
    const double floor_sum = std::accumulate(floor.begin(), floor.end(), 0.0);
    if (floor_sum > total)
      throw InfeasibleError({"bandwidth_total", std::nullopt, floor_sum, total});
    for (double& b : floor) b += (total - floor_sum) / static_cast<double>(n);
    hi = max_completion(floor);
  }
  if (lo > hi) lo = hi;

  int it = 0;
  for (; it < kMaxBisection && hi - lo > kDeadlineRelTol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (required_sum(mid) <= total) hi = mid;
    else lo = mid;
  }
  if (hi - lo > kDeadlineRelTol * hi)
    throw ConvergenceError("allocate_bandwidth did not converge", lo, hi);

  out.bandwidth.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.bandwidth[i] = required(i, hi);
  if (std::accumulate(out.bandwidth.begin(), out.bandwidth.end(), 0.0) > total) {
    out.bandwidth = equal;  // numerical corner: hi was the equal-split deadline
  }
  fill_to_total(out.bandwidth, total);
  out.deadline = max_completion(out.bandwidth);
  return out;
}

namespace {

/// Best of the dual solution and the incumbent, each polished by exchange
/// descent. The incumbent is used only when it is a feasible point.
std::vector<double> sum_allocate(std::size_t n, double total, std::vector<double> incumbent,
                                 const std::function<double(std::size_t, double)>& cost,
                                 const char* constraint) {
  std::vector<double> dual = lagrange_allocate(n, total, cost, constraint);
  transfer_descent(dual, total, cost);
  const double used = std::accumulate(incumbent.begin(), incumbent.end(), 0.0);
  const double dual_cost = total_cost(dual, cost);
  if (incumbent.size() != n || used > total * (1.0 + 1e-9) ||
      std::isinf(total_cost(incumbent, cost)))
    return dual;
  fill_to_total(incumbent, total);
  transfer_descent(incumbent, total, cost);
  return total_cost(incumbent, cost) < dual_cost ? incumbent : dual;
}

}  // namespace

std::vector<double> allocate_bandwidth_sum(std::span<const VehicleContext> vehicles,
                                           double total) {
  std::vector<double> current;
  for (const auto& v : vehicles) current.push_back(v.bandwidth);
  return sum_allocate(
      vehicles.size(), total, std::move(current),
      [&](std::size_t i, double b) { return completion_with_bandwidth(vehicles[i], b); },
      "bandwidth_total");
}

std::vector<double> allocate_edge_cpu_sum(std::span<const VehicleContext> vehicles,
                                          double total) {
  std::vector<double> current;
  for (const auto& v : vehicles) current.push_back(v.edge_cpu);
  return sum_allocate(
      vehicles.size(), total, std::move(current),
      [&](std::size_t i, double r) { return completion_with_edge_cpu(vehicles[i], r); },
      "edge_cpu_total");
}

}  // namespace vecirs
