#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vecirs/optimizer.hpp"
#include "internal.hpp"

namespace vecirs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

namespace detail {

std::optional<SplitBounds> feasible_split_bounds(const TaskSpec& task, double local_cpu,
                                                 double tx_power, double rate, double kappa,
                                                 double energy_budget) {
  // E(split) = full_local * split + full_offload * (1 - split)
  const double full_local = vehicle_energy(1.0, task, local_cpu, tx_power, rate, kappa);
  const double full_offload = vehicle_energy(0.0, task, local_cpu, tx_power, rate, kappa);
  if (std::min(full_local, full_offload) > energy_budget) return std::nullopt;
  SplitBounds b;
  if (full_offload > energy_budget) {
    b.lo = std::isinf(full_offload)
               ? 1.0
               : (full_offload - energy_budget) / (full_offload - full_local);
  } else if (full_local > energy_budget) {
    b.hi = (energy_budget - full_offload) / (full_local - full_offload);
  }
  b.lo = std::clamp(b.lo, 0.0, 1.0);
  b.hi = std::clamp(b.hi, 0.0, 1.0);
  // The closed forms can miss the budget by a rounding error that is large
  // in absolute terms when the offload energy is huge; step inwards until
  // the bound itself fits.
  auto energy = [&](double s) {
    return vehicle_energy(s, task, local_cpu, tx_power, rate, kappa);
  };
  double step = 0x1p-52;
  for (int i = 0; i < 64 && b.lo < 1.0 && energy(b.lo) > energy_budget; ++i, step *= 2.0)
    b.lo = std::min(1.0, b.lo + step);
  step = 0x1p-52;
  for (int i = 0; i < 64 && b.hi > 0.0 && energy(b.hi) > energy_budget; ++i, step *= 2.0)
    b.hi = std::max(0.0, b.hi - step);
  if (b.lo > b.hi) return std::nullopt;
  return b;
}

}  // namespace detail

SplitBounds energy_split_bounds(const TaskSpec& task, double local_cpu, double tx_power,
                                double rate, double kappa, double energy_budget) {
  if (!(rate > 0.0)) throw std::invalid_argument("energy_split_bounds: rate must be > 0");
  auto b = detail::feasible_split_bounds(task, local_cpu, tx_power, rate, kappa, energy_budget);
  if (!b) {
    const double least = std::min(vehicle_energy(1.0, task, local_cpu, tx_power, rate, kappa),
                                  vehicle_energy(0.0, task, local_cpu, tx_power, rate, kappa));
    throw InfeasibleError({"energy_budget", std::nullopt, least, energy_budget});
  }
  return *b;
}

double compute_min_split_for_energy(const TaskSpec& task, double local_cpu, double tx_power,
                                    double rate, double kappa, double energy_budget) {
  return energy_split_bounds(task, local_cpu, tx_power, rate, kappa, energy_budget).lo;
}

double optimal_split(double local_coeff, double offload_coeff, double min_split,
                     double max_split) {
  if (!(local_coeff > 0.0) && !(offload_coeff > 0.0))
    throw std::invalid_argument("optimal_split: both coefficients are zero");
  if (min_split > 1.0) throw InfeasibleError({"split_min", std::nullopt, min_split, 1.0});
  if (min_split > max_split)
    throw InfeasibleError({"split_bounds", std::nullopt, min_split, max_split});
  double phi = 1.0;
  if (!std::isinf(offload_coeff)) phi = offload_coeff / (local_coeff + offload_coeff);
  return std::clamp(phi, std::max(min_split, 0.0), std::min(max_split, 1.0));
}

namespace {

double completion_at(const VehicleContext& v, double rate, double edge_cpu) {
  auto bounds = detail::feasible_split_bounds(v.task, v.local_cpu, v.tx_power, rate, v.kappa,
                                              v.energy_budget);
  if (!bounds) return kInf;
  bounds->hi = std::min(bounds->hi, v.max_split);
  if (bounds->lo > bounds->hi) return kInf;
  double split = 0.0;
  if (v.split) {
    split = *v.split;
    if (split < bounds->lo - 1e-12 || split > bounds->hi + 1e-12) return kInf;
  } else {
    const double whole_local = local_time(1.0, v.task, v.local_cpu);
    const double whole_offload = offload_time(0.0, v.task, rate, edge_cpu);
    split = optimal_split(whole_local, whole_offload, bounds->lo, bounds->hi);
  }
  return completion_time(local_time(split, v.task, v.local_cpu),
                         offload_time(split, v.task, rate, edge_cpu));
}

}  // namespace

double completion_with_bandwidth(const VehicleContext& v, double bandwidth) {
  return completion_at(v, achievable_rate(bandwidth, v.tx_power, v.gain, v.noise_density),
                       v.edge_cpu);
}

double completion_with_edge_cpu(const VehicleContext& v, double edge_cpu) {
  return completion_at(v, achievable_rate(v.bandwidth, v.tx_power, v.gain, v.noise_density),
                       edge_cpu);
}

double best_split(const VehicleContext& v) {
  if (v.split) return *v.split;
  const double rate = achievable_rate(v.bandwidth, v.tx_power, v.gain, v.noise_density);
  auto bounds = detail::feasible_split_bounds(v.task, v.local_cpu, v.tx_power, rate, v.kappa,
                                              v.energy_budget);
  if (!bounds) throw InfeasibleError({"energy_budget", std::nullopt, 0.0, v.energy_budget});
  return optimal_split(local_time(1.0, v.task, v.local_cpu),
                       offload_time(0.0, v.task, rate, v.edge_cpu), bounds->lo,
                       std::min(bounds->hi, v.max_split));
}

}  // namespace vecirs
