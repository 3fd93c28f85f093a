#include "vecirs/offload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vecirs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSumTolerance = 1e-9;   // relative, resource totals
constexpr double kEnergySlack = 1e-9;    // absolute, joules

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::vha_irs: return "vha_irs";
    case Scheme::vec_irs: return "vec_irs";
    case Scheme::vha_no_irs: return "vha_no_irs";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view label) {
  if (label == "vha_irs") return Scheme::vha_irs;
  if (label == "vec_irs") return Scheme::vec_irs;
  if (label == "vha_no_irs") return Scheme::vha_no_irs;
  return std::nullopt;
}

double local_time(double split, const TaskSpec& task, double local_cpu) {
  if (split <= 0.0) return 0.0;
  return split * task.cycles() / local_cpu;
}

double offload_time(double split, const TaskSpec& task, double rate, double edge_cpu) {
  const double share = 1.0 - split;
  if (share <= 0.0) return 0.0;
  if (rate <= 0.0 || edge_cpu <= 0.0) return kInf;
  const double bits = share * task.data_size;
  const double upload = std::isinf(rate) ? 0.0 : bits / rate;
  return upload + bits * task.cycle_density / edge_cpu;
}

double completion_time(double t_local, double t_offload) { return std::max(t_local, t_offload); }

double vehicle_energy(double split, const TaskSpec& task, double local_cpu, double tx_power,
                      double rate, double kappa) {
  double e = 0.0;
  if (split > 0.0) e += kappa * local_cpu * local_cpu * split * task.cycles();
  const double share = 1.0 - split;
  if (share > 0.0) {
    if (rate <= 0.0) return kInf;
    if (!std::isinf(rate)) e += tx_power * share * task.data_size / rate;
  }
  return e;
}

double vehicle_gain(const Scenario& scenario, const ChannelRealization& realization,
                    const AllocationDecision& decision, Scheme scheme, std::size_t vehicle) {
  const LinkGeometry geo = link_geometry(scenario, vehicle, decision.drone_xy);
  const ComplexCoeff direct = realization.direct.at(vehicle);
  if (scheme == Scheme::vha_no_irs) return effective_gain(direct, {0.0, 0.0}, geo.pl_direct, 0.0);
  const ComplexCoeff cascade = cascaded_channel(realization.to_irs.at(vehicle),
                                                realization.irs_to_ap,
                                                decision.phases.at(vehicle));
  return effective_gain(direct, cascade, geo.pl_direct, geo.pl_cascaded);
}

Evaluation assess_scheme(const Scenario& scenario, const ChannelRealization& realization,
                         const AllocationDecision& decision, Scheme scheme) {
  const SystemConfig& cfg = scenario.config;
  const std::size_t n = scenario.vehicles.size();
  Evaluation out;
  auto reject = [&](std::string constraint, std::optional<std::size_t> vehicle, double value,
                    double limit) {
    out.records.clear();
    out.infeasible = Infeasibility{std::move(constraint), vehicle, value, limit};
    return out;
  };

  if (decision.split.size() != n || decision.edge_cpu.size() != n ||
      decision.bandwidth.size() != n)
    return reject("decision_shape", std::nullopt, static_cast<double>(decision.split.size()),
                  static_cast<double>(n));
  if (scheme != Scheme::vha_no_irs && decision.phases.size() != n)
    return reject("phase_shape", std::nullopt, static_cast<double>(decision.phases.size()),
                  static_cast<double>(n));

  for (std::size_t i = 0; i < n; ++i) {
    const double s = decision.split[i];
    if (!(s >= 0.0 && s <= 1.0) && scheme != Scheme::vec_irs)
      return reject("split_range", i, s, 1.0);
    if (!(decision.edge_cpu[i] >= 0.0)) return reject("edge_cpu_nonnegative", i,
                                                      decision.edge_cpu[i], 0.0);
    if (!(decision.bandwidth[i] >= 0.0)) return reject("bandwidth_nonnegative", i,
                                                       decision.bandwidth[i], 0.0);
  }
  const double cpu_sum = std::accumulate(decision.edge_cpu.begin(), decision.edge_cpu.end(), 0.0);
  if (cpu_sum > cfg.edge_cpu_total * (1.0 + kSumTolerance))
    return reject("edge_cpu_total", std::nullopt, cpu_sum, cfg.edge_cpu_total);
  const double bw_sum =
      std::accumulate(decision.bandwidth.begin(), decision.bandwidth.end(), 0.0);
  if (bw_sum > cfg.bandwidth_total * (1.0 + kSumTolerance))
    return reject("bandwidth_total", std::nullopt, bw_sum, cfg.bandwidth_total);

  out.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vehicle& v = scenario.vehicles[i];
    ResultRecord r;
    r.vehicle = i;
    r.scheme = scheme;
    r.split = scheme == Scheme::vec_irs ? 0.0 : decision.split[i];
    const double gain = vehicle_gain(scenario, realization, decision, scheme, i);
    r.rate = achievable_rate(decision.bandwidth[i], cfg.tx_power, gain, cfg.noise_density);
    r.t_local = local_time(r.split, v.task, v.local_cpu);
    r.t_offload = offload_time(r.split, v.task, r.rate, decision.edge_cpu[i]);
    r.t_completion = completion_time(r.t_local, r.t_offload);
    if (std::isinf(r.t_offload))
      return reject(r.rate <= 0.0 ? "uplink_rate" : "edge_cpu", i, 0.0, 0.0);
    r.energy = vehicle_energy(r.split, v.task, v.local_cpu, cfg.tx_power, r.rate, cfg.kappa);
    if (r.energy > cfg.energy_budget + kEnergySlack)
      return reject("energy_budget", i, r.energy, cfg.energy_budget);
    out.records.push_back(r);
  }
  return out;
}

std::vector<ResultRecord> evaluate_scheme(const Scenario& scenario,
                                          const ChannelRealization& realization,
                                          const AllocationDecision& decision, Scheme scheme) {
  Evaluation e = assess_scheme(scenario, realization, decision, scheme);
  if (e.infeasible) throw InfeasibleError(*e.infeasible);
  return std::move(e.records);
}

double aggregate(const std::vector<ResultRecord>& records, Objective objective) {
  double acc = 0.0;
  for (const ResultRecord& r : records) {
    if (objective == Objective::sum_completion) acc += r.t_completion;
    else acc = std::max(acc, r.t_completion);
  }
  return acc;
}

}  // namespace vecirs
