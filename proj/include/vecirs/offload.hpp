#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vecirs/channel.hpp"
#include "vecirs/error.hpp"
#include "vecirs/scenario.hpp"

namespace vecirs {

/// The proposed hybrid scheme and its two benchmarks.
enum class Scheme {
  vha_irs,     // partial offloading through the drone-mounted surface
  vec_irs,     // full offloading through the surface
  vha_no_irs,  // partial offloading over the direct link only
};

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view label);

enum class Objective { sum_completion, max_completion };

/// Every optimizer block writes into one of these.
struct AllocationDecision {
  std::vector<double> split;          // fraction computed locally, per vehicle
  std::vector<double> edge_cpu;       // cycles/s
  std::vector<double> bandwidth;      // Hz
  std::vector<PhaseConfig> phases;    // surface configuration used for each vehicle
  Vec2 drone_xy;
};

struct ResultRecord {
  std::size_t vehicle = 0;
  Scheme scheme = Scheme::vha_irs;
  double rate = 0.0;          // bits/s
  double t_local = 0.0;       // s
  double t_offload = 0.0;     // s
  double t_completion = 0.0;  // s
  double energy = 0.0;        // J
  double split = 0.0;
};

/// Completion time of the locally computed share.
double local_time(double split, const TaskSpec& task, double local_cpu);

/// Upload plus edge execution of the offloaded share; +inf when a nonzero
/// share has no rate or no edge CPU.
double offload_time(double split, const TaskSpec& task, double rate, double edge_cpu);

double completion_time(double t_local, double t_offload);

double vehicle_energy(double split, const TaskSpec& task, double local_cpu, double tx_power,
                      double rate, double kappa);

/// Effective power gain of one vehicle's uplink under a decision.
double vehicle_gain(const Scenario& scenario, const ChannelRealization& realization,
                    const AllocationDecision& decision, Scheme scheme, std::size_t vehicle);

struct Evaluation {
  std::vector<ResultRecord> records;
  std::optional<Infeasibility> infeasible;

  bool feasible() const { return !infeasible.has_value(); }
};

/// Non-throwing evaluation; `infeasible` names the first violated constraint.
Evaluation assess_scheme(const Scenario& scenario, const ChannelRealization& realization,
                         const AllocationDecision& decision, Scheme scheme);

/// One record per vehicle. Throws InfeasibleError on a constraint violation.
std::vector<ResultRecord> evaluate_scheme(const Scenario& scenario,
                                          const ChannelRealization& realization,
                                          const AllocationDecision& decision, Scheme scheme);

double aggregate(const std::vector<ResultRecord>& records, Objective objective);

}  // namespace vecirs
