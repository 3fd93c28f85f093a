#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vecirs/channel.hpp"
#include "vecirs/offload.hpp"
#include "vecirs/scenario.hpp"

namespace vecirs {

struct SolveOptions {
  std::size_t max_outer_iters = 100;
  double rel_tol = 1e-4;
  std::size_t sca_max_iters = 50;
  double sca_step_tol = 0.1;         // m
  std::size_t grid_resolution = 25;  // points per axis of the placement seed grid
  Objective objective = Objective::sum_completion;
};

void validate_options(const SolveOptions& options);

// ---------------------------------------------------------------------------
// Split

/// Interval of local fractions that keep a vehicle within its energy budget.
struct SplitBounds {
  double lo = 0.0;
  double hi = 1.0;
};

/// Energy is affine in the split, so the feasible set is an interval. Throws
/// InfeasibleError when neither end of [0, 1] fits the budget.
SplitBounds energy_split_bounds(const TaskSpec& task, double local_cpu, double tx_power,
                                double rate, double kappa, double energy_budget);

/// Smallest split satisfying the energy budget.
double compute_min_split_for_energy(const TaskSpec& task, double local_cpu, double tx_power,
                                    double rate, double kappa, double energy_budget);

/// Minimizer of max(split * local_coeff, (1 - split) * offload_coeff) over
/// [min_split, max_split]. The interior optimum equalizes the two branches.
double optimal_split(double local_coeff, double offload_coeff, double min_split,
                     double max_split = 1.0);

// ---------------------------------------------------------------------------
// Resource allocation

/// Everything needed to price one vehicle's completion time while a single
/// resource (its bandwidth or its edge CPU share) varies.
struct VehicleContext {
  TaskSpec task;
  double local_cpu = 0.0;
  double gain = 0.0;       // effective power gain of the uplink
  double bandwidth = 0.0;  // Hz, used when edge CPU varies
  double edge_cpu = 0.0;   // cycles/s, used when bandwidth varies
  double tx_power = 0.0;
  double noise_density = 0.0;
  double kappa = 0.0;
  double energy_budget = 0.0;
  std::optional<double> split;  // nullopt: best split within the energy bounds
  double max_split = 1.0;       // 0 pins full offloading
};

/// Completion time with the given bandwidth (edge CPU from the context);
/// +inf when no split meets the energy budget.
double completion_with_bandwidth(const VehicleContext& v, double bandwidth);

/// Completion time with the given edge CPU (bandwidth from the context).
double completion_with_edge_cpu(const VehicleContext& v, double edge_cpu);

/// Split that `completion_with_*` would use at the context's resources.
double best_split(const VehicleContext& v);

struct EdgeCpuAllocation {
  std::vector<double> edge_cpu;
  double deadline = 0.0;  // common completion time of the offloaded branches
};

/// Min-max allocation of the edge CPU: bisection on the common deadline T
/// with rho_n(T) = cycles_n / (T - fixed_n).
EdgeCpuAllocation allocate_edge_cpu(std::span<const double> offloaded_cycles,
                                    std::span<const double> fixed_times, double total);

enum class BandwidthMode { equal_split, optimized };

struct BandwidthAllocation {
  std::vector<double> bandwidth;
  double deadline = 0.0;  // max completion time achieved
};

/// Min-max bandwidth allocation: bisection on the deadline using each
/// vehicle's deadline -> minimum bandwidth map. Never worse than B/N each.
BandwidthAllocation allocate_bandwidth(std::span<const VehicleContext> vehicles, double total,
                                       BandwidthMode mode = BandwidthMode::optimized);

/// Sum-of-completion-times allocations (Lagrange multiplier bisection over
/// per-vehicle convex costs). Splits are re-optimized inside each cost.
std::vector<double> allocate_bandwidth_sum(std::span<const VehicleContext> vehicles,
                                           double total);
std::vector<double> allocate_edge_cpu_sum(std::span<const VehicleContext> vehicles,
                                          double total);

// ---------------------------------------------------------------------------
// Drone placement

/// min over vehicles of the large-scale cascaded gain at a drone position.
double min_cascaded_gain(const Scenario& scenario, Vec2 drone_xy);

struct PlacementResult {
  Vec2 drone_xy;
  std::vector<double> trace;  // min cascaded gain at each accepted iterate
  std::size_t iterations = 0;
};

/// Successive convex approximation of the max-min placement problem, seeded
/// from the best of `init_xy` and a coarse grid.
PlacementResult place_drone_sca(const Scenario& scenario, Vec2 init_xy,
                                const SolveOptions& options);

// ---------------------------------------------------------------------------
// Block coordinate descent

enum class Block { initial, phases, placement, bandwidth, split, edge_cpu };
std::string_view to_string(Block b);

enum class Termination { converged, max_iterations };

struct SolveStep {
  std::size_t iteration = 0;
  Block block = Block::initial;
  double objective = 0.0;
};

struct SolveTrace {
  std::vector<double> objective;       // [0] initial, then one per outer iteration
  std::vector<SolveStep> improvements; // accepted block updates
  std::vector<PlacementResult> placements;
  Termination termination = Termination::converged;
  std::size_t outer_iterations = 0;
};

struct SolveResult {
  AllocationDecision decision;
  std::vector<ResultRecord> records;
  double objective = 0.0;
  SolveTrace trace;
};

/// Initial feasible decision: aligned phases, drone at the best seed-grid
/// point, equal bandwidth and edge CPU, energy-clamped equalizing splits.
AllocationDecision initial_decision(const Scenario& scenario,
                                    const ChannelRealization& realization, Scheme scheme,
                                    const SolveOptions& options);

/// Cyclic updates phases -> placement -> bandwidth -> split -> edge CPU; a
/// block update is kept only if it does not increase the objective. Each
/// warm start is run to convergence as well and the best result returned.
SolveResult bcd_optimize(const Scenario& scenario, const ChannelRealization& realization,
                         Scheme scheme, const SolveOptions& options = {},
                         std::span<const AllocationDecision> warm_starts = {});

/// The full protocol for one scheme: the proposed scheme is warm-started from
/// the solutions of both benchmarks (whichever are feasible), which makes it
/// provably no worse than either. The benchmarks are solved plainly.
SolveResult solve_scheme(const Scenario& scenario, const ChannelRealization& realization,
                         Scheme scheme, const SolveOptions& options = {});

// ---------------------------------------------------------------------------
// Exhaustive oracle

struct OracleGrid {
  std::size_t split_steps = 1000;   // split grid step 1e-3
  std::size_t drone_points = 100;   // per axis
  std::size_t share_steps = 50;     // simplex step 0.02
};

struct OracleResult {
  AllocationDecision decision;
  double objective = 0.0;
};

/// Grid search over drone position, bandwidth and edge CPU shares and
/// split, with exact phase alignment. Refuses instances with more than three
/// vehicles (TooLargeError).
OracleResult brute_force_oracle(const Scenario& scenario,
                                const ChannelRealization& realization, Scheme scheme,
                                Objective objective, const OracleGrid& grid = {});

}  // namespace vecirs
