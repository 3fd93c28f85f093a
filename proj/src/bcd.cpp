#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "internal.hpp"
#include "vecirs/optimizer.hpp"

namespace vecirs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMonotoneSlack = 1e-9;

}  // namespace

std::string_view to_string(Block b) {
  switch (b) {
    case Block::initial: return "initial";
    case Block::phases: return "phases";
    case Block::placement: return "placement";
    case Block::bandwidth: return "bandwidth";
    case Block::split: return "split";
    case Block::edge_cpu: return "edge_cpu";
  }
  return "unknown";
}

void validate_options(const SolveOptions& o) {
  if (o.max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be ≥ 1");
  if (!(o.rel_tol > 0.0) || o.rel_tol > 1.0)
    throw std::invalid_argument("rel_tol must be in (0, 1]");
  if (o.sca_max_iters < 1) throw std::invalid_argument("sca_max_iters must be ≥ 1");
  if (!(o.sca_step_tol > 0.0)) throw std::invalid_argument("sca_step_tol must be > 0");
  if (o.grid_resolution < 1) throw std::invalid_argument("grid_resolution must be ≥ 1");
}

namespace {

class Solver {
 public:
  Solver(const Scenario& scenario, const ChannelRealization& realization, Scheme scheme,
         const SolveOptions& options)
      : sc_(scenario), re_(realization), scheme_(scheme), opt_(options) {}

  double objective(const AllocationDecision& d) const {
    const Evaluation e = assess_scheme(sc_, re_, d, scheme_);
    if (!e.feasible()) return kInf;
    return aggregate(e.records, opt_.objective);
  }

  std::vector<PhaseConfig> aligned_phases() const {
    std::vector<PhaseConfig> out;
    out.reserve(sc_.vehicles.size());
    for (std::size_t n = 0; n < sc_.vehicles.size(); ++n)
      out.push_back(quantize_phases(
          optimal_phases(re_.direct[n], re_.to_irs[n], re_.irs_to_ap), sc_.config.phase_bits));
    return out;
  }

  std::vector<VehicleContext> contexts(const AllocationDecision& d) const {
    const SystemConfig& c = sc_.config;
    std::vector<VehicleContext> out;
    out.reserve(sc_.vehicles.size());
    for (std::size_t n = 0; n < sc_.vehicles.size(); ++n) {
      VehicleContext v;
      v.task = sc_.vehicles[n].task;
      v.local_cpu = sc_.vehicles[n].local_cpu;
      v.gain = vehicle_gain(sc_, re_, d, scheme_, n);
      v.bandwidth = d.bandwidth[n];
      v.edge_cpu = d.edge_cpu[n];
      v.tx_power = c.tx_power;
      v.noise_density = c.noise_density;
      v.kappa = c.kappa;
      v.energy_budget = c.energy_budget;
      v.max_split = scheme_ == Scheme::vec_irs ? 0.0 : 1.0;
      out.push_back(v);
    }
    return out;
  }

  /// Re-chooses every split for the decision's current rates and resources.
  /// Returns false if some vehicle has no energy-feasible split.
  bool refresh_splits(AllocationDecision& d) const {
    const auto ctx = contexts(d);
    for (std::size_t n = 0; n < ctx.size(); ++n) {
      if (std::isinf(completion_with_bandwidth(ctx[n], ctx[n].bandwidth))) return false;
      d.split[n] = best_split(ctx[n]);
    }
    return true;
  }

  AllocationDecision initial() const {
    const SystemConfig& c = sc_.config;
    const std::size_t n = sc_.vehicles.size();
    AllocationDecision d;
    d.phases = aligned_phases();
    SolveOptions seed_only = opt_;
    seed_only.sca_max_iters = 0;
    d.drone_xy = place_drone_sca(sc_, {c.area_side / 2.0, c.area_side / 2.0}, seed_only).drone_xy;
    d.bandwidth.assign(n, c.bandwidth_total / static_cast<double>(n));
    d.edge_cpu.assign(n, c.edge_cpu_total / static_cast<double>(n));
    d.split.assign(n, 0.0);

    auto ctx = contexts(d);
    bool equal_ok = true;
    for (const auto& v : ctx)
      equal_ok = equal_ok && !std::isinf(completion_with_bandwidth(v, v.bandwidth));
    if (!equal_ok) {
      // Smallest energy-feasible bandwidth per vehicle, slack shared evenly.
      std::vector<double> floor(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (std::isinf(completion_with_bandwidth(ctx[i], c.bandwidth_total)))
          throw InfeasibleError({"energy_budget", i, kInf, c.energy_budget});
        floor[i] = detail::bisect_threshold(
            [&](double b) { return !std::isinf(completion_with_bandwidth(ctx[i], b)); },
            c.bandwidth_total);
      }
      const double used = std::accumulate(floor.begin(), floor.end(), 0.0);
      if (used > c.bandwidth_total)
        throw InfeasibleError({"bandwidth_total", std::nullopt, used, c.bandwidth_total});
      for (std::size_t i = 0; i < n; ++i)
        d.bandwidth[i] = floor[i] + (c.bandwidth_total - used) / static_cast<double>(n);
    }
    if (!refresh_splits(d)) throw InfeasibleError({"energy_budget", std::nullopt, kInf,
                                                   c.energy_budget});
    const Evaluation e = assess_scheme(sc_, re_, d, scheme_);
    if (!e.feasible()) throw InfeasibleError(*e.infeasible);
    return d;
  }

  /// Adapts a decision produced under another scheme to this one.
  std::optional<AllocationDecision> adopt(const AllocationDecision& w) const {
    AllocationDecision d = w;
    d.phases = aligned_phases();
    if (scheme_ == Scheme::vec_irs) std::fill(d.split.begin(), d.split.end(), 0.0);
    if (std::isinf(objective(d))) return std::nullopt;
    return d;
  }

  SolveResult run(AllocationDecision start) {
    SolveResult out;
    AllocationDecision cur = std::move(start);
    double obj = objective(cur);
    out.trace.objective.push_back(obj);
    out.trace.improvements.push_back({0, Block::initial, obj});

    std::size_t iter = 0;
    // The starting point counts as a 100% improvement over nothing, so a
    // tolerance of 1 stops before the first sweep.
    double rel_improvement = 1.0;
    while (iter < opt_.max_outer_iters && rel_improvement > opt_.rel_tol) {
      ++iter;
      const double before = obj;
      auto offer = [&](Block block, AllocationDecision cand) {
        const double v = objective(cand);
        if (v <= obj) {
          if (v < obj) out.trace.improvements.push_back({iter, block, v});
          cur = std::move(cand);
          obj = v;
        }
      };

      {
        AllocationDecision cand = cur;
        cand.phases = aligned_phases();
        offer(Block::phases, std::move(cand));
      }
      if (scheme_ != Scheme::vha_no_irs) {
        if (!placement_ || placement_from_ != cur.drone_xy) {
          placement_from_ = cur.drone_xy;
          placement_ = place_drone_sca(sc_, cur.drone_xy, opt_);
          out.trace.placements.push_back(*placement_);
        }
        AllocationDecision cand = cur;
        cand.drone_xy = placement_->drone_xy;
        if (refresh_splits(cand)) offer(Block::placement, std::move(cand));
      }
      try {
        AllocationDecision cand = cur;
        const auto ctx = contexts(cur);
        cand.bandwidth = opt_.objective == Objective::sum_completion
                             ? allocate_bandwidth_sum(ctx, sc_.config.bandwidth_total)
                             : allocate_bandwidth(ctx, sc_.config.bandwidth_total).bandwidth;
        if (refresh_splits(cand)) offer(Block::bandwidth, std::move(cand));
      } catch (const InfeasibleError&) {
      }
      {
        AllocationDecision cand = cur;
        if (refresh_splits(cand)) offer(Block::split, std::move(cand));
      }
      try {
        AllocationDecision cand = cur;
        cand.edge_cpu = edge_block(cur);
        if (refresh_splits(cand)) offer(Block::edge_cpu, std::move(cand));
      } catch (const InfeasibleError&) {
      }

      out.trace.objective.push_back(obj);
      if (obj > before + kMonotoneSlack)
        throw InternalError("bcd_optimize: objective increased across an outer iteration");
      rel_improvement = before > 0.0 ? (before - obj) / before : 0.0;
    }
    out.trace.outer_iterations = iter;
    out.trace.termination =
        rel_improvement <= opt_.rel_tol ? Termination::converged : Termination::max_iterations;
    out.decision = std::move(cur);
    out.records = evaluate_scheme(sc_, re_, out.decision, scheme_);
    out.objective = aggregate(out.records, opt_.objective);
    return out;
  }

 private:
  std::vector<double> edge_block(const AllocationDecision& d) const {
    const auto ctx = contexts(d);
    if (opt_.objective == Objective::sum_completion)
      return allocate_edge_cpu_sum(ctx, sc_.config.edge_cpu_total);
    std::vector<double> cycles(ctx.size()), fixed(ctx.size());
    for (std::size_t n = 0; n < ctx.size(); ++n) {
      const double share = 1.0 - (scheme_ == Scheme::vec_irs ? 0.0 : d.split[n]);
      const double rate =
          achievable_rate(ctx[n].bandwidth, ctx[n].tx_power, ctx[n].gain, ctx[n].noise_density);
      cycles[n] = share * ctx[n].task.cycles();
      fixed[n] = share > 0.0 ? share * ctx[n].task.data_size / rate : 0.0;
    }
    return allocate_edge_cpu(cycles, fixed, sc_.config.edge_cpu_total).edge_cpu;
  }

  const Scenario& sc_;
  const ChannelRealization& re_;
  Scheme scheme_;
  SolveOptions opt_;
  std::optional<PlacementResult> placement_;
  Vec2 placement_from_;
};

void check_monotone(const SolveTrace& trace) {
  for (std::size_t i = 1; i < trace.objective.size(); ++i)
    if (trace.objective[i] > trace.objective[i - 1] + kMonotoneSlack)
      throw InternalError("bcd_optimize: non-monotone trace");
}

}  // namespace

AllocationDecision initial_decision(const Scenario& scenario,
                                    const ChannelRealization& realization, Scheme scheme,
                                    const SolveOptions& options) {
  return Solver(scenario, realization, scheme, options).initial();
}

SolveResult bcd_optimize(const Scenario& scenario, const ChannelRealization& realization,
                         Scheme scheme, const SolveOptions& options,
                         std::span<const AllocationDecision> warm_starts) {
  validate_options(options);
  Solver solver(scenario, realization, scheme, options);
  SolveResult best = solver.run(solver.initial());
  check_monotone(best.trace);
  for (const AllocationDecision& w : warm_starts) {
    auto start = solver.adopt(w);
    if (!start) continue;
    SolveResult r = solver.run(std::move(*start));
    check_monotone(r.trace);
    if (r.objective < best.objective) best = std::move(r);
  }
  return best;
}

SolveResult solve_scheme(const Scenario& scenario, const ChannelRealization& realization,
                         Scheme scheme, const SolveOptions& options) {
  if (scheme != Scheme::vha_irs) return bcd_optimize(scenario, realization, scheme, options);
  std::vector<AllocationDecision> warm;
  for (Scheme b : {Scheme::vec_irs, Scheme::vha_no_irs}) {
    try {
      warm.push_back(bcd_optimize(scenario, realization, b, options).decision);
    } catch (const InfeasibleError&) {
    }
  }
  return bcd_optimize(scenario, realization, scheme, options, warm);
}

}  // namespace vecirs
