#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "oracles.hpp"
#include "vecirs/error.hpp"
#include "vecirs/optimizer.hpp"

using namespace vecirs;

namespace {

VehicleContext context(double data_size, double cycle_density, double gain) {
  VehicleContext v;
  v.task = {data_size, cycle_density};
  v.local_cpu = 1e9;
  v.gain = gain;
  v.bandwidth = 10e6;
  v.edge_cpu = 12.5e9;
  v.tx_power = 0.1;
  v.noise_density = 5.011872336272725e-21;
  v.kappa = 1e-30;
  v.energy_budget = 1.0;
  return v;
}

SystemConfig small_config(std::size_t n, std::uint64_t seed) {
  SystemConfig c;
  c.n_vehicles = n;
  c.n_irs_elements = 4;
  c.local_cpu_max = 1e9;
  c.kappa = 1e-30;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("equalizing split") {
  CHECK(optimal_split(10.0, 0.0, 0.0) == 0.0);
  CHECK(optimal_split(10.0, 0.0, 0.2) == 0.2);
  const double phi = optimal_split(10.0, 30.0, 0.0);
  CHECK(phi == doctest::Approx(0.75));
  CHECK(std::max(phi * 10.0, (1.0 - phi) * 30.0) == doctest::Approx(7.5));
  CHECK(optimal_split(10.0, 30.0, 0.9) == doctest::Approx(0.9));
  CHECK(optimal_split(10.0, 30.0, 0.0, 0.5) == 0.5);
  CHECK_THROWS_AS(optimal_split(10.0, 30.0, 1.2), InfeasibleError);
  CHECK_THROWS_AS(optimal_split(10.0, 30.0, 0.6, 0.5), InfeasibleError);

  oracle::Gen gen(21);
  for (int i = 0; i < 500; ++i) {
    const double a = gen.log_range(1e-3, 1e3), b = gen.log_range(1e-3, 1e3);
    const double lo = gen.unit() < 0.5 ? 0.0 : gen.unit();
    CHECK(optimal_split(a, b, lo) == doctest::Approx(oracle::equalizer(a, b, lo)));
  }
}

TEST_CASE("energy-feasible split range") {
  const TaskSpec t{1e8, 2e3};
  CHECK(compute_min_split_for_energy(t, 1e6, 0.1, 1e7, 1e-28, 1e12) == 0.0);
  // 1e-8 J per bit on the uplink: 0.1 W at 1e7 bits/s; compute is free.
  CHECK(compute_min_split_for_energy(t, 1e6, 0.1, 1e7, 1e-40, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(compute_min_split_for_energy(t, 1e9, 0.1, 1e7, 1e-28, 0.5), InfeasibleError);

  // Upper end: compute is the expensive branch.
  const SplitBounds b = energy_split_bounds(t, 1e9, 0.1, 1e12, 1e-30, 0.1);
  CHECK(b.lo == 0.0);
  CHECK(b.hi == doctest::Approx(0.1 / 0.2).epsilon(1e-3));
}

TEST_CASE("edge CPU min-max allocation") {
  const std::vector<double> one{2e10}, zero1{0.0};
  EdgeCpuAllocation a = allocate_edge_cpu(one, zero1, 25e9);
  CHECK(a.edge_cpu[0] == doctest::Approx(25e9));
  CHECK(a.deadline == doctest::Approx(0.8));

  const std::vector<double> two{2e10, 1e10}, zero2{0.0, 0.0};
  a = allocate_edge_cpu(two, zero2, 25e9);
  CHECK(a.deadline == doctest::Approx(1.2));
  CHECK(a.edge_cpu[0] == doctest::Approx(16.6666667e9).epsilon(1e-6));
  CHECK(a.edge_cpu[1] == doctest::Approx(8.3333333e9).epsilon(1e-6));
  CHECK(a.deadline == doctest::Approx(oracle::edge_deadline(two, 25e9)));

  const std::vector<double> same{5e9, 5e9, 5e9}, zero3{0.0, 0.0, 0.0};
  a = allocate_edge_cpu(same, zero3, 25e9);
  CHECK(a.edge_cpu[0] == doctest::Approx(a.edge_cpu[1]));
  CHECK(a.edge_cpu[1] == doctest::Approx(a.edge_cpu[2]));

  a = allocate_edge_cpu(zero2, zero2, 25e9);
  CHECK(a.edge_cpu[0] == 0.0);
  CHECK(a.edge_cpu[1] == 0.0);

  // With fixed upload times every finishing time matches the deadline.
  const std::vector<double> fixed{0.5, 0.1};
  a = allocate_edge_cpu(two, fixed, 25e9);
  CHECK(fixed[0] + two[0] / a.edge_cpu[0] == doctest::Approx(a.deadline).epsilon(1e-9));
  CHECK(fixed[1] + two[1] / a.edge_cpu[1] == doctest::Approx(a.deadline).epsilon(1e-9));
  CHECK(a.edge_cpu[0] + a.edge_cpu[1] <= 25e9 * (1.0 + 1e-12));
}

TEST_CASE("bandwidth min-max allocation") {
  const double total = 20e6;
  std::vector<VehicleContext> one{context(5e7, 4e3, 1e-13)};
  BandwidthAllocation a = allocate_bandwidth(one, total);
  CHECK(a.bandwidth[0] == doctest::Approx(total));

  std::vector<VehicleContext> pair{context(5e7, 4e3, 1e-13), context(5e7, 4e3, 1e-13)};
  a = allocate_bandwidth(pair, total);
  CHECK(a.bandwidth[0] == doctest::Approx(total / 2.0));
  CHECK(a.bandwidth[1] == doctest::Approx(total / 2.0));

  // Asymmetric pair against a 1e-3 B grid.
  std::vector<VehicleContext> asym{context(8e7, 6e3, 3e-14), context(2e7, 3e3, 2e-13)};
  for (auto& v : asym) {
    v.split = 0.2;
    v.energy_budget = 1e3;
  }
  a = allocate_bandwidth(asym, total);
  double grid_best = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 1000; ++k) {
    const double b = total * k / 1000.0;
    grid_best = std::min(grid_best, std::max(completion_with_bandwidth(asym[0], b),
                                             completion_with_bandwidth(asym[1], total - b)));
  }
  const double achieved = std::max(completion_with_bandwidth(asym[0], a.bandwidth[0]),
                                   completion_with_bandwidth(asym[1], a.bandwidth[1]));
  CHECK(achieved <= grid_best * 1.001);
  CHECK(a.bandwidth[0] + a.bandwidth[1] <= total * (1.0 + 1e-12));

  const BandwidthAllocation eq = allocate_bandwidth(asym, total, BandwidthMode::equal_split);
  CHECK(eq.bandwidth[0] == total / 2.0);
  CHECK(a.deadline <= eq.deadline);
}

TEST_CASE("sum-objective allocators beat equal shares") {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<VehicleContext> vs;
    for (int i = 0; i < 4; ++i)
      vs.push_back(context(gen.range(1e7, 1e8), gen.range(2e3, 1e4), gen.log_range(1e-15, 1e-12)));
    for (auto& v : vs) {
      v.bandwidth = 5e6;
      v.edge_cpu = 25e9 / 4.0;
    }
    double equal = 0.0, opt = 0.0;
    const auto bw = allocate_bandwidth_sum(vs, 20e6);
    double used = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      equal += completion_with_bandwidth(vs[i], 5e6);
      opt += completion_with_bandwidth(vs[i], bw[i]);
      used += bw[i];
    }
    CHECK(used <= 20e6 * (1.0 + 1e-9));
    CHECK(opt <= equal * (1.0 + 1e-12));

    equal = opt = used = 0.0;
    const auto cpu = allocate_edge_cpu_sum(vs, 25e9);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      equal += completion_with_edge_cpu(vs[i], 25e9 / 4.0);
      opt += completion_with_edge_cpu(vs[i], cpu[i]);
      used += cpu[i];
    }
    CHECK(used <= 25e9 * (1.0 + 1e-9));
    CHECK(opt <= equal * (1.0 + 1e-12));
  }
}

TEST_CASE("drone placement") {
  SystemConfig c = small_config(1, 1);
  const SolveOptions opt;

  Scenario sc = make_scenario(c, {Vehicle{0, c.ap_position, 1e9, {1e7, 2e3}}});
  PlacementResult p = place_drone_sca(sc, {100.0, 400.0}, opt);
  CHECK(distance(p.drone_xy, c.ap_position) <= opt.sca_step_tol);

  c.n_vehicles = 2;
  sc = make_scenario(c, {Vehicle{0, {150.0, 250.0}, 1e9, {1e7, 2e3}},
                         Vehicle{1, {350.0, 250.0}, 1e9, {1e7, 2e3}}});
  p = place_drone_sca(sc, {60.0, 60.0}, opt);
  CHECK(std::abs(p.drone_xy.x - 250.0) <= opt.sca_step_tol);
  for (std::size_t i = 1; i < p.trace.size(); ++i) CHECK(p.trace[i] >= p.trace[i - 1]);
}

TEST_CASE("solver contract") {
  const Scenario sc = generate_scenario(small_config(3, 4));
  const ChannelRealization re = sample_realization(sc);

  SolveOptions once;
  once.rel_tol = 1.0;
  const SolveResult r0 = bcd_optimize(sc, re, Scheme::vha_irs, once);
  const AllocationDecision init = initial_decision(sc, re, Scheme::vha_irs, once);
  CHECK(r0.trace.outer_iterations == 0);
  CHECK(r0.decision.split == init.split);
  CHECK(r0.decision.bandwidth == init.bandwidth);
  CHECK(r0.decision.drone_xy == init.drone_xy);

  const SolveResult full = bcd_optimize(sc, re, Scheme::vec_irs);
  const auto recs = evaluate_scheme(sc, re, full.decision, Scheme::vec_irs);
  CHECK(aggregate(recs, Objective::sum_completion) == full.objective);
  for (const auto& r : full.records) CHECK(r.split == 0.0);

  const SolveResult a = bcd_optimize(sc, re, Scheme::vha_irs);
  const SolveResult b = bcd_optimize(sc, re, Scheme::vha_irs);
  CHECK(a.objective == b.objective);
  CHECK(a.decision.split == b.decision.split);
  CHECK(a.objective <= r0.objective);
  for (std::size_t i = 1; i < a.trace.objective.size(); ++i)
    CHECK(a.trace.objective[i] <= a.trace.objective[i - 1] + 1e-9);

  SolveOptions bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(bcd_optimize(sc, re, Scheme::vha_irs, bad), std::invalid_argument);
  bad = {};
  bad.grid_resolution = 0;
  CHECK_THROWS_AS(validate_options(bad), std::invalid_argument);
}

TEST_CASE("interior splits meet the equalizer condition") {
  SystemConfig c = small_config(4, 12);
  c.energy_budget = 1e3;
  const Scenario sc = generate_scenario(c);
  const ChannelRealization re = sample_realization(sc);
  const SolveResult r = bcd_optimize(sc, re, Scheme::vha_irs);
  for (const auto& rec : r.records) {
    if (rec.split > 1e-6 && rec.split < 1.0 - 1e-6)
      CHECK(rec.t_local == doctest::Approx(rec.t_offload).epsilon(1e-9));
  }
}

TEST_CASE("proposed scheme is no worse than either benchmark") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario sc = generate_scenario(small_config(4, seed));
    const ChannelRealization re = sample_realization(sc);
    const double vha = solve_scheme(sc, re, Scheme::vha_irs).objective;
    CHECK(vha <= solve_scheme(sc, re, Scheme::vha_no_irs).objective);
    try {
      CHECK(vha <= solve_scheme(sc, re, Scheme::vec_irs).objective);
    } catch (const InfeasibleError&) {
    }
  }
}

TEST_CASE("energy infeasibility names the vehicle") {
  SystemConfig c = small_config(2, 3);
  c.energy_budget = 1e-9;
  const Scenario sc = generate_scenario(c);
  const ChannelRealization re = sample_realization(sc);
  try {
    bcd_optimize(sc, re, Scheme::vha_irs);
    FAIL("expected an infeasible instance");
  } catch (const InfeasibleError& e) {
    CHECK(e.report().constraint == "energy_budget");
    CHECK(e.report().vehicle.has_value());
  }
}

TEST_CASE("exhaustive oracle") {
  SystemConfig c = small_config(1, 2);
  c.energy_budget = 1e3;
  const Scenario one = make_scenario(c, {Vehicle{0, {120.0, 300.0}, 2e8, {4e7, 5e3}}});
  const ChannelRealization re1 = sample_realization(one);
  const OracleResult o = brute_force_oracle(one, re1, Scheme::vha_irs, Objective::sum_completion);
  const auto rec = evaluate_scheme(one, re1, o.decision, Scheme::vha_irs);
  const double closed =
      optimal_split(local_time(1.0, one.vehicles[0].task, 2e8),
                    offload_time(0.0, one.vehicles[0].task, rec[0].rate, o.decision.edge_cpu[0]),
                    0.0);
  CHECK(std::abs(o.decision.split[0] - closed) <= 1e-3);
  CHECK(bcd_optimize(one, re1, Scheme::vha_irs).objective <= o.objective * (1.0 + 1e-9));

  // Two identical vehicles on the same spot with identical fading.
  c.n_vehicles = 2;
  const Vehicle v{0, {200.0, 200.0}, 5e8, {5e7, 4e3}};
  Vehicle w = v;
  w.id = 1;
  const Scenario two = make_scenario(c, {v, w});
  ChannelRealization re2 = sample_realization(two);
  re2.direct[1] = re2.direct[0];
  re2.to_irs[1] = re2.to_irs[0];
  OracleGrid coarse;
  coarse.drone_points = 20;
  const OracleResult s = brute_force_oracle(two, re2, Scheme::vha_irs, Objective::sum_completion,
                                            coarse);
  CHECK(std::abs(s.decision.bandwidth[0] - s.decision.bandwidth[1]) <=
        c.bandwidth_total * 0.02 + 1.0);
  CHECK(std::abs(s.decision.edge_cpu[0] - s.decision.edge_cpu[1]) <=
        c.edge_cpu_total * 0.02 + 1.0);

  // Every feasible heuristic decision is at least as slow as the grid.
  const AllocationDecision init = initial_decision(two, re2, Scheme::vha_irs, {});
  const double heuristic =
      aggregate(evaluate_scheme(two, re2, init, Scheme::vha_irs), Objective::sum_completion);
  CHECK(s.objective <= heuristic * 1.02);

  const Scenario big = generate_scenario(small_config(4, 1));
  CHECK_THROWS_AS(brute_force_oracle(big, sample_realization(big), Scheme::vha_irs,
                                     Objective::sum_completion),
                  TooLargeError);
}
