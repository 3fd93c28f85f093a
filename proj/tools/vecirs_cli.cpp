// Command-line front end. Talks to the simulator only through the C API.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vecirs/vecirs.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

int report(vecirs_status status) {
  std::fprintf(stderr, "error: %s\n", vecirs_last_error());
  switch (status) {
    case VECIRS_OK: return kExitOk;
    case VECIRS_INFEASIBLE: return kExitInfeasible;
    case VECIRS_INTERNAL: return kExitInternal;
    default: return kExitConfig;
  }
}

// Ownership wrappers for the handles.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};
using Config = Handle<vecirs_config, vecirs_config_free>;
using ScenarioH = Handle<vecirs_scenario, vecirs_scenario_free>;
using Solution = Handle<vecirs_solution, vecirs_solution_free>;
using Sweep = Handle<vecirs_sweep, vecirs_sweep_free>;

/// "continuous" -> -1, otherwise a bit count >= 1.
int parse_bits(const std::string& s) {
  if (s == "continuous") return -1;
  std::size_t used = 0;
  int bits = 0;
  try {
    bits = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || bits < 1)
    throw CLI::ValidationError("--quantize-bits", "expected a positive integer or 'continuous'");
  return bits;
}

std::vector<vecirs_scheme> parse_schemes(const std::string& labels) {
  std::vector<vecirs_scheme> out;
  std::stringstream in(labels);
  for (std::string item; std::getline(in, item, ',');) {
    vecirs_scheme s;
    if (vecirs_parse_scheme(item.c_str(), &s) != VECIRS_OK)
      throw CLI::ValidationError("--scheme", vecirs_last_error());
    out.push_back(s);
  }
  if (out.empty()) throw CLI::ValidationError("--scheme", "no scheme given");
  return out;
}

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seeds;
  std::string schemes;
  std::string bits;
  unsigned threads = 1;
};

int cmd_run(const Common& c) {
  Config cfg;
  if (auto st = vecirs_config_load(c.config.c_str(), &cfg.p); st != VECIRS_OK) return report(st);
  if (c.seed) vecirs_config_set_seed(cfg.p, *c.seed);
  if (!c.bits.empty())
    if (auto st = vecirs_config_set_phase_bits(cfg.p, parse_bits(c.bits)); st != VECIRS_OK)
      return report(st);
  ScenarioH sc;
  if (auto st = vecirs_scenario_generate(cfg.p, &sc.p); st != VECIRS_OK) return report(st);

  const auto schemes = parse_schemes(c.schemes.empty() ? "vha_irs" : c.schemes);
  int exit_code = kExitOk;
  for (vecirs_scheme scheme : schemes) {
    Solution sol;
    if (auto st = vecirs_solve(sc.p, scheme, &sol.p); st != VECIRS_OK) {
      std::fprintf(stderr, "%s: ", vecirs_scheme_label(scheme));
      exit_code = report(st);
      continue;
    }
    double obj = 0.0, x = 0.0, y = 0.0;
    std::size_t iters = 0, n = 0;
    vecirs_solution_objective(sol.p, &obj);
    vecirs_solution_iterations(sol.p, &iters);
    vecirs_solution_drone(sol.p, &x, &y);
    vecirs_solution_size(sol.p, &n);
    std::printf("scheme %s objective_s %.9g outer_iterations %zu drone %.3f %.3f\n",
                vecirs_scheme_label(scheme), obj, iters, x, y);
    std::printf("%8s %10s %10s %10s %8s %12s %12s %12s %12s %10s\n", "vehicle", "s_bits",
                "c_cyc/bit", "f_local", "split", "bandwidth", "edge_cpu", "rate_bps", "t_s",
                "energy_j");
    for (std::size_t i = 0; i < n; ++i) {
      vecirs_record r;
      vecirs_solution_record(sol.p, i, &r);
      std::printf("%8zu %10.4g %10.4g %10.4g %8.5f %12.6g %12.6g %12.6g %12.6g %10.6g\n",
                  r.vehicle, r.data_size_bits, r.cycle_density, r.local_cpu, r.split,
                  r.bandwidth_hz, r.edge_cpu, r.rate_bps, r.t_completion_s, r.energy_j);
    }
  }
  return exit_code;
}

int run_sweep(Sweep& sw, const Common& c, const std::string& default_out) {
  if (c.seeds)
    if (auto st = vecirs_sweep_set_seeds(sw.p, *c.seeds); st != VECIRS_OK) return report(st);
  if (c.seed) vecirs_sweep_set_base_seed(sw.p, *c.seed);
  if (!c.schemes.empty())
    if (auto st = vecirs_sweep_set_schemes(sw.p, c.schemes.c_str()); st != VECIRS_OK)
      return report(st);
  if (!c.bits.empty())
    if (auto st = vecirs_sweep_set_phase_bits(sw.p, parse_bits(c.bits)); st != VECIRS_OK)
      return report(st);
  const std::string out = c.out.empty() ? default_out : c.out;
  if (auto st = vecirs_sweep_run_to_csv(sw.p, out.c_str(), c.threads); st != VECIRS_OK)
    return report(st);
  std::printf("wrote %s\n", out.c_str());
  return kExitOk;
}

int cmd_sweep(const std::string& spec_path, const Common& c) {
  Sweep sw;
  if (auto st = vecirs_sweep_load(spec_path.c_str(), &sw.p); st != VECIRS_OK) return report(st);
  return run_sweep(sw, c, "sweep.csv");
}

int cmd_fig(const std::string& name, const Common& c) {
  Sweep sw;
  if (auto st = vecirs_sweep_preset(name.c_str(), c.seeds.value_or(20), &sw.p); st != VECIRS_OK)
    return report(st);
  return run_sweep(sw, c, name + ".csv");
}

int cmd_oracle(const Common& c, std::size_t instances) {
  Config cfg;
  if (c.config.empty()) {
    if (auto st = vecirs_config_default(&cfg.p); st != VECIRS_OK) return report(st);
    if (auto st = vecirs_config_set_size(cfg.p, 2, 4); st != VECIRS_OK) return report(st);
  } else if (auto st = vecirs_config_load(c.config.c_str(), &cfg.p); st != VECIRS_OK) {
    return report(st);
  }
  if (!c.bits.empty())
    if (auto st = vecirs_config_set_phase_bits(cfg.p, parse_bits(c.bits)); st != VECIRS_OK)
      return report(st);
  const std::uint64_t base = c.seed.value_or(1);
  const auto schemes = parse_schemes(c.schemes.empty() ? "vha_irs" : c.schemes);
  double worst = 0.0;
  for (vecirs_scheme scheme : schemes) {
    for (std::size_t i = 0; i < instances; ++i) {
      vecirs_config_set_seed(cfg.p, base + i);
      vecirs_oracle_report r;
      if (auto st = vecirs_oracle_check(cfg.p, scheme, &r); st != VECIRS_OK) return report(st);
      worst = std::max(worst, r.ratio);
      std::printf("scheme %s seed %llu bcd_s %.9g oracle_s %.9g gap %+.4f%%\n",
                  vecirs_scheme_label(scheme), static_cast<unsigned long long>(base + i),
                  r.bcd_objective, r.oracle_objective, 100.0 * (r.ratio - 1.0));
    }
  }
  std::printf("worst ratio %.6f\n", worst);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drone-IRS assisted vehicular edge computing simulator"};
  app.require_subcommand(1);

  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "System config JSON (defaults when omitted)");
    sub->add_option("--out", c.out, "Output CSV path");
    sub->add_option("--seed", c.seed, "Base seed");
    sub->add_option("--seeds", c.seeds, "Number of seeds per sweep value")
        ->check(CLI::PositiveNumber);
    sub->add_option("--scheme", c.schemes, "Comma-separated schemes: vha_irs,vec_irs,vha_no_irs");
    sub->add_option("--quantize-bits", c.bits, "Phase resolution: <n> or continuous");
    sub->add_option("--threads", c.threads, "Worker threads for sweeps (0 = all cores)");
  };

  auto* run = app.add_subcommand("run", "Solve one seeded instance and print the decision");
  add_common(run);

  std::string spec_path;
  auto* sweep = app.add_subcommand("sweep", "Run a sweep spec and write CSV");
  sweep->add_option("spec", spec_path, "Sweep spec JSON")->required();
  add_common(sweep);

  std::size_t instances = 1;
  auto* oracle = app.add_subcommand("oracle-check", "Compare the solver with exhaustive search");
  add_common(oracle);
  oracle->add_option("--instances", instances, "Consecutive seeds to check")
      ->check(CLI::PositiveNumber);

  std::string fig_name;
  auto* fig = app.add_subcommand("fig", "Run a canned figure sweep");
  fig->add_option("name", fig_name, "fig3a | fig3b | fig3c | fig4")
      ->required()
      ->check(CLI::IsMember({"fig3a", "fig3b", "fig3c", "fig4"}));
  add_common(fig);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(c);
    if (sweep->parsed()) return cmd_sweep(spec_path, c);
    if (oracle->parsed()) return cmd_oracle(c, instances);
    if (fig->parsed()) return cmd_fig(fig_name, c);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
