#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vecirs/offload.hpp"
#include "vecirs/optimizer.hpp"
#include "vecirs/scenario.hpp"

namespace vecirs {

enum class SweptParameter { local_cpu, cycle_density, data_size };

std::string_view to_string(SweptParameter p);
std::optional<SweptParameter> parse_swept_parameter(std::string_view label);

struct SweepSpec {
  std::string sweep_id;
  SweptParameter parameter = SweptParameter::data_size;
  std::vector<double> values;  // strictly increasing
  std::vector<Scheme> schemes{Scheme::vha_irs, Scheme::vec_irs, Scheme::vha_no_irs};
  std::size_t n_seeds = 1;
  SystemConfig base_config;
  SolveOptions options;
};

/// Throws ConfigError on the first violated invariant.
void validate_sweep_spec(const SweepSpec& spec);

SweepSpec sweep_spec_from_json(std::string_view text);
SweepSpec load_sweep_spec(const std::string& path);
std::string sweep_spec_to_json(const SweepSpec& spec);

/// Canned figure sweeps: fig3a, fig3b, fig3c, fig4.
SweepSpec preset_sweep(std::string_view name, std::size_t n_seeds);
std::vector<std::string> preset_names();

/// One CSV row. `outer_iterations` is -1 for a point the solver declared
/// infeasible; its solver-derived fields are then zero.
struct SweepRecord {
  std::string sweep_id;
  Scheme scheme = Scheme::vha_irs;
  std::size_t seed = 0;  // seed index within the sweep
  double sweep_value = 0.0;
  std::size_t vehicle_id = 0;
  double data_size_bits = 0.0;
  double cycle_density = 0.0;
  double local_cpu = 0.0;
  double split = 0.0;
  double rate_bps = 0.0;
  double t_local_s = 0.0;
  double t_offload_s = 0.0;
  double t_completion_s = 0.0;
  double energy_j = 0.0;
  double objective_s = 0.0;
  long outer_iterations = 0;

  bool feasible() const { return outer_iterations >= 0; }
};

/// Seed of sweep point (value, seed index). It does not depend on the value
/// index, so every value of a sweep sees the same scenarios and fading.
std::uint64_t point_seed(std::uint64_t base_seed, std::size_t seed_index);

/// Scenario for one sweep point: drawn from the point seed, then every
/// vehicle's swept attribute pinned to `value`.
Scenario sweep_scenario(const SweepSpec& spec, double value, std::size_t seed_index);

/// Rows in canonical (value, scheme, seed, vehicle) order, schemes in spec
/// order. The result does not depend on `threads`.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, unsigned threads = 1);

extern const char* const kCsvHeader;

std::string format_number(double v);
std::string to_csv(const std::vector<SweepRecord>& records);

/// Writes through a temporary file and renames, so a failed run leaves no
/// partial output behind.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace vecirs
