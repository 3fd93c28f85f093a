#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vecirs {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

/// Distance between a ground point and a point hovering `height` above `air`.
double slant_distance(Vec2 ground, Vec2 air, double height);

/// All constants of one experiment. Defaults reproduce the baseline setup:
/// N=10 vehicles, K=30 elements, H=80 m, B=20 MHz, N0=-173 dBm/Hz,
/// 1 Mcycles/s local and 25 Gcycles/s edge capacity.
struct SystemConfig {
  std::size_t n_vehicles = 10;
  std::size_t n_irs_elements = 30;
  double drone_height = 80.0;         // m
  double bandwidth_total = 20e6;      // Hz
  double noise_density = 5.011872336272725e-21;  // W/Hz, -173 dBm/Hz
  double edge_cpu_total = 25e9;       // cycles/s
  double local_cpu_max = 1e6;         // cycles/s
  double area_side = 500.0;           // m
  Vec2 ap_position{250.0, 250.0};     // m
  double tx_power = 0.1;              // W
  double energy_budget = 1.0;         // J
  double kappa = 1e-28;               // J s^2 / cycles^3
  double pathloss_exp_direct = 3.5;
  double pathloss_exp_los = 2.2;
  double ref_gain_1m = 1e-3;
  double rician_k_db = 10.0;
  std::optional<int> phase_bits;      // nullopt: continuous phases
  std::uint64_t seed = 1;

  // Task draw ranges (closed).
  double data_size_min = 10e6;        // bits
  double data_size_max = 100e6;
  double cycle_density_min = 2e3;     // cycles/bit
  double cycle_density_max = 10e3;
};

struct TaskSpec {
  double data_size = 0.0;      // bits
  double cycle_density = 0.0;  // cycles/bit

  double cycles() const { return data_size * cycle_density; }
};

struct Vehicle {
  std::size_t id = 0;
  Vec2 position;
  double local_cpu = 0.0;  // cycles/s
  TaskSpec task;
};

struct Scenario {
  SystemConfig config;
  std::vector<Vehicle> vehicles;
  Vec2 ap_position;
};

/// Returns `raw` unchanged or throws ConfigError naming the first violated
/// invariant.
SystemConfig validate_config(SystemConfig raw);

/// Draws vehicle positions, tasks and local CPU speeds; a pure function of
/// `config` (including its seed). Only the fields consumed by generation
/// influence the result.
Scenario generate_scenario(const SystemConfig& config);

/// Builds a scenario from explicit vehicles and checks it against the config.
Scenario make_scenario(const SystemConfig& config, std::vector<Vehicle> vehicles);

/// JSON (de)serialization. Unknown keys are rejected; missing keys keep
/// their defaults, so "{}" yields the baseline configuration.
SystemConfig config_from_json(std::string_view text);
SystemConfig load_config(const std::string& path);
std::string config_to_json(const SystemConfig& config);

}  // namespace vecirs
