#include "vecirs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vecirs/error.hpp"
#include "vecirs/random.hpp"

namespace vecirs {

using nlohmann::json;

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double slant_distance(Vec2 ground, Vec2 air, double height) {
  const double dx = ground.x - air.x;
  const double dy = ground.y - air.y;
  return std::sqrt(dx * dx + dy * dy + height * height);
}

namespace {

std::string fmt_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

[[noreturn]] void fail(const std::string& field, const std::string& rule, double value) {
  throw ConfigError(field, field + " must be " + rule + " (got " + fmt_value(value) + ")");
}

void require_positive(const std::string& field, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(field, "> 0", v);
}

void require_finite(const std::string& field, double v) {
  if (!std::isfinite(v)) fail(field, "finite", v);
}

}  // namespace

SystemConfig validate_config(SystemConfig raw) {
  if (raw.n_vehicles < 1) fail("n_vehicles", "≥ 1", static_cast<double>(raw.n_vehicles));
  if (raw.n_irs_elements < 1)
    fail("n_irs_elements", "≥ 1", static_cast<double>(raw.n_irs_elements));
  require_positive("drone_height", raw.drone_height);
  require_positive("bandwidth_total", raw.bandwidth_total);
  require_positive("noise_density", raw.noise_density);
  require_positive("edge_cpu_total", raw.edge_cpu_total);
  require_positive("local_cpu_max", raw.local_cpu_max);
  require_positive("area_side", raw.area_side);
  require_finite("ap_position.x", raw.ap_position.x);
  require_finite("ap_position.y", raw.ap_position.y);
  if (raw.ap_position.x < 0.0 || raw.ap_position.x > raw.area_side)
    fail("ap_position.x", "within [0, area_side]", raw.ap_position.x);
  if (raw.ap_position.y < 0.0 || raw.ap_position.y > raw.area_side)
    fail("ap_position.y", "within [0, area_side]", raw.ap_position.y);
  require_positive("tx_power", raw.tx_power);
  require_positive("energy_budget", raw.energy_budget);
  require_positive("kappa", raw.kappa);
  require_finite("pathloss_exp_los", raw.pathloss_exp_los);
  require_finite("pathloss_exp_direct", raw.pathloss_exp_direct);
  if (raw.pathloss_exp_los < 2.0) fail("pathloss_exp_los", "≥ 2", raw.pathloss_exp_los);
  if (raw.pathloss_exp_direct < raw.pathloss_exp_los)
    fail("pathloss_exp_direct", "≥ pathloss_exp_los (nLOS must dominate)",
         raw.pathloss_exp_direct);
  require_positive("ref_gain_1m", raw.ref_gain_1m);
  require_finite("rician_k_db", raw.rician_k_db);
  if (raw.phase_bits && *raw.phase_bits < 1)
    fail("phase_bits", "≥ 1 or \"continuous\"", *raw.phase_bits);
  require_positive("data_size_min", raw.data_size_min);
  require_positive("data_size_max", raw.data_size_max);
  if (raw.data_size_max < raw.data_size_min)
    fail("data_size_max", "≥ data_size_min", raw.data_size_max);
  require_positive("cycle_density_min", raw.cycle_density_min);
  require_positive("cycle_density_max", raw.cycle_density_max);
  if (raw.cycle_density_max < raw.cycle_density_min)
    fail("cycle_density_max", "≥ cycle_density_min", raw.cycle_density_max);
  return raw;
}

Scenario generate_scenario(const SystemConfig& config) {
  const SystemConfig cfg = validate_config(config);
  Rng rng(derive_seed(cfg.seed, 1));
  std::vector<Vehicle> vehicles;
  vehicles.reserve(cfg.n_vehicles);
  // Fixed draw order per vehicle: x, y, data size, cycle density, local cpu.
  for (std::size_t n = 0; n < cfg.n_vehicles; ++n) {
    Vehicle v;
    v.id = n;
    v.position.x = rng.uniform(0.0, cfg.area_side);
    v.position.y = rng.uniform(0.0, cfg.area_side);
    v.task.data_size = rng.uniform(cfg.data_size_min, cfg.data_size_max);
    v.task.cycle_density = rng.uniform(cfg.cycle_density_min, cfg.cycle_density_max);
    v.local_cpu = cfg.local_cpu_max * rng.uniform_open_closed();
    vehicles.push_back(v);
  }
  return Scenario{cfg, std::move(vehicles), cfg.ap_position};
}

Scenario make_scenario(const SystemConfig& config, std::vector<Vehicle> vehicles) {
  SystemConfig cfg = config;
  cfg.n_vehicles = vehicles.size();
  cfg = validate_config(cfg);
  for (std::size_t n = 0; n < vehicles.size(); ++n) {
    const Vehicle& v = vehicles[n];
    if (v.id != n) throw ConfigError("vehicles", "vehicle ids must be 0..N-1 in order");
    if (!(v.local_cpu > 0.0)) fail("vehicles.local_cpu", "> 0", v.local_cpu);
    if (!(v.task.data_size > 0.0)) fail("vehicles.data_size", "> 0", v.task.data_size);
    if (!(v.task.cycle_density > 0.0))
      fail("vehicles.cycle_density", "> 0", v.task.cycle_density);
    if (v.position.x < 0.0 || v.position.x > cfg.area_side || v.position.y < 0.0 ||
        v.position.y > cfg.area_side)
      throw ConfigError("vehicles.position", "vehicle position outside the area");
  }
  return Scenario{cfg, std::move(vehicles), cfg.ap_position};
}

namespace {

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, key + " has the wrong type");
  }
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ConfigError(key, key + " must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < 0) throw ConfigError(key, key + " must be ≥ 1 (got " + std::to_string(v) + ")");
  return static_cast<std::size_t>(v);
}

}  // namespace

SystemConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");

  SystemConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "n_vehicles") c.n_vehicles = get_count(value, key);
    else if (key == "n_irs_elements") c.n_irs_elements = get_count(value, key);
    else if (key == "drone_height") c.drone_height = get_as<double>(value, key);
    else if (key == "bandwidth_total") c.bandwidth_total = get_as<double>(value, key);
    else if (key == "noise_density") c.noise_density = get_as<double>(value, key);
    else if (key == "edge_cpu_total") c.edge_cpu_total = get_as<double>(value, key);
    else if (key == "local_cpu_max") c.local_cpu_max = get_as<double>(value, key);
    else if (key == "area_side") c.area_side = get_as<double>(value, key);
    else if (key == "ap_position") {
      const auto xy = get_as<std::vector<double>>(value, key);
      if (xy.size() != 2) throw ConfigError(key, "ap_position must be [x, y]");
      c.ap_position = {xy[0], xy[1]};
    }
    else if (key == "tx_power") c.tx_power = get_as<double>(value, key);
    else if (key == "energy_budget") c.energy_budget = get_as<double>(value, key);
    else if (key == "kappa") c.kappa = get_as<double>(value, key);
    else if (key == "pathloss_exp_direct") c.pathloss_exp_direct = get_as<double>(value, key);
    else if (key == "pathloss_exp_los") c.pathloss_exp_los = get_as<double>(value, key);
    else if (key == "ref_gain_1m") c.ref_gain_1m = get_as<double>(value, key);
    else if (key == "rician_k_db") c.rician_k_db = get_as<double>(value, key);
    else if (key == "phase_bits") {
      if (value.is_string() && value.get<std::string>() == "continuous") c.phase_bits.reset();
      else if (value.is_number_integer()) c.phase_bits = value.get<int>();
      else throw ConfigError(key, "phase_bits must be an integer or \"continuous\"");
    }
    else if (key == "seed") {
      if (!value.is_number_unsigned())
        throw ConfigError(key, "seed must be a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    }
    else if (key == "data_size_min") c.data_size_min = get_as<double>(value, key);
    else if (key == "data_size_max") c.data_size_max = get_as<double>(value, key);
    else if (key == "cycle_density_min") c.cycle_density_min = get_as<double>(value, key);
    else if (key == "cycle_density_max") c.cycle_density_max = get_as<double>(value, key);
    else throw ConfigError(key, "unknown config key \"" + key + "\"");
  }
  return validate_config(c);
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string config_to_json(const SystemConfig& c) {
  json j = {
      {"n_vehicles", c.n_vehicles},
      {"n_irs_elements", c.n_irs_elements},
      {"drone_height", c.drone_height},
      {"bandwidth_total", c.bandwidth_total},
      {"noise_density", c.noise_density},
      {"edge_cpu_total", c.edge_cpu_total},
      {"local_cpu_max", c.local_cpu_max},
      {"area_side", c.area_side},
      {"ap_position", {c.ap_position.x, c.ap_position.y}},
      {"tx_power", c.tx_power},
      {"energy_budget", c.energy_budget},
      {"kappa", c.kappa},
      {"pathloss_exp_direct", c.pathloss_exp_direct},
      {"pathloss_exp_los", c.pathloss_exp_los},
      {"ref_gain_1m", c.ref_gain_1m},
      {"rician_k_db", c.rician_k_db},
      {"seed", c.seed},
      {"data_size_min", c.data_size_min},
      {"data_size_max", c.data_size_max},
      {"cycle_density_min", c.cycle_density_min},
      {"cycle_density_max", c.cycle_density_max},
  };
  if (c.phase_bits) j["phase_bits"] = *c.phase_bits;
  else j["phase_bits"] = "continuous";
  return j.dump(2);
}

}  // namespace vecirs
