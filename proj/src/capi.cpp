#include "vecirs/vecirs.h"

#include <new>
#include <sstream>
#include <string>
#include <thread>

#include "vecirs/channel.hpp"
#include "vecirs/error.hpp"
#include "vecirs/harness.hpp"
#include "vecirs/optimizer.hpp"
#include "vecirs/scenario.hpp"

struct vecirs_config {
  vecirs::SystemConfig value;
};

struct vecirs_scenario {
  vecirs::Scenario scenario;
  vecirs::ChannelRealization realization;
};

struct vecirs_solution {
  vecirs::Scenario scenario;
  vecirs::SolveResult result;
};

struct vecirs_sweep {
  vecirs::SweepSpec spec;
};

namespace {

thread_local std::string g_last_error;

vecirs_status fail(vecirs_status code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

/// Maps the library's exceptions onto status codes at the C boundary.
template <typename F>
vecirs_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return VECIRS_OK;
  } catch (const vecirs::ConfigError& e) {
    return fail(VECIRS_CONFIG, e.what());
  } catch (const vecirs::InfeasibleError& e) {
    return fail(VECIRS_INFEASIBLE, e.what());
  } catch (const vecirs::TooLargeError& e) {
    return fail(VECIRS_TOO_LARGE, e.what());
  } catch (const vecirs::InternalError& e) {
    return fail(VECIRS_INTERNAL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(VECIRS_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VECIRS_INTERNAL, "out of memory");
  } catch (const std::runtime_error& e) {
    return fail(VECIRS_IO, e.what());
  } catch (const std::exception& e) {
    return fail(VECIRS_INTERNAL, e.what());
  } catch (...) {
    return fail(VECIRS_INTERNAL, "unknown error");
  }
}

vecirs::Scheme to_cpp(vecirs_scheme s) {
  switch (s) {
    case VECIRS_VHA_IRS: return vecirs::Scheme::vha_irs;
    case VECIRS_VEC_IRS: return vecirs::Scheme::vec_irs;
    case VECIRS_VHA_NO_IRS: return vecirs::Scheme::vha_no_irs;
  }
  throw std::invalid_argument("unknown scheme value " + std::to_string(static_cast<int>(s)));
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw std::invalid_argument(std::string(what) + " must not be NULL");
}

std::optional<int> phase_bits(int bits) {
  if (bits < 0) return std::nullopt;
  return bits;
}

}  // namespace

extern "C" {

const char* vecirs_last_error(void) { return g_last_error.c_str(); }

const char* vecirs_scheme_label(vecirs_scheme scheme) {
  switch (scheme) {
    case VECIRS_VHA_IRS: return "vha_irs";
    case VECIRS_VEC_IRS: return "vec_irs";
    case VECIRS_VHA_NO_IRS: return "vha_no_irs";
  }
  return "unknown";
}

vecirs_status vecirs_parse_scheme(const char* label, vecirs_scheme* out) {
  return guarded([&] {
    require(label, "label");
    require(out, "out");
    const auto s = vecirs::parse_scheme(label);
    if (!s)
      throw std::invalid_argument(std::string("unknown scheme \"") + label +
                                  "\" (expected vha_irs, vec_irs or vha_no_irs)");
    *out = *s == vecirs::Scheme::vha_irs   ? VECIRS_VHA_IRS
           : *s == vecirs::Scheme::vec_irs ? VECIRS_VEC_IRS
                                           : VECIRS_VHA_NO_IRS;
  });
}

vecirs_status vecirs_config_default(vecirs_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new vecirs_config{};
  });
}

vecirs_status vecirs_config_load(const char* path, vecirs_config** out) {
  return guarded([&] {
    require(out, "out");
    vecirs::SystemConfig c;
    if (path != nullptr && *path != '\0') c = vecirs::load_config(path);
    *out = new vecirs_config{c};
  });
}

vecirs_status vecirs_config_from_json(const char* json, vecirs_config** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new vecirs_config{vecirs::config_from_json(json)};
  });
}

vecirs_status vecirs_config_set_seed(vecirs_config* config, uint64_t seed) {
  return guarded([&] {
    require(config, "config");
    config->value.seed = seed;
  });
}

vecirs_status vecirs_config_set_phase_bits(vecirs_config* config, int bits) {
  return guarded([&] {
    require(config, "config");
    vecirs::SystemConfig c = config->value;
    c.phase_bits = phase_bits(bits);
    config->value = vecirs::validate_config(c);
  });
}

vecirs_status vecirs_config_set_size(vecirs_config* config, size_t n_vehicles,
                                     size_t n_irs_elements) {
  return guarded([&] {
    require(config, "config");
    vecirs::SystemConfig c = config->value;
    c.n_vehicles = n_vehicles;
    c.n_irs_elements = n_irs_elements;
    config->value = vecirs::validate_config(c);
  });
}

vecirs_status vecirs_config_n_vehicles(const vecirs_config* config, size_t* out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = config->value.n_vehicles;
  });
}

void vecirs_config_free(vecirs_config* config) { delete config; }

vecirs_status vecirs_scenario_generate(const vecirs_config* config, vecirs_scenario** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    vecirs::Scenario sc = vecirs::generate_scenario(config->value);
    vecirs::ChannelRealization re = vecirs::sample_realization(sc);
    *out = new vecirs_scenario{std::move(sc), std::move(re)};
  });
}

void vecirs_scenario_free(vecirs_scenario* scenario) { delete scenario; }

vecirs_status vecirs_solve(const vecirs_scenario* scenario, vecirs_scheme scheme,
                           vecirs_solution** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    const auto& sc = scenario->scenario;
    vecirs::SolveResult result =
        vecirs::solve_scheme(sc, scenario->realization, to_cpp(scheme));
    *out = new vecirs_solution{sc, std::move(result)};
  });
}

vecirs_status vecirs_solution_objective(const vecirs_solution* solution, double* out) {
  return guarded([&] {
    require(solution, "solution");
    require(out, "out");
    *out = solution->result.objective;
  });
}

vecirs_status vecirs_solution_iterations(const vecirs_solution* solution, size_t* out) {
  return guarded([&] {
    require(solution, "solution");
    require(out, "out");
    *out = solution->result.trace.outer_iterations;
  });
}

vecirs_status vecirs_solution_drone(const vecirs_solution* solution, double* x, double* y) {
  return guarded([&] {
    require(solution, "solution");
    require(x, "x");
    require(y, "y");
    *x = solution->result.decision.drone_xy.x;
    *y = solution->result.decision.drone_xy.y;
  });
}

vecirs_status vecirs_solution_size(const vecirs_solution* solution, size_t* out) {
  return guarded([&] {
    require(solution, "solution");
    require(out, "out");
    *out = solution->result.records.size();
  });
}

vecirs_status vecirs_solution_record(const vecirs_solution* solution, size_t vehicle,
                                     vecirs_record* out) {
  return guarded([&] {
    require(solution, "solution");
    require(out, "out");
    const auto& r = solution->result;
    if (vehicle >= r.records.size())
      throw std::invalid_argument("vehicle index " + std::to_string(vehicle) + " out of range");
    const auto& rec = r.records[vehicle];
    const auto& v = solution->scenario.vehicles[vehicle];
    *out = vecirs_record{v.id,
                         v.task.data_size,
                         v.task.cycle_density,
                         v.local_cpu,
                         rec.split,
                         r.decision.bandwidth[vehicle],
                         r.decision.edge_cpu[vehicle],
                         rec.rate,
                         rec.t_local,
                         rec.t_offload,
                         rec.t_completion,
                         rec.energy};
  });
}

void vecirs_solution_free(vecirs_solution* solution) { delete solution; }

vecirs_status vecirs_sweep_load(const char* path, vecirs_sweep** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new vecirs_sweep{vecirs::load_sweep_spec(path)};
  });
}

vecirs_status vecirs_sweep_preset(const char* name, size_t n_seeds, vecirs_sweep** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new vecirs_sweep{vecirs::preset_sweep(name, n_seeds)};
  });
}

vecirs_status vecirs_sweep_set_seeds(vecirs_sweep* sweep, size_t n_seeds) {
  return guarded([&] {
    require(sweep, "sweep");
    if (n_seeds < 1) throw vecirs::ConfigError("n_seeds", "n_seeds must be ≥ 1");
    sweep->spec.n_seeds = n_seeds;
  });
}

vecirs_status vecirs_sweep_set_base_seed(vecirs_sweep* sweep, uint64_t seed) {
  return guarded([&] {
    require(sweep, "sweep");
    sweep->spec.base_config.seed = seed;
  });
}

vecirs_status vecirs_sweep_set_phase_bits(vecirs_sweep* sweep, int bits) {
  return guarded([&] {
    require(sweep, "sweep");
    vecirs::SystemConfig c = sweep->spec.base_config;
    c.phase_bits = phase_bits(bits);
    sweep->spec.base_config = vecirs::validate_config(c);
  });
}

vecirs_status vecirs_sweep_set_schemes(vecirs_sweep* sweep, const char* labels) {
  return guarded([&] {
    require(sweep, "sweep");
    require(labels, "labels");
    std::vector<vecirs::Scheme> schemes;
    std::stringstream in(labels);
    for (std::string item; std::getline(in, item, ',');) {
      const auto s = vecirs::parse_scheme(item);
      if (!s) throw vecirs::ConfigError("scheme", "unknown scheme \"" + item + "\"");
      schemes.push_back(*s);
    }
    vecirs::SweepSpec spec = sweep->spec;
    spec.schemes = schemes;
    vecirs::validate_sweep_spec(spec);
    sweep->spec = std::move(spec);
  });
}

vecirs_status vecirs_sweep_run_to_csv(const vecirs_sweep* sweep, const char* path,
                                      unsigned threads) {
  return guarded([&] {
    require(sweep, "sweep");
    require(path, "path");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::string csv = vecirs::to_csv(vecirs::run_sweep(sweep->spec, threads));
    vecirs::write_file_atomic(path, csv);
  });
}

void vecirs_sweep_free(vecirs_sweep* sweep) { delete sweep; }

vecirs_status vecirs_oracle_check(const vecirs_config* config, vecirs_scheme scheme,
                                  vecirs_oracle_report* out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    const vecirs::Scheme s = to_cpp(scheme);
    const vecirs::Scenario sc = vecirs::generate_scenario(config->value);
    const vecirs::ChannelRealization re = vecirs::sample_realization(sc);
    const vecirs::OracleResult oracle =
        vecirs::brute_force_oracle(sc, re, s, vecirs::Objective::sum_completion);
    const double bcd = vecirs::solve_scheme(sc, re, s).objective;
    *out = vecirs_oracle_report{bcd, oracle.objective, bcd / oracle.objective};
  });
}

}  // extern "C"
