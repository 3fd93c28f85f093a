#ifndef VECIRS_VECIRS_H
#define VECIRS_VECIRS_H

/* C interface to the vehicular edge computing / drone-IRS simulator.
 *
 * Every function returns a vecirs_status; on failure the message is available
 * from vecirs_last_error() on the same thread until the next call. Handles are
 * opaque and owned by the caller; free them with the matching *_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VECIRS_API __declspec(dllexport)
#else
#define VECIRS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vecirs_status {
  VECIRS_OK = 0,
  VECIRS_INVALID_ARGUMENT = 1,
  VECIRS_CONFIG = 2,
  VECIRS_IO = 3,
  VECIRS_INFEASIBLE = 4,
  VECIRS_TOO_LARGE = 5,
  VECIRS_INTERNAL = 6
} vecirs_status;

typedef enum vecirs_scheme {
  VECIRS_VHA_IRS = 0,
  VECIRS_VEC_IRS = 1,
  VECIRS_VHA_NO_IRS = 2
} vecirs_scheme;

typedef struct vecirs_config vecirs_config;
typedef struct vecirs_scenario vecirs_scenario;
typedef struct vecirs_solution vecirs_solution;
typedef struct vecirs_sweep vecirs_sweep;

typedef struct vecirs_record {
  size_t vehicle;
  double data_size_bits;
  double cycle_density;
  double local_cpu;
  double split;
  double bandwidth_hz;
  double edge_cpu;
  double rate_bps;
  double t_local_s;
  double t_offload_s;
  double t_completion_s;
  double energy_j;
} vecirs_record;

typedef struct vecirs_oracle_report {
  double bcd_objective;
  double oracle_objective;
  double ratio; /* bcd / oracle */
} vecirs_oracle_report;

VECIRS_API const char* vecirs_last_error(void);
VECIRS_API const char* vecirs_scheme_label(vecirs_scheme scheme);
VECIRS_API vecirs_status vecirs_parse_scheme(const char* label, vecirs_scheme* out);

/* Configuration. A NULL or empty path in vecirs_config_load yields the
 * defaults. */
VECIRS_API vecirs_status vecirs_config_default(vecirs_config** out);
VECIRS_API vecirs_status vecirs_config_load(const char* path, vecirs_config** out);
VECIRS_API vecirs_status vecirs_config_from_json(const char* json, vecirs_config** out);
VECIRS_API vecirs_status vecirs_config_set_seed(vecirs_config* config, uint64_t seed);
/* bits < 0 selects continuous phases. */
VECIRS_API vecirs_status vecirs_config_set_phase_bits(vecirs_config* config, int bits);
VECIRS_API vecirs_status vecirs_config_set_size(vecirs_config* config, size_t n_vehicles,
                                                size_t n_irs_elements);
VECIRS_API vecirs_status vecirs_config_n_vehicles(const vecirs_config* config, size_t* out);
VECIRS_API void vecirs_config_free(vecirs_config* config);

/* Scenario and channel drawn from the configuration's seed. */
VECIRS_API vecirs_status vecirs_scenario_generate(const vecirs_config* config,
                                                  vecirs_scenario** out);
VECIRS_API void vecirs_scenario_free(vecirs_scenario* scenario);

/* Block coordinate descent on the sum of completion times. */
VECIRS_API vecirs_status vecirs_solve(const vecirs_scenario* scenario, vecirs_scheme scheme,
                                      vecirs_solution** out);
VECIRS_API vecirs_status vecirs_solution_objective(const vecirs_solution* solution,
                                                   double* out);
VECIRS_API vecirs_status vecirs_solution_iterations(const vecirs_solution* solution,
                                                    size_t* out);
VECIRS_API vecirs_status vecirs_solution_drone(const vecirs_solution* solution, double* x,
                                               double* y);
VECIRS_API vecirs_status vecirs_solution_size(const vecirs_solution* solution, size_t* out);
VECIRS_API vecirs_status vecirs_solution_record(const vecirs_solution* solution, size_t vehicle,
                                                vecirs_record* out);
VECIRS_API void vecirs_solution_free(vecirs_solution* solution);

/* Sweeps. */
VECIRS_API vecirs_status vecirs_sweep_load(const char* path, vecirs_sweep** out);
VECIRS_API vecirs_status vecirs_sweep_preset(const char* name, size_t n_seeds,
                                             vecirs_sweep** out);
VECIRS_API vecirs_status vecirs_sweep_set_seeds(vecirs_sweep* sweep, size_t n_seeds);
VECIRS_API vecirs_status vecirs_sweep_set_base_seed(vecirs_sweep* sweep, uint64_t seed);
VECIRS_API vecirs_status vecirs_sweep_set_phase_bits(vecirs_sweep* sweep, int bits);
/* Comma-separated scheme labels. */
VECIRS_API vecirs_status vecirs_sweep_set_schemes(vecirs_sweep* sweep, const char* labels);
/* Runs the sweep and writes the CSV atomically; no file is left on failure.
 * threads = 0 uses the hardware concurrency. */
VECIRS_API vecirs_status vecirs_sweep_run_to_csv(const vecirs_sweep* sweep, const char* path,
                                                 unsigned threads);
VECIRS_API void vecirs_sweep_free(vecirs_sweep* sweep);

/* Compares the solver with the exhaustive grid on one small instance drawn
 * from `config` (at most three vehicles). */
VECIRS_API vecirs_status vecirs_oracle_check(const vecirs_config* config, vecirs_scheme scheme,
                                             vecirs_oracle_report* out);

#ifdef __cplusplus
}
#endif

#endif /* VECIRS_VECIRS_H */
