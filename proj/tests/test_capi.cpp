// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "vecirs/vecirs.h"

TEST_CASE("scheme labels") {
  vecirs_scheme s;
  CHECK(vecirs_parse_scheme("vec_irs", &s) == VECIRS_OK);
  CHECK(s == VECIRS_VEC_IRS);
  CHECK(std::string(vecirs_scheme_label(VECIRS_VHA_NO_IRS)) == "vha_no_irs");
  CHECK(vecirs_parse_scheme("bogus", &s) == VECIRS_INVALID_ARGUMENT);
  CHECK(vecirs_parse_scheme(nullptr, &s) == VECIRS_INVALID_ARGUMENT);
  CHECK(std::string(vecirs_last_error()).size() > 0);
}

TEST_CASE("configuration errors carry the validation message") {
  vecirs_config* cfg = nullptr;
  CHECK(vecirs_config_from_json(R"({"n_vehicles": 0})", &cfg) == VECIRS_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(vecirs_last_error()).find("n_vehicles must be ≥ 1") != std::string::npos);
  CHECK(vecirs_config_load("/nonexistent/config.json", &cfg) == VECIRS_CONFIG);

  REQUIRE(vecirs_config_default(&cfg) == VECIRS_OK);
  CHECK(vecirs_config_set_phase_bits(cfg, 0) == VECIRS_CONFIG);
  CHECK(vecirs_config_set_size(cfg, 0, 4) == VECIRS_CONFIG);
  size_t n = 0;
  CHECK(vecirs_config_n_vehicles(cfg, &n) == VECIRS_OK);
  CHECK(n == 10);
  vecirs_config_free(cfg);
  vecirs_config_free(nullptr);
}

TEST_CASE("solve through the handles") {
  vecirs_config* cfg = nullptr;
  REQUIRE(vecirs_config_from_json(R"({"n_vehicles": 3, "n_irs_elements": 8,
                                      "local_cpu_max": 1e9, "kappa": 1e-30})",
                                  &cfg) == VECIRS_OK);
  vecirs_scenario* sc = nullptr;
  REQUIRE(vecirs_scenario_generate(cfg, &sc) == VECIRS_OK);

  double objective[3] = {0, 0, 0};
  for (int k = 0; k < 3; ++k) {
    vecirs_solution* sol = nullptr;
    REQUIRE(vecirs_solve(sc, static_cast<vecirs_scheme>(k), &sol) == VECIRS_OK);
    size_t size = 0;
    CHECK(vecirs_solution_size(sol, &size) == VECIRS_OK);
    CHECK(size == 3);
    CHECK(vecirs_solution_objective(sol, &objective[k]) == VECIRS_OK);
    double sum = 0.0;
    for (size_t i = 0; i < size; ++i) {
      vecirs_record r;
      REQUIRE(vecirs_solution_record(sol, i, &r) == VECIRS_OK);
      CHECK(r.vehicle == i);
      sum += r.t_completion_s;
      if (k == VECIRS_VEC_IRS) CHECK(r.split == 0.0);
    }
    CHECK(sum == doctest::Approx(objective[k]));
    vecirs_record r;
    CHECK(vecirs_solution_record(sol, 3, &r) == VECIRS_INVALID_ARGUMENT);
    double x = -1, y = -1;
    CHECK(vecirs_solution_drone(sol, &x, &y) == VECIRS_OK);
    CHECK(x >= 0.0);
    CHECK(y <= 500.0);
    vecirs_solution_free(sol);
  }
  CHECK(objective[VECIRS_VHA_IRS] <= objective[VECIRS_VEC_IRS]);
  CHECK(objective[VECIRS_VHA_IRS] <= objective[VECIRS_VHA_NO_IRS]);

  CHECK(vecirs_solve(nullptr, VECIRS_VHA_IRS, nullptr) == VECIRS_INVALID_ARGUMENT);
  vecirs_scenario_free(sc);
  vecirs_config_free(cfg);
}

TEST_CASE("sweep to CSV leaves nothing behind on failure") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "vecirs_capi_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  vecirs_sweep* sw = nullptr;
  const std::string missing = (dir / "missing.json").string();
  CHECK(vecirs_sweep_load(missing.c_str(), &sw) == VECIRS_CONFIG);
  CHECK(vecirs_sweep_preset("fig9", 1, &sw) == VECIRS_CONFIG);

  REQUIRE(vecirs_sweep_preset("fig4", 1, &sw) == VECIRS_OK);
  CHECK(vecirs_sweep_set_seeds(sw, 0) == VECIRS_CONFIG);
  CHECK(vecirs_sweep_set_schemes(sw, "vha_irs,nope") == VECIRS_CONFIG);
  CHECK(vecirs_sweep_set_schemes(sw, "vha_no_irs") == VECIRS_OK);
  const std::string bad = (dir / "no" / "such" / "out.csv").string();
  CHECK(vecirs_sweep_run_to_csv(sw, bad.c_str(), 1) == VECIRS_IO);
  CHECK_FALSE(fs::exists(dir / "no"));

  const std::string out = (dir / "out.csv").string();
  CHECK(vecirs_sweep_run_to_csv(sw, out.c_str(), 1) == VECIRS_OK);
  CHECK(fs::exists(out));
  // header + 10 values x 1 scheme x 1 seed x 10 vehicles
  std::FILE* f = std::fopen(out.c_str(), "r");
  REQUIRE(f != nullptr);
  int lines = 0;
  for (int ch; (ch = std::fgetc(f)) != EOF;) lines += ch == '\n';
  std::fclose(f);
  CHECK(lines == 101);
  vecirs_sweep_free(sw);
  fs::remove_all(dir);
}

TEST_CASE("oracle check") {
  vecirs_config* cfg = nullptr;
  REQUIRE(vecirs_config_from_json(R"({"n_vehicles": 2, "n_irs_elements": 4,
                                      "local_cpu_max": 1e9, "kappa": 1e-30})",
                                  &cfg) == VECIRS_OK);
  vecirs_oracle_report rep;
  REQUIRE(vecirs_oracle_check(cfg, VECIRS_VHA_NO_IRS, &rep) == VECIRS_OK);
  CHECK(rep.ratio == doctest::Approx(rep.bcd_objective / rep.oracle_objective));
  CHECK(rep.ratio <= 1.02);
  CHECK(vecirs_config_set_size(cfg, 4, 4) == VECIRS_OK);
  CHECK(vecirs_oracle_check(cfg, VECIRS_VHA_IRS, &rep) == VECIRS_TOO_LARGE);
  vecirs_config_free(cfg);
}
