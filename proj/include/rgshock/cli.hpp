#pragma once
// Command-line front end: config resolution (file, then flag overrides),
// the verify / profile / evans / simulate / all commands, and their CSV/JSON
// report emission with an effective-config echo for bit-identical replay.

#include <cstdint>
#include <string>
#include <vector>

#include "rgshock/io.hpp"
#include "rgshock/model.hpp"

namespace rgs {

struct RunConfig {
  // model selection
  std::string preset = "burgers-linear";  // or "cubic-M", or "custom"
  double eps = 0.2;
  std::vector<double> f_coeffs, m_coeffs;  // used when preset == "custom"
  double L = 1.0;
  double u_minus = 0.0, u_plus = 0.0;

  // profile construction
  double shoot_step = 0.05;
  double series_tol = 1e-13;
  bool refine = false;

  // evans verification
  double contour_radius = 0.0;  // 0: 10 * max(a^2, L b) over the end states
  double puncture_radius = 0.0; // 0: 1e-3 * contour radius
  int winding_budget = 4000;
  int oracle_n = 1200;
  double oracle_extent = 0.0;

  // simulation
  double sim_h = 0.02;
  double sim_cfl = 0.4;
  double sim_t_final = 400.0;
  double sim_dt_log = 0.5;
  std::string sim_class = "gaussian";
  double sim_amplitude = 1e-2;
  double sim_center = 4.0;
  double sim_width = 1.0;
  int energy_k = 1;
  std::uint64_t seed = 20250815;

  std::string out_dir = "out";

  ModelSpec make_model() const;
  void apply_kv(const KvConfig& kv);  // config-file values
  KvConfig to_kv() const;             // canonical effective config
};

int cmd_verify(const RunConfig& cfg);
int cmd_profile(const RunConfig& cfg);
int cmd_evans(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);

// Parse argv and dispatch.  Exit codes: 0 success/verified, 2 domain verdict
// (assumption failure, zero detected, guard trip), 3 inconclusive, 1 error.
int run_cli(int argc, const char* const* argv);

}  // namespace rgs
