// Model definition for the radiating-gas system
//
//   u_t + f(u)_x + L q_x = 0,
//   -q_xx + q + M(u)_x  = 0,
//
// together with the structural-assumption checks every other module relies
// on.  Fluxes are polynomials given by coefficient lists, so all derivatives
// are exact.
#pragma once

#include <string>
#include <vector>

#include "rgshock/numerics.hpp"

namespace rgs {

struct ModelSpec {
  std::vector<double> f_coeffs;  // velocity flux f(u), ascending coefficients
  std::vector<double> M_coeffs;  // coupling flux M(u)
  double L = 1.0;                // coupling strength
  double u_minus = 0.0;          // left end state
  double u_plus = 0.0;           // right end state
  double s_wave = 0.0;           // wave speed (stationary normalization)
  std::string name = "custom";

  // Cached derivative coefficient lists (built by finalize()).
  std::vector<double> df_coeffs, d2f_coeffs, dM_coeffs, d2M_coeffs;

  void finalize();

  double f(double u) const { return poly_eval(f_coeffs, u); }
  double df(double u) const { return poly_eval(df_coeffs, u); }
  double d2f(double u) const { return poly_eval(d2f_coeffs, u); }
  double M(double u) const { return poly_eval(M_coeffs, u); }
  double dM(double u) const { return poly_eval(dM_coeffs, u); }
  double d2M(double u) const { return poly_eval(d2M_coeffs, u); }
};

// Built-in presets.  Both use f(u) = u^2/2, L = 1, u∓ = ±eps; the first has
// M(u) = u (constant b), the second M(u) = u + u^3/10 (variable b).
ModelSpec preset_burgers_linear(double eps);
ModelSpec preset_cubic_m(double eps);

struct AssumptionEntry {
  std::string id;      // "A0", "A1", ..., "A5_4", "LM+2a'(0)"
  bool pass = false;
  double margin = 0.0; // minimum of the defining expression over the grid
  bool applicable = true;
  std::string note;
};

struct AssumptionReport {
  std::vector<AssumptionEntry> entries;
  int grid_points = 0;
  bool all_pass = false;

  const AssumptionEntry* find(const std::string& id) const;
};

// Checks (A0)-(A4) on a 256-point u-grid spanning [u_plus, u_minus], the
// corner conditions (A5_k): L b(0) + (k + 1/2) a'(0) > 0 for k = 1..4, and
// the combined condition L b(0) + 2 a'(0) > 0.  aprime0 and b0 are the
// corner values a'(0), b(0) measured on a computed profile.
AssumptionReport check_assumptions(const ModelSpec& spec, double aprime0,
                                   double b0);

// Coefficient samples along a profile: a_i = df(U_i), b_i = dM(U_i).
struct CoefficientSamples {
  std::vector<double> a, b;
};

// Evaluates the coefficients on the supplied profile grid and validates the
// normalization: a must change sign exactly once, at the node nearest x=0.
// Throws std::runtime_error otherwise.
CoefficientSamples coefficient_functions(const ModelSpec& spec,
                                         const std::vector<double>& x,
                                         const std::vector<double>& U);

}  // namespace rgs
