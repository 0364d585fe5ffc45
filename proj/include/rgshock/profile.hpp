// Stationary shock profile construction.
//
// The profile (U, Q) solves
//
//   f(U)' + L Q' = 0,            -Q'' + Q + M(U)' = 0
//
// with U(-inf) = u_minus, U(+inf) = u_plus, Q(+-inf) = 0.  Eliminating Q via
// L Q = f(u+-) - f(U) reduces the system to a second-order scalar equation
// whose phase-plane form (Z = integrated radiation variable, Y = Z') has
// saddle points at (L M(u+-), 0).  Heteroclinic pieces are shot from both
// saddles and matched at Y = -m; a tangential match at the common corner
// gives a smooth (C^2) profile, an interior transversal intersection gives
// an entropic subshock.
//
// The x-space profile is represented piecewise-analytically: a power-series
// cell around the sonic corner, adaptive Taylor-step cells along each flank,
// and closed-form exponential tail cells, so that evaluation is smooth to
// machine precision (second differences of the samples stay clean even at
// h = 1e-3).
#pragma once

#include <memory>
#include <vector>

#include "rgshock/model.hpp"
#include "rgshock/numerics.hpp"

namespace rgs {

// ------------------------------------------------------------ flux geometry
struct FluxGeometry {
  ModelSpec spec;
  double u_star = 0.0;  // unique zero of df on (u_plus, u_minus)
  double m = 0.0;       // depth of F(u) = f(u) - f(u+-) at u_star
  double f_end = 0.0;   // common end-state flux value f(u+-)

  double F(double u) const { return spec.f(u) - f_end; }
  // Branch inverses of F on [-m, 0]: h_plus maps into [u_plus, u_star]
  // (decreasing), h_minus into [u_star, u_minus] (increasing).
  double h_plus(double Y) const;
  double h_minus(double Y) const;
  // Inverse of u -> L*M(u).
  double H(double w) const;
};

FluxGeometry flux_geometry(const ModelSpec& spec);

// --------------------------------------------------------- phase trajectories
struct PhaseTrajectory {
  int side = +1;                 // +1: shot from (L M(u_plus), 0), -1: minus
  std::vector<double> Y, Z;      // samples with Y strictly decreasing
  // Graph samples of the same orbit parametrized by U (monotone from the
  // end state to u_star), with exact slopes dY/dU = a and dZ/dU = Y a / P.
  // U-parametrization stays analytic through the terminal corner approach
  // where Z(Y) picks up a sqrt branch, so the matching interpolates these.
  std::vector<double> Ug, Yg, Zg, dYdU, dZdU;
  double Y_stop = 0.0;           // last integrated Y (close to -m)
  double Z_terminal = 0.0;       // extrapolated Z at Y = -m
  double Zpp_stop = 0.0;         // Y' = Z'' at the stop point
  bool reached_terminal = false;
};

// Launches the trajectory from the saddle along the correct eigendirection
// (offset 1e-7 * |L M(u_minus) - L M(u_plus)|) and integrates until Y
// reaches -m.  `step` caps the integrator step and sets the recording
// density.  eigendirection_override = -1 flips the launch onto the opposite
// branch of the eigenline so tests can exercise the wrong-direction
// detection; 0 or +1 keep the automatic launch.
PhaseTrajectory shoot_saddle(const ModelSpec& spec, int side, double step,
                             int eigendirection_override = 0);

struct MatchResult {
  double Z_hat = 0.0;
  double Y_hat = 0.0;
  bool subshock = false;
};

// Intersects the two phase-plane graphs Z(Y).  A transversal interior
// intersection (Y_hat > -m) means the profile carries a subshock with
// U(0-) = h_minus(Y_hat) > u_star > h_plus(Y_hat) = U(0+); coincidence of
// the terminal corner points (Y_hat = -m) means the profile is smooth.
MatchResult match_trajectories(const PhaseTrajectory& tp,
                               const PhaseTrajectory& tm);

// ------------------------------------------------------------------- profile
struct ProfileCell {
  enum Kind { kSeries, kTail } kind = kSeries;
  double x0 = 0.0, x1 = 0.0;  // covered interval, x0 < x1
  double xc = 0.0;            // series anchor
  Series U, G;                // G = a(U) U' (flux derivative variable)
  // Tail cells: Q(x) = q_amp * exp(mu * (x - xc)), U = u_end - (L/a_end) Q.
  double mu = 0.0, q_amp = 0.0, u_end = 0.0, a_end = 0.0;
};

struct ProfileField {
  double U, dU, Q, dQ, a, da, b;
};

struct Profile {
  ModelSpec spec;
  bool subshock = false;
  double x_match = 0.0;      // matching abscissa after normalization
  double shift_applied = 0.0;  // internal offset removed by the normalization
  double u_star = 0.0, m = 0.0, f_end = 0.0;
  double corner_slope = 0.0;  // U'(0) (smooth case)
  double u_left0 = 0.0, u_right0 = 0.0;  // U(0-), U(0+)
  // Linearized tail rates (hyperbolic eigenvalues of the tail system) and
  // the rates actually measured on the computed flanks.
  double eta_plus = 0.0, eta_minus = 0.0;
  double eta_measured_plus = 0.0, eta_measured_minus = 0.0;
  double X_inf = 0.0;  // domain is [-X_inf, X_inf]

  std::vector<ProfileCell> cells;  // ordered left to right

  // Report grid (nonuniform, includes x = 0) used for CSV export and the
  // coefficient normalization check.
  std::vector<double> grid_x, grid_U, grid_Q, grid_a, grid_b;

  // Evaluate profile fields at x; for a subshock profile, x = 0 returns the
  // right (plus-side) limit.
  ProfileField eval(double x) const;
  // U and its first three derivatives (for the singular-band expansions).
  void eval_derivs(double x, double out_U[4]) const;

  const ProfileCell& cell_at(double x) const;
};

struct ReconstructOptions {
  double series_tol = 1e-13;   // per-cell truncation target
  int series_order = 18;       // Taylor-step order
  int corner_order = 24;       // corner power-series order
  double anchor = 0.0;         // internal launch abscissa (shifted away)
  double tail_amplitude = 1e-8;  // |U-u_end| hand-off to exponential tails
  double x_inf_amplitude = 1e-10;  // |U-u_end| at the domain ends
};

Profile reconstruct_profile(const ModelSpec& spec, const PhaseTrajectory& tp,
                            const PhaseTrajectory& tm, const MatchResult& match,
                            const ReconstructOptions& opts = {});

// Convenience wrapper: shoot both sides, match, reconstruct.
Profile build_profile(const ModelSpec& spec, double shoot_step = 0.05,
                      const ReconstructOptions& opts = {});

// --------------------------------------------------------------- diagnostics
struct ProfileReport {
  double max_residual_hyperbolic = 0.0;  // centered differences, h = 1e-3
  double max_residual_elliptic = 0.0;
  double residual_grid_h = 0.0;
  double residual_extent = 0.0;
  int monotonicity_violations = 0;
  double u0_error = 0.0;            // |U(0) - u_star| (smooth case)
  double flux_identity_error = 0.0; // max |L Q - (f_end - f(U))|
  // Measured decay rates of d^k(U - u_end) and d^k Q, k = 0..4, relative
  // deviation from the linearized rate, worst over k; per side.
  double rate_deviation_plus = 0.0, rate_deviation_minus = 0.0;
  bool subshock = false;
};

ProfileReport verify_profile(const Profile& p);

}  // namespace rgs
