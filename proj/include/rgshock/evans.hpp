#pragma once
// Evans-function machinery for the linearized problem around a profile: mode
// integration seeded at the numerical infinities, the local solution basis at
// the interior singularity x = 0 of the first-order system (where a(x)
// vanishes), crossing of the singular band, assembly of the two determinants
// D_-(lambda) and D_+(lambda), winding-number evaluation on contours, a
// discretized-operator eigenvalue oracle, and a high-frequency resolvent
// probe.

#include <array>
#include <complex>
#include <vector>

#include "rgshock/profile.hpp"
#include "rgshock/spectral.hpp"

namespace rgs {

// Half-width of the excluded band around the coefficient singularity.
inline constexpr double kSingularBand = 1e-2;

// One tracked solution of W' = B(x, lambda) W along the profile.  The true
// solution is W * exp(scale_log); the stored representative is kept at O(1)
// magnitude by periodic renormalization.
struct ModeSolution {
  cplx lambda{};
  int origin_side = +1;   // +1: seeded at +X_inf, -1: at -X_inf, 0: local at x=0
  int origin_mode = 3;    // labeled root index used at the seed (see ModeSet)
  double x = 0.0;
  std::array<cplx, 3> W{};
  double scale_log = 0.0;
};

// Right-hand side B(x, lambda) W of the first-order system
//   a u' = -(lambda + a' + L b) u + L p,   q' = b u - p,   p' = -q.
std::array<cplx, 3> spectral_rhs(const Profile& p, cplx lambda, double x,
                                 const std::array<cplx, 3>& W);

// Root-labeling policy for the seeding eigenvector.  tracked_roots follows
// the characteristic roots continued from their lambda = 0 anchors; that
// labeling is analytic away from root collisions, whose cuts lie on the
// negative real axis, so it serves every contour contained in the closed
// right half-plane.  origin_frozen seeds with the fixed lambda = 0 direction
// and amplitude instead, making each sample an entire function of lambda;
// this is the right choice for small contours encircling the origin, which
// dip across the cuts.  The frozen direction is only usable while the seeded
// root stays dominant along the inward leg, i.e. for |lambda| small against
// the end-state scales.
enum class SeedPolicy { tracked_roots, origin_frozen };

// Seed a mode at side*X_inf from the frozen-coefficient eigenvector of the
// labeled root `mode_index` (1-based).  Only the root that decays toward the
// seeding infinity (index 3) gives a dominance-stable integration toward the
// shock; requesting any other index is an error.
ModeSolution seed_at_infinity(const Profile& p, int side, cplx lambda,
                              int mode_index,
                              SeedPolicy policy = SeedPolicy::tracked_roots);

// Advance a mode from x = from to x = to.  The interval must not cross the
// singular point x = 0 and must match ms.x at `from`.
ModeSolution integrate_mode(const Profile& p, const ModeSolution& ms,
                            double from, double to, double rtol = 1e-10);

// Local solution structure at the singularity: two slow solutions, analytic
// across the band (computed as power series in x about 0), and one fast
// solution vanishing like |x|^nu on the given side with q(0) = p(0) = 0.
struct LocalBasis {
  cplx lambda{};
  int side = -1;                     // side of zero the fast mode lives on
  cplx nu{};                         // (lambda + a'(0) + L b(0)) / |a'(0)|
  double delta0 = kSingularBand;
  std::array<cplx, 3> slow1_near{};  // slow solutions at x = side*delta0
  std::array<cplx, 3> slow2_near{};
  std::array<cplx, 3> slow1_far{};   // the same analytic solutions at x = -side*delta0
  std::array<cplx, 3> slow2_far{};
  ModeSolution fast;                 // fast mode evaluated at x = side*delta0
};
LocalBasis local_basis_near_zero(const Profile& p, cplx lambda, int side_of_zero,
                                 double delta0 = kSingularBand);

// Fast local mode by truncated Frobenius series |x|^nu * sum_k V_k x^k
// (independent cross-check of LocalBasis::fast).
ModeSolution series_fast_local(const Profile& p, cplx lambda, int side_of_zero,
                               int order, double delta0 = kSingularBand);

// Continue a solution across the singular band: expand at ms.x = s*delta0 in
// (slow1, slow2, fast), drop the fast coefficient (the continuation of a
// bounded solution is determined by its slow part only; the determinants
// below are unchanged by this choice), and re-emit at -s*delta0.
ModeSolution cross_singularity(const Profile& p, const ModeSolution& ms);

// One Evans determinant sample.  D is the determinant of the three
// unit-normalized columns; scale_log collects the discarded magnitudes, so
// the raw determinant is D * exp(scale_log).
struct EvansSample {
  cplx lambda{};
  cplx D{};
  double scale_log = 0.0;
};

// side = -1: D_-(lambda) = det(W1+, W2(0-), W3-)(-1);
// side = +1: D_+(lambda) = det(W1+, W2(0+), W3-)(+1).
EvansSample evans_D(const Profile& p, cplx lambda, int side);

// Both determinants from one set of mode integrations.
struct EvansPair {
  cplx lambda{};
  EvansSample minus, plus;
};
EvansPair evans_both(const Profile& p, cplx lambda);

// Structure of D near the origin: D_-(0) (normalized columns), the
// finite-difference slope of the raw determinant at 0 against its closed-form
// boundary expression L^{-1} [u] det([u1, u2; p1, p2])(-1) with all columns
// normalized to the profile-derivative solution, and the ratio D_+/D_- over
// a range of small lambda.
struct OriginReport {
  double D0_normalized = 0.0;        // |D_-(0)| with unit columns
  cplx slope_fd{};                   // finite-difference d/dlambda of raw D_-
  cplx slope_formula{};              // boundary-determinant expression
  double slope_rel_err = 0.0;
  std::vector<cplx> lambdas;         // sample points for the ratio test
  std::vector<cplx> ratio;           // D_+ / D_- at those points
  double ratio_spread = 0.0;         // max |ratio_i/ratio_j - 1|
  cplx m_factor{};                   // ratio at the smallest sample
};
OriginReport evans_origin_report(const Profile& p);

// Piecewise contour (line segments and circular arcs) in the lambda plane.
struct ContourSpec {
  struct Seg {
    bool arc = false;
    cplx a{}, b{};      // line endpoints
    cplx center{};      // arc data
    double radius = 0.0, th0 = 0.0, th1 = 0.0;
    double len = 0.0;
  };
  std::vector<Seg> segs;
  double total_len = 0.0;

  cplx at(double t) const;  // t in [0, 1], arclength-proportional
  void push_line(cplx a, cplx b);
  void push_arc(cplx center, double radius, double th0, double th1);
};

// Boundary of {Re > 0} intersected with {r < |lambda| < R}, positively
// oriented; the small semicircle excludes the origin.
ContourSpec contour_punctured_rhp(double R, double r);
ContourSpec contour_circle(cplx center, double radius);
ContourSpec contour_rectangle(double re0, double re1, double im0, double im1);

struct WindingResult {
  bool conclusive = false;
  int winding = 0;
  double raw_winding = 0.0;   // accumulated arg / 2 pi before rounding
  int evaluations = 0;
  double max_step_arg = 0.0;  // largest per-step argument increment
  double integer_residual = 0.0;
};

// Argument-principle zero count of D_side inside the contour, with adaptive
// bisection of contour steps until every argument increment is below pi/2.
WindingResult winding_number(const Profile& p, const ContourSpec& c, int side,
                             int eval_budget = 4000);

// Both windings from shared samples (one mode-integration pass per lambda).
struct WindingPair {
  WindingResult minus, plus;
};
WindingPair winding_both(const Profile& p, const ContourSpec& c,
                         int eval_budget = 4000);

// Discretized eigenvalue oracle in integrated coordinates: the operator
// v -> -a v' + L K^{-1} (b v')' on (-extent, extent) with Dirichlet
// conditions, K = 1 - d^2/dx^2, discretized with centered differences on n
// interior nodes; returns the eigenvalues split into genuinely unstable ones
// and a near-zero cluster.
struct OracleOptions {
  int n = 1200;
  double extent = 0.0;            // 0: choose from the profile scales
  double re_threshold = 1e-3;     // instability cut
  double near_zero_radius = 2e-2; // |lambda| below this is the zero cluster
};
struct OracleReport {
  int n = 0;
  double extent = 0.0, h = 0.0;
  std::vector<cplx> unstable;     // Re > threshold, outside the zero cluster
  std::vector<cplx> near_zero;    // Re > threshold, inside the zero cluster
  double spectral_abscissa = 0.0; // max Re over the whole spectrum
};
OracleReport integrated_eigen_oracle(const Profile& p, const OracleOptions& opt);

// High-frequency resolvent probe: solve the coupled system
//   lambda u + (a u)' + L q' = S,   -q'' + q + (b u)' = 0
// with S = phi - L (K^{-1} psi)' for Gaussian sources, and report the
// scaling ratio |u|_L2 * |lambda| / (|phi|_H1 + |psi|_L2).  For a fixed
// smooth source the solution decays like |S|/|lambda| away from the
// spectrum, so the ratio staying flat over a frequency sweep certifies the
// sharp high-frequency resolvent decay (and a fortiori every weaker bound).
struct ResolventSource {
  double phi_amp = 1.0, phi_center = 0.0, phi_width = 1.0;
  double psi_amp = 1.0, psi_center = 0.0, psi_width = 1.0;
};
struct ResolventProbe {
  double u_l2 = 0.0, q_l2 = 0.0, source_norm = 0.0;
  double ratio = 0.0;     // |u|_L2 |lambda| / source_norm
  double residual = 0.0;  // discrete residual of the solved system
};
ResolventProbe resolvent_probe(const Profile& p, cplx lambda,
                               const ResolventSource& s, double extent = 40.0,
                               int n = 8001);

}  // namespace rgs
