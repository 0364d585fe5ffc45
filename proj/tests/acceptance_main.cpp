// Acceptance gate: runs the numbered acceptance checks and prints one
// PASS/FAIL line per criterion with the measured value and its threshold.
// Usage: acceptance [1|2|3|4|56|7|8|all]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "rgshock/cli.hpp"
#include "rgshock/evans.hpp"
#include "rgshock/model.hpp"
#include "rgshock/profile.hpp"
#include "rgshock/sim.hpp"

using namespace rgs;

namespace {

int g_failures = 0;

struct Criterion {
  int id;
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    std::printf("    [%d] %-4s %s\n", id, ok ? "ok" : "BAD", what.c_str());
    if (!ok) pass = false;
  }
  void finish(const std::string& label) {
    std::printf("CRITERION %d: %s  (%s)\n", id, pass ? "PASS" : "FAIL", label.c_str());
    if (!pass) ++g_failures;
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1
void criterion_profile() {
  Criterion c{1};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Profile p = build_profile(preset_burgers_linear(0.2));
    auto rep = verify_profile(p);
    c.expect(rep.max_residual_hyperbolic < 1e-8,
             "hyperbolic residual " + num(rep.max_residual_hyperbolic) + " < 1e-8 at h=" +
                 num(rep.residual_grid_h));
    c.expect(rep.max_residual_elliptic < 1e-8,
             "elliptic residual " + num(rep.max_residual_elliptic) + " < 1e-8");
    c.expect(rep.monotonicity_violations == 0,
             "monotonicity violations = " + num(rep.monotonicity_violations) + " (want 0)");
    c.expect(rep.u0_error < 1e-8,
             "|U(0) - u*| = " + num(rep.u0_error) + " < 1e-8");
    c.expect(rep.rate_deviation_plus < 0.05 && rep.rate_deviation_minus < 0.05,
             "tail rate deviation " +
                 num(std::max(rep.rate_deviation_plus, rep.rate_deviation_minus)) +
                 " < 0.05");
    const double dt = seconds_since(t0);
    c.expect(dt < 10.0, "runtime " + num(dt) + " s < 10 s");
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  c.finish("profile fidelity, burgers-linear eps=0.2");
}

// ---------------------------------------------------------------- criterion 2
void criterion_evans_origin() {
  Criterion c{2};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Profile p = build_profile(preset_burgers_linear(0.2));
    OriginReport r = evans_origin_report(p);
    c.expect(r.D0_normalized < 1e-6,
             "|D_-(0)| (unit columns) = " + num(r.D0_normalized) + " < 1e-6");
    c.expect(r.slope_rel_err < 0.05,
             "dD_-/dlambda fd-vs-formula rel err " + num(r.slope_rel_err) + " < 0.05");
    c.expect(r.ratio_spread < 0.10,
             "D_+/D_- spread over 3 decades " + num(r.ratio_spread) + " < 0.10");
    const double dt = seconds_since(t0);
    c.expect(dt < 60.0, "runtime " + num(dt) + " s < 60 s");
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  c.finish("Evans origin structure");
}

// ---------------------------------------------------------------- criterion 3
void criterion_condition_d() {
  Criterion c{3};
  struct Case {
    const char* label;
    ModelSpec spec;
  };
  std::vector<Case> cases = {{"burgers-linear eps=0.1", preset_burgers_linear(0.1)},
                             {"burgers-linear eps=0.2", preset_burgers_linear(0.2)},
                             {"cubic-M eps=0.05", preset_cubic_m(0.05)}};
  for (auto& cs : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Profile p = build_profile(cs.spec);
      const EndState ep = end_state(cs.spec, +1), em = end_state(cs.spec, -1);
      const double R = 10.0 * std::max({ep.a * ep.a, em.a * em.a,
                                        cs.spec.L * ep.b, cs.spec.L * em.b});
      auto contour = contour_punctured_rhp(R, 1e-3 * R);
      auto w = winding_both(p, contour, 12000);
      c.expect(w.minus.conclusive && w.minus.winding == 0,
               std::string(cs.label) + ": winding D_- = " + num(w.minus.winding) +
                   " (conclusive=" + num(w.minus.conclusive) + ", want 0)");
      c.expect(w.plus.conclusive && w.plus.winding == 0,
               std::string(cs.label) + ": winding D_+ = " + num(w.plus.winding) +
                   " (want 0)");
      const double dt = seconds_since(t0);
      c.expect(dt < 300.0, std::string(cs.label) + ": runtime " + num(dt) + " s < 300 s");
    } catch (const std::exception& e) {
      c.expect(false, std::string(cs.label) + ": exception: " + e.what());
    }
  }
  try {
    Profile p = build_profile(preset_burgers_linear(0.2));
    auto circle = contour_circle(cplx(0.0), 0.01);
    auto w = winding_both(p, circle, 12000);
    c.expect(w.minus.conclusive && w.minus.winding == 1,
             "small circle: winding D_- = " + num(w.minus.winding) + " (want 1)");
    c.expect(w.plus.conclusive && w.plus.winding == 1,
             "small circle: winding D_+ = " + num(w.plus.winding) + " (want 1)");
  } catch (const std::exception& e) {
    c.expect(false, std::string("small circle: exception: ") + e.what());
  }
  c.finish("condition (D) windings");
}

// ---------------------------------------------------------------- criterion 4
void criterion_oracle() {
  Criterion c{4};
  struct Case {
    const char* label;
    ModelSpec spec;
  };
  std::vector<Case> cases = {{"burgers-linear eps=0.1", preset_burgers_linear(0.1)},
                             {"burgers-linear eps=0.2", preset_burgers_linear(0.2)},
                             {"cubic-M eps=0.05", preset_cubic_m(0.05)}};
  for (auto& cs : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Profile p = build_profile(cs.spec);
      OracleOptions opt;
      opt.n = 2000;
      auto rep = integrated_eigen_oracle(p, opt);
      c.expect(rep.unstable.empty(),
               std::string(cs.label) + ": unstable eigenvalues = " +
                   num(static_cast<double>(rep.unstable.size())) +
                   " (want 0, matching winding)");
      const double dt = seconds_since(t0);
      c.expect(dt < 300.0, std::string(cs.label) + ": runtime " + num(dt) + " s < 300 s");
    } catch (const std::exception& e) {
      c.expect(false, std::string(cs.label) + ": exception: " + e.what());
    }
  }
  c.finish("discretized-operator oracle agreement");
}

// ------------------------------------------------------------ criteria 5 and 6
void criterion_decay_energy() {
  Criterion c5{5};
  Criterion c6{6};
  try {
    Profile p = build_profile(preset_burgers_linear(0.2));
    SimRunOptions o;
    o.h = 0.02;
    o.t_final = 400.0;
    o.k_energy = 1;
    const auto t0 = std::chrono::steady_clock::now();
    SimSeries run = run_simulation(p, o);
    DecayReport d = measure_decay(run);
    c5.expect(!run.guard_tripped, "perturbation guard not tripped");
    c5.expect(d.exp_linf > 0.35 && d.exp_linf < 0.65,
              "Linf exponent " + num(d.exp_linf) + " in [0.35, 0.65]");
    c5.expect(d.exp_l2 > 0.13 && d.exp_l2 < 0.37,
              "L2 exponent " + num(d.exp_l2) + " in [0.13, 0.37]");
    c5.expect(d.exp_alpha_dot > 0.35 && d.exp_alpha_dot < 0.65,
              "alpha-dot exponent " + num(d.exp_alpha_dot) + " in [0.35, 0.65]");
    c5.expect(d.sup_alpha < 1.0, "sup |alpha| = " + num(d.sup_alpha) + " bounded");

    // Stability of the fit under halving h.
    SimRunOptions oh = o;
    oh.h = 0.01;
    SimSeries run2 = run_simulation(p, oh);
    DecayReport d2 = measure_decay(run2);
    c5.expect(std::abs(d2.exp_linf - d.exp_linf) < 0.03,
              "Linf exponent shift under h/2: " + num(std::abs(d2.exp_linf - d.exp_linf)) +
                  " < 0.03");
    c5.expect(std::abs(d2.exp_l2 - d.exp_l2) < 0.03,
              "L2 exponent shift under h/2: " + num(std::abs(d2.exp_l2 - d.exp_l2)) +
                  " < 0.03");
    c5.expect(std::abs(d2.exp_alpha_dot - d.exp_alpha_dot) < 0.03,
              "alpha-dot exponent shift under h/2: " +
                  num(std::abs(d2.exp_alpha_dot - d.exp_alpha_dot)) + " < 0.03");
    const double dt = seconds_since(t0);
    c5.expect(dt < 900.0, "runtime " + num(dt) + " s < 900 s");

    EnergyReport e = energy_monitor(run);
    c6.expect(e.violations == 0,
              "damping-inequality violations = " + num(e.violations) + " (5% slack)");
    c6.expect(e.eta3 > 0.0, "fitted eta3 = " + num(e.eta3) + " > 0");
    c6.expect(e.ratio_min > 0.0 && e.ratio_max / e.ratio_min < 100.0,
              "E / |u|_{H1}^2 ratio band [" + num(e.ratio_min) + ", " + num(e.ratio_max) +
                  "] bounded");
  } catch (const std::exception& e) {
    c5.expect(false, std::string("exception: ") + e.what());
    c6.expect(false, std::string("exception: ") + e.what());
  }
  c5.finish("nonlinear decay rates");
  c6.finish("energy damping along the run");
}

// ---------------------------------------------------------------- criterion 7
void criterion_resolvent() {
  Criterion c{7};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Profile p = build_profile(preset_burgers_linear(0.2));
    ResolventSource src;
    std::vector<double> ratios;
    for (double tau : {10.0, 20.0, 40.0, 80.0}) {
      auto r = resolvent_probe(p, cplx(0.0, tau), src);
      c.expect(r.residual < 1e-8, "residual at |lambda|=" + num(tau) + ": " + num(r.residual));
      ratios.push_back(r.ratio);
    }
    double lo = ratios[0], hi = ratios[0];
    for (double r : ratios) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    c.expect(hi / lo < 2.0,
             "scaled ratio spread " + num(hi / lo) + " < 2 over lambda = i{10,20,40,80}");
    const double dt = seconds_since(t0);
    c.expect(dt < 60.0, "runtime " + num(dt) + " s < 60 s");
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  c.finish("high-frequency resolvent scaling");
}

// ---------------------------------------------------------------- criterion 8
void criterion_properties() {
  Criterion c{8};
  try {
    Profile p = build_profile(preset_burgers_linear(0.2));

    // Determinant multilinearity: scaling a column by a power of two scales
    // the raw determinant exactly.
    {
      std::array<std::array<cplx, 3>, 3> mcols = {{{cplx(0.3, 0.1), cplx(-1.0), cplx(0.2)},
                                                   {cplx(1.0), cplx(0.5, -2.0), cplx(0.0)},
                                                   {cplx(0.0), cplx(0.25), cplx(1.5)}}};
      const cplx d0 = det3(mcols);
      for (auto& row : mcols) row[1] *= 4.0;
      c.expect(det3(mcols) == 4.0 * d0, "determinant column rescaling exact (factor 4)");
    }

    // Conjugate symmetry of both Evans functions.
    {
      const cplx lam(0.013, 0.021);
      auto a = evans_both(p, lam);
      auto b = evans_both(p, std::conj(lam));
      const double errm = std::abs(b.minus.D - std::conj(a.minus.D));
      const double errp = std::abs(b.plus.D - std::conj(a.plus.D));
      c.expect(errm < 1e-10 && errp < 1e-10,
               "conjugate symmetry error " + num(std::max(errm, errp)) + " < 1e-10");
    }

    // Representative invariance: adding a multiple of the fast column to an
    // outer column leaves the normalized determinant unchanged.
    {
      const cplx lam(0.02, 0.0);
      auto basis = local_basis_near_zero(p, lam, -1);
      auto w2 = integrate_mode(p, basis.fast, -basis.delta0, -1.0);
      auto w1 = seed_at_infinity(p, +1, lam, 3);
      w1 = integrate_mode(p, w1, p.X_inf, kSingularBand);
      w1 = cross_singularity(p, w1);
      w1 = integrate_mode(p, w1, -kSingularBand, -1.0);
      auto w3 = seed_at_infinity(p, -1, lam, 3);
      w3 = integrate_mode(p, w3, -p.X_inf, -1.0);
      auto unit = [](std::array<cplx, 3> v) {
        double n = 0.0;
        for (auto& x : v) n += std::norm(x);
        n = std::sqrt(n);
        for (auto& x : v) x /= n;
        return v;
      };
      auto u1 = unit(w1.W), u2 = unit(w2.W), u3 = unit(w3.W);
      const cplx d_ref = det3({u1, u2, u3});
      std::array<cplx, 3> mixed = u1;
      for (int i = 0; i < 3; ++i) mixed[i] += 0.5 * u2[i];
      const cplx d_mixed = det3({mixed, u2, u3});
      c.expect(std::abs(d_mixed - d_ref) < 1e-8,
               "fast-column addition invariance " + num(std::abs(d_mixed - d_ref)) +
                   " < 1e-8");
    }

    // Discrete conservation of the finite-volume step.
    {
      SimState s = make_profile_state(p, 40.0, 0.05);
      for (std::size_t i = 0; i < s.u.size(); ++i)
        s.u[i] += 1e-3 * std::exp(-0.5 * std::pow(s.g.center(i) - 3.0, 2));
      elliptic_solve(p.spec, s);
      double mass0 = 0.0;
      for (double v : s.u) mass0 += v * s.g.h;
      hyperbolic_step(p.spec, s, 0.05);
      double mass1 = 0.0;
      for (double v : s.u) mass1 += v * s.g.h;
      const double err = std::abs(mass1 - mass0 - s.last_mass_flux);
      c.expect(err < 1e-12, "conservation defect " + num(err) + " < 1e-12");
    }

    // CLI determinism: identical config -> byte-identical outputs.
    {
      RunConfig cfg;
      cfg.preset = "burgers-linear";
      cfg.eps = 0.2;
      cfg.out_dir = "acc_cli_a";
      const int rc1 = cmd_profile(cfg);
      cfg.out_dir = "acc_cli_b";
      const int rc2 = cmd_profile(cfg);
      const std::string a = read_text_file("acc_cli_a/profile.csv");
      const std::string b = read_text_file("acc_cli_b/profile.csv");
      const std::string ja = read_text_file("acc_cli_a/profile.json");
      const std::string jb = read_text_file("acc_cli_b/profile.json");
      c.expect(rc1 == 0 && rc2 == 0 && a == b && ja == jb,
               "profile command outputs byte-identical across reruns");
    }
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  c.finish("cross-module property suite");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  const bool all = which == "all";
  if (all || which == "1") criterion_profile();
  if (all || which == "2") criterion_evans_origin();
  if (all || which == "3") criterion_condition_d();
  if (all || which == "4") criterion_oracle();
  if (all || which == "56" || which == "5" || which == "6") criterion_decay_energy();
  if (all || which == "7") criterion_resolvent();
  if (all || which == "8") criterion_properties();
  return g_failures == 0 ? 0 : 1;
}
