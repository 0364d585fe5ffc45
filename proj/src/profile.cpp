#include "rgshock/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rgs {

namespace {

double lm(const ModelSpec& s, double u) { return s.L * s.M(u); }

// Evaluate the k-th derivative of a series at x.
double series_eval_kth(const Series& s, double x, int k) {
  double r = 0.0;
  for (std::size_t j = s.c.size(); j-- > std::size_t(k);) {
    double fac = 1.0;
    for (int i = 0; i < k; ++i) fac *= double(j - i);
    r = r * x + fac * s.c[j];
    if (j == std::size_t(k)) break;
  }
  return r;
}

// Piecewise cubic Hermite through (x_k, y_k) with prescribed slopes s_k.
// Unlike a shape-limited interpolant this keeps full fourth-order accuracy,
// which the trajectory matching needs; inputs may be descending.
struct HermiteCurve {
  std::vector<double> x, y, s;
  HermiteCurve(std::vector<double> xs, std::vector<double> ys,
               std::vector<double> ss)
      : x(std::move(xs)), y(std::move(ys)), s(std::move(ss)) {
    if (x.size() < 2 || x.size() != y.size() || x.size() != s.size())
      throw std::invalid_argument("HermiteCurve: bad sample arrays");
    if (x.front() > x.back()) {
      std::reverse(x.begin(), x.end());
      std::reverse(y.begin(), y.end());
      std::reverse(s.begin(), s.end());
    }
  }
  double lo() const { return x.front(); }
  double hi() const { return x.back(); }
  double operator()(double t) const {
    const double tc = std::clamp(t, x.front(), x.back());
    std::size_t i =
        std::upper_bound(x.begin(), x.end(), tc) - x.begin();
    i = std::clamp<std::size_t>(i, 1, x.size() - 1) - 1;
    const double h = x[i + 1] - x[i];
    const double th = (tc - x[i]) / h;
    const double t2 = th * th, t3 = t2 * th;
    return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + th) * h * s[i] +
           (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h * s[i + 1];
  }
};

}  // namespace

// ------------------------------------------------------------ flux geometry

double FluxGeometry::h_plus(double Y) const {
  const double Yc = std::clamp(Y, -m, 0.0);
  if (Yc >= 0.0) return spec.u_plus;
  if (Yc <= -m) return u_star;
  auto g = [&](double u) { return F(u) - Yc; };
  return brent_root(g, spec.u_plus, u_star, 1e-15);
}

double FluxGeometry::h_minus(double Y) const {
  const double Yc = std::clamp(Y, -m, 0.0);
  if (Yc >= 0.0) return spec.u_minus;
  if (Yc <= -m) return u_star;
  auto g = [&](double u) { return F(u) - Yc; };
  return brent_root(g, u_star, spec.u_minus, 1e-15);
}

double FluxGeometry::H(double w) const {
  const double pad = 0.5 * (spec.u_minus - spec.u_plus);
  auto g = [&](double u) { return lm(spec, u) - w; };
  return brent_root(g, spec.u_plus - pad, spec.u_minus + pad, 1e-15);
}

FluxGeometry flux_geometry(const ModelSpec& spec) {
  FluxGeometry g;
  g.spec = spec;
  const double dlo = spec.df(spec.u_plus), dhi = spec.df(spec.u_minus);
  if (!(dlo < 0.0 && dhi > 0.0))
    throw std::runtime_error(
        "flux_geometry: df does not change sign on (u_plus, u_minus); "
        "entropy/convexity violated upstream");
  g.u_star = brent_root([&](double u) { return spec.df(u); }, spec.u_plus,
                        spec.u_minus, 1e-15);
  // Rankine-Hugoniot makes the end-state fluxes agree; use their mean.
  g.f_end = 0.5 * (spec.f(spec.u_plus) + spec.f(spec.u_minus));
  g.m = g.f_end - spec.f(g.u_star);
  if (!(g.m > 0.0))
    throw std::runtime_error("flux_geometry: flux well depth m <= 0");
  return g;
}

// --------------------------------------------------------- saddle shooting

PhaseTrajectory shoot_saddle(const ModelSpec& spec, int side, double step,
                             int eigendirection_override) {
  if (side != +1 && side != -1)
    throw std::invalid_argument("shoot_saddle: side must be +1 or -1");
  if (!(step > 0.0)) throw std::invalid_argument("shoot_saddle: step <= 0");
  FluxGeometry geo = flux_geometry(spec);
  const double u_end = side > 0 ? spec.u_plus : spec.u_minus;
  const double z_saddle = lm(spec, u_end);
  const double a_end = spec.df(u_end);
  const double b_end = spec.dM(u_end);

  // Saddle eigenvalues: roots of mu^2 + (L b/a) mu - 1 = 0.
  const auto mu = quadratic_roots(spec.L * b_end / a_end, -1.0);
  // For the plus side we follow the stable direction backwards in x, for the
  // minus side the unstable direction forwards; in the internal time tau the
  // trajectory always leaves the saddle with Y < 0.
  double mu_dir;
  if (side > 0)
    mu_dir = std::min(mu[0].real(), mu[1].real());  // stable (negative) root
  else
    mu_dir = std::max(mu[0].real(), mu[1].real());  // unstable (positive) root

  const double e = side > 0 ? -1.0 : +1.0;  // dx/dtau
  const double offset =
      1e-7 * std::abs(lm(spec, spec.u_minus) - lm(spec, spec.u_plus));

  // Launch displacement along (1, mu_dir); sign chosen so Y < 0 immediately
  // and Z lies on the heteroclinic side of the saddle.
  double dz = offset, dy = offset * mu_dir;
  if (side > 0) {
    // plus side: Z > LM(u_plus), and mu_dir < 0 already gives dy < 0.
  } else {
    // minus side: Z < LM(u_minus), flip the displacement.
    dz = -offset;
    dy = -offset * mu_dir;
  }
  if (eigendirection_override < 0) {
    // Validation hook: launch along the opposite branch of the eigenline,
    // which exits the Z' <= 0 strip immediately.
    dz = -dz;
    dy = -dy;
  }

  auto h_side = [&](double Y) {
    return side > 0 ? geo.h_plus(Y) : geo.h_minus(Y);
  };
  auto rhs = [&](double, const OdeState<double, 2>& y,
                 OdeState<double, 2>& dydt) {
    const double Y = std::min(y[1], 0.0);
    dydt[0] = e * y[1];
    dydt[1] = e * (y[0] - lm(spec, h_side(Y)));
  };

  PhaseTrajectory tr;
  tr.side = side;
  // Hand over to the analytic terminal continuation while the branch inverse
  // h_side is still well conditioned (dU/dY = 1/a blows up at Y = -m).
  const double delta_stop = std::max(1e-9, 1e-4 * geo.m);
  const double y_stop_level = -geo.m + delta_stop;

  // U-parametrized graph sample with exact slopes (dY/dU = a, dZ/dU = Ya/P).
  auto record_graph = [&](double u, double y, double z) {
    if (!tr.Ug.empty() && std::abs(u - tr.Ug.back()) < 1e-14) return;
    const double P = z - lm(spec, u);
    tr.Ug.push_back(u);
    tr.Yg.push_back(y);
    tr.Zg.push_back(z);
    tr.dYdU.push_back(spec.df(u));
    tr.dZdU.push_back(y * spec.df(u) / P);
  };
  auto record = [&](double z, double y) {
    tr.Z.push_back(z);
    tr.Y.push_back(y);
    record_graph(h_side(y), y, z);
  };

  OdeState<double, 2> state{z_saddle + dz, dy};
  record(state[0], state[1]);

  // Manual drive so we can bisect onto the stopping level.
  double tau = 0.0, h = std::min(step, 1e-3);
  const double z_lo = std::min(lm(spec, spec.u_plus), lm(spec, spec.u_minus));
  const double z_hi = std::max(lm(spec, spec.u_plus), lm(spec, spec.u_minus));
  const double z_slack = 0.1 * std::max(1e-12, z_hi - z_lo) + 10 * offset;
  int accepted = 0;
  const int budget = 2000000;
  bool located = false;
  for (int it = 0; it < budget; ++it) {
    h = std::min(h, step);
    OdeState<double, 2> ynew;
    double err = 0.0;
    const bool ok =
        rk45_try_step(rhs, tau, state, h, ynew, err, 1e-14, 1e-16);
    if (!ok) {
      h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
      continue;
    }
    if (ynew[1] <= y_stop_level) {
      // Crossed the stopping level inside this step: shrink the step until
      // we land just past the level, keeping the pre-step state.
      if (h < 1e-14) {
        state = ynew;
        located = true;
        break;
      }
      double hb = h;
      for (int b = 0; b < 80 && hb > 1e-14; ++b) {
        OdeState<double, 2> ymid;
        double e2 = 0.0;
        rk45_try_step(rhs, tau, state, hb / 2, ymid, e2, 1e-14, 1e-16);
        if (ymid[1] <= y_stop_level) {
          hb /= 2;
          ynew = ymid;
        } else {
          tau += hb / 2;
          state = ymid;
        }
        if (state[1] - y_stop_level < 0.5 * delta_stop) break;
      }
      state = ynew;
      located = true;
      break;
    }
    tau += h;
    state = ynew;
    ++accepted;
    // Wrong eigendirection shows up immediately as Y > 0.
    if (accepted <= 10 && state[1] > 0.0)
      throw std::runtime_error(
          "shoot_saddle: Z' > 0 right after launch "
          "(wrong eigendirection sign)");
    if (state[1] > 10 * offset)
      throw std::runtime_error(
          "shoot_saddle: trajectory exited the Z' <= 0 strip");
    if (state[0] < z_lo - z_slack || state[0] > z_hi + z_slack)
      throw std::runtime_error("shoot_saddle: trajectory left the Z window");
    if (tr.Y.back() - state[1] > 1e-15) record(state[0], state[1]);
    const double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, grow));
  }
  if (!located)
    throw std::runtime_error(
        "shoot_saddle: failed to reach Z' = -m within step budget");

  if (tr.Y.back() - state[1] > 1e-15) record(state[0], state[1]);
  tr.Y_stop = state[1];

  // Continue the terminal stretch in U.  Expansions in the flow time
  // degenerate when the branch meets the corner tangentially
  // (U - u* ~ sqrt(Y + m)), and Taylor models are poisoned by the
  // (U/Us)^(S/|s|) branch structure of neighbouring solutions, but the
  // graph Z(U) obeys the non-stiff scalar ODE
  //   dZ/dU = Y(U) a(U) / P,   P := Z - L M(U) = a U',  Y := f(U) - f_end,
  // whose flow contracts transversal errors like (U/Us)^(S/|s|), so direct
  // integration from the hand-over point to the corner is self-correcting.
  {
    const double Zs = state[0], Ys = state[1];
    const double Us = h_side(Ys);
    const double P0 = Zs - lm(spec, Us);
    tr.Zpp_stop = P0;
    if (std::abs(P0) < 1e-13 * std::max(1.0, std::abs(z_hi - z_lo)))
      throw std::runtime_error(
          "shoot_saddle: degenerate hand-over point (P = 0 before Y = -m)");

    const double dU_total = geo.u_star - Us;
    const double dir = dU_total >= 0.0 ? 1.0 : -1.0;
    const double span = std::abs(dU_total);
    auto slope = [&](double t, const OdeState<double, 1>& y,
                     OdeState<double, 1>& d) {
      const double U = Us + dir * t;
      d[0] = dir * geo.F(U) * spec.df(U) / (y[0] - lm(spec, U));
    };
    const double t_end = span * (1.0 - 1e-8);  // leave an analytic nub
    OdeState<double, 1> zy{Zs};
    double t = 0.0, hz = 0.01 * span;
    for (int it = 0; it < 100000 && t < t_end; ++it) {
      hz = std::min(hz, t_end - t);
      OdeState<double, 1> zn;
      double errz = 0.0;
      if (!rk45_try_step(slope, t, zy, hz, zn, errz, 1e-13, 1e-16)) {
        hz *= std::max(0.1, 0.9 * std::pow(errz, -0.25));
        continue;
      }
      t += hz;
      zy = zn;
      const double Uc = Us + dir * t;
      record_graph(Uc, geo.F(Uc), zy[0]);
      const double g = errz > 0 ? 0.9 * std::pow(errz, -0.2) : 5.0;
      hz *= std::min(5.0, std::max(0.2, g));
    }
    if (t < t_end)
      throw std::runtime_error(
          "shoot_saddle: terminal continuation exhausted its step budget");
    // Close the nub with one slope evaluation (S is analytic there).
    const double U_f = Us + dir * t;
    const double S_f = geo.F(U_f) * spec.df(U_f) / (zy[0] - lm(spec, U_f));
    tr.Z_terminal = zy[0] + S_f * (geo.u_star - U_f);
    // Corner graph sample; at a tangential (smooth) corner P -> 0 and the
    // slope limit is the nub slope S_f, otherwise Ya/P with a(u*) = 0.
    const double P_T = tr.Z_terminal - lm(spec, geo.u_star);
    tr.Ug.push_back(geo.u_star);
    tr.Yg.push_back(-geo.m);
    tr.Zg.push_back(tr.Z_terminal);
    tr.dYdU.push_back(spec.df(geo.u_star));
    tr.dZdU.push_back(std::abs(P_T) > 1e-10 * std::max(1.0, z_hi - z_lo)
                          ? -geo.m * spec.df(geo.u_star) / P_T
                          : S_f);
    // Append the terminal point so the matching graphs span the full range.
    if (tr.Y.back() > -geo.m) {
      tr.Z.push_back(tr.Z_terminal);
      tr.Y.push_back(-geo.m);
    }
  }
  tr.reached_terminal = true;
  return tr;
}

// ----------------------------------------------------------------- matching

MatchResult match_trajectories(const PhaseTrajectory& tp,
                               const PhaseTrajectory& tm) {
  if (tp.side == tm.side)
    throw std::runtime_error(
        "match_trajectories: trajectories from the same side (no transversal "
        "intersection)");
  const PhaseTrajectory& plus = tp.side > 0 ? tp : tm;
  const PhaseTrajectory& minus = tp.side > 0 ? tm : tp;
  if (!plus.reached_terminal || !minus.reached_terminal)
    throw std::runtime_error("match_trajectories: trajectory did not reach "
                             "the terminal level");

  if (plus.Ug.size() < 4 || minus.Ug.size() < 4)
    throw std::runtime_error(
        "match_trajectories: trajectories carry too few graph samples");

  // Interpolate each orbit in its U-parametrization (exact slopes recorded
  // at shoot time).  Z(Y) develops a sqrt branch at the corner level Y = -m,
  // so interpolating in Y there loses accuracy exactly where a weak subshock
  // intersection sits; U-space stays analytic through the corner approach.
  const HermiteCurve Yp(plus.Ug, plus.Yg, plus.dYdU);
  const HermiteCurve Zp(plus.Ug, plus.Zg, plus.dZdU);
  const HermiteCurve Ym(minus.Ug, minus.Yg, minus.dYdU);
  const HermiteCurve Zm(minus.Ug, minus.Zg, minus.dZdU);
  auto u_at = [&](const HermiteCurve& Yc, double ylevel) {
    return brent_root([&](double u) { return Yc(u) - ylevel; }, Yc.lo(),
                      Yc.hi(), 1e-15);
  };
  auto z_minus = [&](double y) { return Zm(u_at(Ym, y)); };
  auto z_plus = [&](double y) { return Zp(u_at(Yp, y)); };

  const double y_top = std::min(plus.Y.front(), minus.Y.front());
  const double y_bot = std::max(plus.Y.back(), minus.Y.back());
  const double scale = std::abs(z_minus(y_top) - z_plus(y_top));
  if (!(z_minus(y_top) - z_plus(y_top) > 0.0))
    throw std::runtime_error(
        "match_trajectories: bracketing failed near the saddles (probable "
        "upstream integration failure)");

  const double delta_terminal = minus.Z_terminal - plus.Z_terminal;
  const double tol = 1e-8 * std::max(1.0, scale);

  MatchResult res;
  if (std::abs(delta_terminal) <= tol) {
    res.subshock = false;
    res.Y_hat = plus.Y.back();  // == -m up to the stopping tolerance
    res.Z_hat = 0.5 * (plus.Z_terminal + minus.Z_terminal);
    return res;
  }
  if (delta_terminal > tol)
    throw std::runtime_error(
        "match_trajectories: graphs do not intersect (minus-branch stays "
        "above plus-branch); upstream integration failure");

  // Interior transversal intersection: the difference is increasing in Y,
  // negative at the bottom and positive near the saddles.
  auto diff = [&](double y) { return z_minus(y) - z_plus(y); };
  res.subshock = true;
  res.Y_hat = brent_root(diff, y_bot, y_top, 1e-14);
  res.Z_hat = 0.5 * (z_minus(res.Y_hat) + z_plus(res.Y_hat));
  return res;
}

// ------------------------------------------------- Taylor-series machinery

namespace {

// Extends (U, G) series for the flank system U' = G / a(U),
// G' = F(U) - L b(U) U', one order at a time, up to `order`.
void extend_flank_series(const ModelSpec& spec, double f_end, Series& U,
                         Series& G, int order) {
  while (U.order() < std::size_t(order)) {
    const std::size_t n = U.order();  // current top order; compute n+1
    Series A = poly_of_series(spec.df_coeffs, U, n);
    Series ratio = series_div(G, A, n);
    U.c.push_back(ratio[n] / double(n + 1));
    Series F = poly_of_series(spec.f_coeffs, U, n);
    F.c[0] -= f_end;
    Series B = poly_of_series(spec.dM_coeffs, U, n);
    Series Up = series_derivative(U);
    Series BUp = series_mul(B, Up, n);
    G.c.push_back((F[n] - spec.L * BUp[n]) / double(n + 1));
  }
}

// Power series of U about the sonic corner of a smooth profile, built from
// U(0) = u_star, U'(0) = slope by matching orders in
// (f(U))'' = (f(U) - f_end) + L (M(U))'' ... i.e. F'' - F + L psi' = 0.
Series corner_series(const ModelSpec& spec, double f_end, double u_star,
                     double slope, int order) {
  Series U(0);
  U.c = {u_star, slope};
  for (int n = 1; int(U.order()) < order; ++n) {
    // The order-n residual of F'' - F + L psi' is affine in U_{n+1}.
    auto residual = [&](double t) {
      Series Ut = U;
      Ut.c.push_back(t);
      Series F = poly_of_series(spec.f_coeffs, Ut, n + 2);
      F.c[0] -= f_end;
      Series psi = poly_of_series(spec.M_coeffs, Ut, n + 1);
      return double(n + 2) * double(n + 1) * F[n + 2] - F[n] +
             spec.L * double(n + 1) * psi[n + 1];
    };
    const double r0 = residual(0.0), r1 = residual(1.0);
    const double den = r1 - r0;
    // The slope degenerates at high order when (n+2) a'(0) approaches
    // -L b(0); stop extending there (the step-size control compensates).
    if (std::abs(den) < 1e-9 * double(n + 1)) break;
    U.c.push_back(-r0 / den);
  }
  return U;
}

// Step-size estimate from the decay of the top series coefficients.
double series_step_from_decay(const Series& U, double tol_abs, double h_cap) {
  double h = h_cap;
  const std::size_t p = U.order();
  for (std::size_t k = (p > 5 ? p - 4 : 1); k <= p; ++k) {
    const double ck = std::abs(U[k]);
    if (ck < 1e-300) continue;
    h = std::min(h, std::pow(tol_abs / ck, 1.0 / double(k)));
  }
  return h;
}

struct FlankResult {
  std::vector<ProfileCell> cells;  // inner to outer order
  double x_tail = 0.0;             // hand-off abscissa
  double u_tail = 0.0;             // U at hand-off
};

// Rebuilds a flank from the recorded phase-plane samples.  Marching the
// flank ODE outward is exponentially unstable (the end state is a saddle
// whose fast rate grows like L b / a near the corner), so instead every
// Taylor cell is anchored on trajectory data: the samples are mapped to x
// by Hermite quadrature of dx = (a / P) dU -- an integrand that stays
// smooth through the corner where a and P vanish together -- and the cell
// series are regenerated from (U_k, P_k) at the chosen centres, never from
// a previous cell's evaluation.  dir = +1 rebuilds the right flank from the
// plus-side trajectory, dir = -1 the left flank.
FlankResult flank_from_trajectory(const ModelSpec& spec,
                                  const FluxGeometry& geo,
                                  const PhaseTrajectory& tr, int dir,
                                  double x_inner, double y_inner,
                                  double u_inner, double p_inner,
                                  const ReconstructOptions& opts) {
  const double u_end = dir > 0 ? spec.u_plus : spec.u_minus;
  std::vector<double> u{u_inner}, pp{p_inner};
  // Recorded order is launch (saddle) -> terminal; reversed = inner -> outer.
  for (std::size_t k = tr.Y.size(); k-- > 0;) {
    const double Yk = tr.Y[k];
    if (!(Yk > y_inner)) continue;
    const double Uk = dir > 0 ? geo.h_plus(Yk) : geo.h_minus(Yk);
    if (std::abs(Uk - u_end) < opts.tail_amplitude) break;
    if (std::abs(Uk - u.back()) < 1e-13) continue;
    u.push_back(Uk);
    pp.push_back(tr.Z[k] - lm(spec, Uk));
  }
  const std::size_t n = u.size();
  if (n < 4)
    throw std::runtime_error(
        "reconstruct_profile: too few usable flank samples");

  // Map the samples to x by per-interval Hermite-cubic quadrature of
  // w(U) = a / P, using w' = (a' P - a P') / P^2 with P' = F a / P - L b.
  // These abscissae only bracket the junctions; the actual junction of each
  // cell is re-solved on the cell's own series below, so U stays continuous
  // to roundoff (the verification differences divide junction jumps by h^2).
  std::vector<double> xs(n), w(n), wp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = spec.df(u[i]);
    const double Pi = pp[i];
    const double Pp = geo.F(u[i]) * a / Pi - spec.L * spec.dM(u[i]);
    w[i] = a / Pi;
    wp[i] = (spec.d2f(u[i]) * Pi - a * Pp) / (Pi * Pi);
  }
  xs[0] = x_inner;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double du = u[i + 1] - u[i];
    xs[i + 1] = xs[i] + du * 0.5 * (w[i] + w[i + 1]) +
                du * du * (wp[i] - wp[i + 1]) / 12.0;
  }

  FlankResult out;
  double xc_cur = x_inner;  // chained (refined) centre of the current cell
  double xe_cur = x_inner;  // quadrature estimate of the same point
  double u_cur = u_inner, p_cur = p_inner;
  std::size_t i = 0;  // outermost sample at or behind the current centre
  while (i + 1 < n) {
    Series U(0), G(0);
    U.c = {u_cur};
    G.c = {p_cur};
    extend_flank_series(spec, geo.f_end, U, G, opts.series_order);
    const double amp = std::max(std::abs(u_cur - u_end), 1e-8);
    const double tol_abs = std::max(1e-17, opts.series_tol * amp);
    const double h_t = series_step_from_decay(U, tol_abs, 10.0);

    // Furthest recorded sample within a conservative fraction of the trust
    // radius.
    std::size_t j = i;
    while (j + 1 < n && std::abs(xs[j + 1] - xe_cur) <= 0.7 * h_t) ++j;

    double xi, u_next, p_next, xe_next;
    if (j > i) {
      // Re-anchor on sample j.  The junction offset is the root of
      // U_series(xi) = u[j], so the next cell starts exactly where this one
      // ends; the quadrature estimate only seeds the bracket.
      const double xi_est = xs[j] - xe_cur;
      double lo = 0.0, hi = xi_est;
      const double g0 = u_cur - u[j];
      int grow = 0;
      while (grow < 60 &&
             (series_eval(U, hi) - u[j]) * g0 > 0.0 &&
             std::abs(hi) < h_t) {
        hi *= 1.25;
        ++grow;
      }
      if ((series_eval(U, hi) - u[j]) * g0 > 0.0)
        throw std::runtime_error(
            "reconstruct_profile: flank junction root not bracketed");
      auto fj = [&](double t) { return series_eval(U, t) - u[j]; };
      xi = hi > lo ? brent_root(fj, lo, hi, 1e-15)
                   : brent_root(fj, hi, lo, 1e-15);
      u_next = u[j];
      p_next = pp[j];
      xe_next = xs[j];
      i = j;
    } else {
      // The next sample sits beyond the trust radius (coarsely sampled
      // trajectory, or a short analyticity radius near the jump of a
      // discontinuous profile).  Bridge the gap with a synthesized centre
      // taken from the current series itself; the marching error this
      // introduces cannot grow, because the chain re-anchors on recorded
      // data after O(spacing / h_t) steps.
      xi = (dir > 0 ? 1.0 : -1.0) * 0.7 * h_t;
      u_next = series_eval(U, xi);
      p_next = series_eval(G, xi);
      xe_next = xe_cur + xi;
      if (std::abs(xi) < 1e-12)
        throw std::runtime_error(
            "reconstruct_profile: flank series trust radius collapsed");
    }

    ProfileCell cell;
    cell.kind = ProfileCell::kSeries;
    cell.xc = xc_cur;
    cell.x0 = dir > 0 ? xc_cur : xc_cur + xi;
    cell.x1 = dir > 0 ? xc_cur + xi : xc_cur;
    cell.U = U;
    cell.G = G;
    out.cells.push_back(cell);
    xc_cur += xi;
    xe_cur = xe_next;
    u_cur = u_next;
    p_cur = p_next;
    if (out.cells.size() > 100000)
      throw std::runtime_error(
          "reconstruct_profile: flank cell budget exhausted");
  }
  out.x_tail = xc_cur;
  out.u_tail = u_cur;
  return out;
}

}  // namespace

// ------------------------------------------------------------ reconstruction

Profile reconstruct_profile(const ModelSpec& spec, const PhaseTrajectory& tp,
                            const PhaseTrajectory& tm, const MatchResult& match,
                            const ReconstructOptions& opts) {
  FluxGeometry geo = flux_geometry(spec);
  Profile p;
  p.spec = spec;
  p.subshock = match.subshock;
  p.u_star = geo.u_star;
  p.m = geo.m;
  p.f_end = geo.f_end;
  p.x_match = 0.0;
  // Internal abscissa of the sonic point / jump during construction; the
  // final normalization below shifts it back to x = 0 and records it.
  const double A = opts.anchor;
  p.shift_applied = A;

  const double d2f0 = spec.d2f(geo.u_star);
  const double b0 = spec.dM(geo.u_star);
  const double disc = spec.L * spec.L * b0 * b0 - 4.0 * d2f0 * geo.m;

  std::vector<ProfileCell> left, right;  // in outward marching order
  double xl_tail = 0.0, xr_tail = 0.0;

  if (!match.subshock) {
    if (disc < 0.0)
      throw std::runtime_error(
          "reconstruct_profile: matching reports a smooth profile but the "
          "corner slope equation has no real root");
    // Corner slope: the less negative root of d2f s^2 + L b0 s + m = 0.
    const auto roots = quadratic_roots(spec.L * b0 / d2f0, geo.m / d2f0);
    const double s = std::max(roots[0].real(), roots[1].real());
    p.corner_slope = s;
    p.u_left0 = p.u_right0 = geo.u_star;

    Series Uc = corner_series(spec, geo.f_end, geo.u_star, s,
                              opts.corner_order);
    Series Fc = poly_of_series(spec.f_coeffs, Uc, Uc.order() + 1);
    Series Gc = series_derivative(Fc);

    double x_loc = series_step_from_decay(
        Uc, 1e-16 * std::max(1.0, std::abs(geo.u_star) + 1.0), 1.0);
    x_loc *= 0.8;
    if (x_loc < 0.025)
      throw std::runtime_error(
          "reconstruct_profile: corner series radius too small");

    // Hand over to the flanks at 0.55 * x_loc, well inside the corner-series
    // trust region but far enough out that a(U) is no longer tiny.
    const double xi_edge = 0.55 * x_loc;
    ProfileCell corner;
    corner.kind = ProfileCell::kSeries;
    corner.xc = A;
    corner.x0 = A - xi_edge;
    corner.x1 = A + xi_edge;
    corner.U = Uc;
    corner.G = Gc;

    const double ur_in = series_eval(Uc, +xi_edge);
    const double ul_in = series_eval(Uc, -xi_edge);
    FlankResult fr = flank_from_trajectory(spec, geo, tp, +1, A + xi_edge,
                                           geo.F(ur_in), ur_in,
                                           series_eval(Gc, +xi_edge), opts);
    FlankResult fl = flank_from_trajectory(spec, geo, tm, -1, A - xi_edge,
                                           geo.F(ul_in), ul_in,
                                           series_eval(Gc, -xi_edge), opts);
    right = std::move(fr.cells);
    left = std::move(fl.cells);
    xr_tail = fr.x_tail;
    xl_tail = fl.x_tail;
    p.cells.push_back(corner);
  } else {
    if (disc >= 0.0)
      throw std::runtime_error(
          "reconstruct_profile: matching reports a subshock but the corner "
          "slope equation has real roots (inconsistent geometry)");
    p.corner_slope = std::numeric_limits<double>::quiet_NaN();
    p.u_left0 = geo.h_minus(match.Y_hat);
    p.u_right0 = geo.h_plus(match.Y_hat);
    const double Gl = match.Z_hat - lm(spec, p.u_left0);
    const double Gr = match.Z_hat - lm(spec, p.u_right0);
    FlankResult fr = flank_from_trajectory(spec, geo, tp, +1, A,
                                           match.Y_hat, p.u_right0, Gr, opts);
    FlankResult fl = flank_from_trajectory(spec, geo, tm, -1, A,
                                           match.Y_hat, p.u_left0, Gl, opts);
    right = std::move(fr.cells);
    left = std::move(fl.cells);
    xr_tail = fr.x_tail;
    xl_tail = fl.x_tail;
  }

  // Linearized tail rates: roots of mu^2 + (L b/a) mu - 1 = 0 at the end
  // states; decaying root on each side.
  {
    const double ap = spec.df(spec.u_plus), bp = spec.dM(spec.u_plus);
    const double am = spec.df(spec.u_minus), bm = spec.dM(spec.u_minus);
    const auto rp = quadratic_roots(spec.L * bp / ap, -1.0);
    const auto rm = quadratic_roots(spec.L * bm / am, -1.0);
    const double mu_p = std::min(rp[0].real(), rp[1].real());  // < 0
    const double mu_m = std::max(rm[0].real(), rm[1].real());  // > 0
    p.eta_plus = -mu_p;
    p.eta_minus = mu_m;

    // Domain end from the slower-decaying side.
    const double amp_r = std::abs(right.empty()
                                      ? p.u_right0 - spec.u_plus
                                      : series_eval(right.back().U,
                                                    right.back().x1 -
                                                        right.back().xc) -
                                            spec.u_plus);
    const double amp_l = std::abs(left.empty()
                                      ? p.u_left0 - spec.u_minus
                                      : series_eval(left.back().U,
                                                    left.back().x0 -
                                                        left.back().xc) -
                                            spec.u_minus);
    double Xr = (xr_tail - A) + std::log(std::max(amp_r, 1e-300) /
                                         opts.x_inf_amplitude) /
                                    p.eta_plus;
    double Xl = (A - xl_tail) + std::log(std::max(amp_l, 1e-300) /
                                         opts.x_inf_amplitude) /
                                    p.eta_minus;
    p.X_inf = std::max(Xr, Xl);

    // Tail cells out to +-X_inf (still in the internal, anchored frame).
    ProfileCell tr_cell;
    tr_cell.kind = ProfileCell::kTail;
    tr_cell.xc = xr_tail;
    tr_cell.x0 = xr_tail;
    tr_cell.x1 = A + p.X_inf;
    tr_cell.mu = mu_p;
    tr_cell.u_end = spec.u_plus;
    tr_cell.a_end = ap;
    {
      const double Ut = right.empty() ? p.u_right0
                                      : series_eval(right.back().U,
                                                    right.back().x1 -
                                                        right.back().xc);
      tr_cell.q_amp = (geo.f_end - spec.f(Ut)) / spec.L;
    }

    ProfileCell tl_cell;
    tl_cell.kind = ProfileCell::kTail;
    tl_cell.xc = xl_tail;
    tl_cell.x0 = A - p.X_inf;
    tl_cell.x1 = xl_tail;
    tl_cell.mu = mu_m;
    tl_cell.u_end = spec.u_minus;
    tl_cell.a_end = am;
    {
      const double Ut = left.empty() ? p.u_left0
                                     : series_eval(left.back().U,
                                                   left.back().x0 -
                                                       left.back().xc);
      tl_cell.q_amp = (geo.f_end - spec.f(Ut)) / spec.L;
    }

    // Assemble cells ordered left to right.
    std::vector<ProfileCell> ordered;
    ordered.push_back(tl_cell);
    for (auto it = left.rbegin(); it != left.rend(); ++it)
      ordered.push_back(*it);
    for (auto& c : p.cells) ordered.push_back(c);  // corner cell if smooth
    for (auto& c : right) ordered.push_back(c);
    ordered.push_back(tr_cell);
    p.cells = std::move(ordered);

    // Normalization: translate so the sonic point / jump sits at x = 0
    // (the internal frame placed it at the anchor abscissa).
    if (A != 0.0) {
      for (auto& c : p.cells) {
        c.xc -= A;
        c.x0 -= A;
        c.x1 -= A;
      }
    }
  }

  // Measured tail rates from the flank cells (amplitude window 1e-6..1e-3).
  auto measure_rate = [&](int dir) {
    const double u_end = dir > 0 ? spec.u_plus : spec.u_minus;
    std::vector<double> xs, ys;
    for (const auto& c : p.cells) {
      if (c.kind != ProfileCell::kSeries) continue;
      const double edge = dir > 0 ? c.x1 : c.x0;
      if (dir > 0 && edge <= 0) continue;
      if (dir < 0 && edge >= 0) continue;
      const double uval = series_eval(c.U, edge - c.xc);
      const double amp = std::abs(uval - u_end);
      if (amp < 1e-6 || amp > 1e-3) continue;
      xs.push_back(edge);
      ys.push_back(std::log(amp));
    }
    if (xs.size() < 4) return std::numeric_limits<double>::quiet_NaN();
    return -double(dir) * fit_line(xs, ys)[0];
  };
  p.eta_measured_plus = measure_rate(+1);
  p.eta_measured_minus = measure_rate(-1);

  // Report grid: ~0.05 spacing inside each cell, with an exact x = 0 node
  // (two coincident nodes for a subshock, carrying the one-sided limits).
  std::vector<double> xs;
  for (const auto& c : p.cells) {
    const double len = c.x1 - c.x0;
    const int nseg = std::max(1, int(std::ceil(len / 0.05)));
    for (int i = 0; i < nseg; ++i) {
      const double x = c.x0 + len * double(i) / double(nseg);
      if (!xs.empty() && x <= xs.back()) continue;
      xs.push_back(x);
    }
  }
  xs.push_back(p.cells.back().x1);
  if (std::find(xs.begin(), xs.end(), 0.0) == xs.end()) {
    auto it = std::upper_bound(xs.begin(), xs.end(), 0.0);
    xs.insert(it, 0.0);
  }
  auto push_node = [&](double x, double uval) {
    p.grid_x.push_back(x);
    p.grid_U.push_back(uval);
    p.grid_Q.push_back((geo.f_end - spec.f(uval)) / spec.L);
    p.grid_a.push_back(spec.df(uval));
    p.grid_b.push_back(spec.dM(uval));
  };
  for (const double x : xs) {
    if (p.subshock && x == 0.0) {
      push_node(0.0, p.u_left0);   // left limit first
      push_node(0.0, p.u_right0);  // then the right limit
      continue;
    }
    push_node(x, p.eval(x).U);
  }
  return p;
}

Profile build_profile(const ModelSpec& spec, double shoot_step,
                      const ReconstructOptions& opts) {
  PhaseTrajectory tp = shoot_saddle(spec, +1, shoot_step);
  PhaseTrajectory tm = shoot_saddle(spec, -1, shoot_step);
  MatchResult mr = match_trajectories(tp, tm);
  return reconstruct_profile(spec, tp, tm, mr, opts);
}

// ------------------------------------------------------------------- eval

const ProfileCell& Profile::cell_at(double x) const {
  // Last cell whose x0 <= x; ties at a subshock pick the right-side cell.
  std::size_t lo = 0, hi = cells.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (cells[mid].x0 <= x)
      lo = mid;
    else
      hi = mid;
  }
  return cells[lo];
}

ProfileField Profile::eval(double x) const {
  const ProfileCell& c = cell_at(x);
  ProfileField f{};
  if (c.kind == ProfileCell::kSeries) {
    const double xi = x - c.xc;
    f.U = series_eval(c.U, xi);
    f.dU = series_eval_derivative(c.U, xi);
    const double G = series_eval(c.G, xi);
    f.Q = (f_end - spec.f(f.U)) / spec.L;
    f.dQ = -G / spec.L;
  } else {
    const double q = c.q_amp * std::exp(c.mu * (x - c.xc));
    f.Q = q;
    f.dQ = c.mu * q;
    f.U = c.u_end - (spec.L / c.a_end) * q;
    f.dU = -(spec.L / c.a_end) * c.mu * q;
  }
  f.a = spec.df(f.U);
  f.da = spec.d2f(f.U) * f.dU;
  f.b = spec.dM(f.U);
  return f;
}

void Profile::eval_derivs(double x, double out_U[4]) const {
  const ProfileCell& c = cell_at(x);
  if (c.kind == ProfileCell::kSeries) {
    const double xi = x - c.xc;
    out_U[0] = series_eval(c.U, xi);
    out_U[1] = series_eval_derivative(c.U, xi);
    out_U[2] = series_eval_second_derivative(c.U, xi);
    out_U[3] = series_eval_kth(c.U, xi, 3);
  } else {
    const double q = c.q_amp * std::exp(c.mu * (x - c.xc));
    const double dev = -(spec.L / c.a_end) * q;
    out_U[0] = c.u_end + dev;
    out_U[1] = c.mu * dev;
    out_U[2] = c.mu * c.mu * dev;
    out_U[3] = c.mu * c.mu * c.mu * dev;
  }
}

// ------------------------------------------------------------- diagnostics

ProfileReport verify_profile(const Profile& p) {
  ProfileReport rep;
  rep.subshock = p.subshock;
  const ModelSpec& spec = p.spec;

  // Discrete residuals of both profile equations on a fine uniform grid.
  const double h = 1e-3;
  const double extent = std::min(20.0, p.X_inf - 1.0);
  rep.residual_grid_h = h;
  rep.residual_extent = extent;
  const int n = int(extent / h);
  std::vector<double> Us(2 * n + 1), Qs(2 * n + 1);
  for (int i = -n; i <= n; ++i) {
    const ProfileField f = p.eval(double(i) * h);
    Us[i + n] = f.U;
    Qs[i + n] = f.Q;
  }
  for (int i = 1; i + 1 < 2 * n + 1; ++i) {
    const double x = double(i - n) * h;
    if (p.subshock && std::abs(x) <= 2 * h) continue;  // stencil across jump
    const double hyp = (spec.f(Us[i + 1]) + spec.L * Qs[i + 1] -
                        spec.f(Us[i - 1]) - spec.L * Qs[i - 1]) /
                       (2 * h);
    const double ell = -(Qs[i + 1] - 2 * Qs[i] + Qs[i - 1]) / (h * h) + Qs[i] +
                       (spec.M(Us[i + 1]) - spec.M(Us[i - 1])) / (2 * h);
    rep.max_residual_hyperbolic =
        std::max(rep.max_residual_hyperbolic, std::abs(hyp));
    rep.max_residual_elliptic =
        std::max(rep.max_residual_elliptic, std::abs(ell));
  }

  // Monotonicity and flux identity over the report grid.
  for (std::size_t i = 0; i + 1 < p.grid_x.size(); ++i) {
    if (p.grid_x[i + 1] == p.grid_x[i]) continue;  // subshock double node
    if (!(p.grid_U[i + 1] < p.grid_U[i])) ++rep.monotonicity_violations;
  }
  for (std::size_t i = 0; i < p.grid_x.size(); ++i) {
    const double lhs = spec.L * p.grid_Q[i];
    const double rhs = p.f_end - spec.f(p.grid_U[i]);
    rep.flux_identity_error =
        std::max(rep.flux_identity_error, std::abs(lhs - rhs));
  }

  rep.u0_error = p.subshock ? 0.0 : std::abs(p.eval(0.0).U - p.u_star);

  // Decay rates of d^k(U - u_end) and d^k Q for k = 0..4 on each flank,
  // fitted on cell junctions in an amplitude window, compared against the
  // linearized rate.
  auto rate_dev = [&](int dir) {
    const double u_end = dir > 0 ? spec.u_plus : spec.u_minus;
    const double eta = dir > 0 ? p.eta_plus : p.eta_minus;
    std::vector<double> xs;
    for (const auto& c : p.cells) {
      if (c.kind != ProfileCell::kSeries) continue;
      const double edge = dir > 0 ? c.x1 : c.x0;
      if (dir > 0 && edge <= 0) continue;
      if (dir < 0 && edge >= 0) continue;
      const double amp = std::abs(series_eval(c.U, edge - c.xc) - u_end);
      if (amp < 1e-7 || amp > 1e-3) continue;
      xs.push_back(edge);
    }
    if (xs.size() < 5) return std::numeric_limits<double>::quiet_NaN();
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) {
      std::vector<double> yu, yq, xg;
      for (const double x : xs) {
        const ProfileCell& c = p.cell_at(dir > 0 ? x - 1e-13 : x + 1e-13);
        const double du = k == 0
                              ? series_eval(c.U, x - c.xc) - u_end
                              : series_eval_kth(c.U, x - c.xc, k);
        // Q derivatives via the flux identity: Q = (f_end - f(U))/L, so
        // dQ = -G/L; higher derivatives from the G series.
        double dq;
        if (k == 0)
          dq = (p.f_end - spec.f(series_eval(c.U, x - c.xc))) / spec.L;
        else
          dq = -series_eval_kth(c.G, x - c.xc, k - 1) / spec.L;
        if (du == 0.0 || dq == 0.0) continue;
        xg.push_back(x);
        yu.push_back(std::log(std::abs(du)));
        yq.push_back(std::log(std::abs(dq)));
      }
      if (xg.size() < 5) continue;
      const double su = -double(dir) * fit_line(xg, yu)[0];
      const double sq = -double(dir) * fit_line(xg, yq)[0];
      worst = std::max(worst, std::abs(su - eta) / eta);
      worst = std::max(worst, std::abs(sq - eta) / eta);
    }
    return worst;
  };
  rep.rate_deviation_plus = rate_dev(+1);
  rep.rate_deviation_minus = rate_dev(-1);
  return rep;
}

}  // namespace rgs
