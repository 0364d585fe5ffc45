#include "rgshock/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rgs {

EndState end_state(const ModelSpec& spec, int side) {
  if (side != 1 && side != -1) throw std::invalid_argument("end_state: side must be +1 or -1");
  const double u = (side > 0) ? spec.u_plus : spec.u_minus;
  return EndState{spec.df(u), spec.dM(u)};
}

std::array<std::array<cplx, 3>, 3> limit_matrix(const ModelSpec& spec, int side,
                                                cplx lambda) {
  const EndState es = end_state(spec, side);
  const double a = es.a, Lb = spec.L * es.b;
  std::array<std::array<cplx, 3>, 3> B{};
  B[0] = {-(lambda + Lb) / a, cplx(0.0), cplx(spec.L / a)};
  B[1] = {cplx(es.b), cplx(0.0), cplx(-1.0)};
  B[2] = {cplx(0.0), cplx(-1.0), cplx(0.0)};
  return B;
}

namespace {

// Roots of the frozen characteristic cubic at a given lambda (unlabeled).
std::array<cplx, 3> raw_roots(double a, double Lb, cplx lambda) {
  return cubic_roots((lambda + Lb) / a, cplx(-1.0), -lambda / a);
}

double min_pairwise_gap(const std::array<cplx, 3>& r) {
  return std::min({std::abs(r[0] - r[1]), std::abs(r[0] - r[2]), std::abs(r[1] - r[2])});
}

// Assign the unordered triple `next` to the labels of `prev` by minimizing the
// total displacement over all six permutations.
std::array<cplx, 3> match_labels(const std::array<cplx, 3>& prev,
                                 const std::array<cplx, 3>& next, double* worst) {
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  double best = -1.0;
  std::array<cplx, 3> out{};
  double best_worst = 0.0;
  for (const auto& pm : perms) {
    double cost = 0.0, w = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double d = std::abs(next[pm[i]] - prev[i]);
      cost += d;
      w = std::max(w, d);
    }
    if (best < 0.0 || cost < best) {
      best = cost;
      best_worst = w;
      for (int i = 0; i < 3; ++i) out[i] = next[pm[i]];
    }
  }
  if (worst) *worst = best_worst;
  return out;
}

}  // namespace

ModeSet char_roots(const ModelSpec& spec, int side, cplx lambda) {
  const EndState es = end_state(spec, side);
  const double a = es.a, b = es.b;
  const double Lb = spec.L * b;
  if (!(Lb > 0.0)) throw std::runtime_error("char_roots: L*dM must be positive at the end state");

  ModeSet ms;
  ms.side = side;
  ms.lambda = lambda;
  ms.a = a;
  ms.b = b;
  const double k = Lb / a;  // negative on the plus side, positive on the minus side
  const double root = std::sqrt(k * k + 4.0);
  ms.theta1 = 0.5 * (root + std::abs(k));
  ms.theta3 = 0.5 * (root - std::abs(k));

  std::array<cplx, 3> anchors = {cplx(side * ms.theta1), cplx(0.0),
                                 cplx(-side * ms.theta3)};
  if (lambda == cplx(0.0)) {
    ms.mu = anchors;
  } else {
    // Track labels along the straight path s -> s*lambda, refining the step
    // count whenever a step moves a root by a large fraction of the current
    // pairwise gap (nearest-match would then be ambiguous).
    int n = 8;
    const int n_max = 4096;
    bool ok = false;
    while (!ok) {
      std::array<cplx, 3> prev = anchors;
      ok = true;
      for (int i = 1; i <= n; ++i) {
        const cplx lam = lambda * (static_cast<double>(i) / n);
        const auto next = raw_roots(a, Lb, lam);
        if (min_pairwise_gap(next) < 1e-9) {
          throw std::runtime_error(
              "char_roots: characteristic roots collide along the labeling path");
        }
        double worst = 0.0;
        const auto labeled = match_labels(prev, next, &worst);
        if (worst > 0.45 * min_pairwise_gap(prev) && n < n_max) {
          n *= 2;
          ok = false;
          break;
        }
        prev = labeled;
      }
      if (ok) {
        ms.mu = prev;
        break;
      }
    }
  }

  // Root-product identity: mu1*mu2*mu3 = lambda / a.
  const cplx prod = ms.mu[0] * ms.mu[1] * ms.mu[2];
  const cplx want = lambda / a;
  if (std::abs(prod - want) > 1e-12 * std::max(1.0, std::abs(want))) {
    throw std::runtime_error("char_roots: root product identity violated");
  }

  for (int j = 0; j < 3; ++j) {
    const cplx mu = ms.mu[j];
    ms.V[j] = {(1.0 - mu * mu) / b, -mu, cplx(1.0)};
  }
  return ms;
}

std::pair<int, int> splitting_dimensions(const ModelSpec& spec, int side, cplx lambda) {
  const ModeSet ms = char_roots(spec, side, lambda);
  int np = 0, nm = 0;
  for (const cplx& mu : ms.mu) {
    if (std::abs(mu.real()) < 1e-12) {
      throw std::runtime_error(
          "splitting_dimensions: root with vanishing real part (splitting degenerates)");
    }
    (mu.real() > 0.0 ? np : nm)++;
  }
  return {np, nm};
}

cplx dispersion_lambda(const ModelSpec& spec, int side, double xi) {
  const EndState es = end_state(spec, side);
  return cplx(-spec.L * es.b * xi * xi / (1.0 + xi * xi), -es.a * xi);
}

double essential_spectrum_margin(const ModelSpec& spec, cplx lambda) {
  double best = std::numeric_limits<double>::infinity();
  for (int side : {+1, -1}) {
    // Coarse scan with xi = tan(theta) covering the whole line, then a golden
    // refinement of the best bracket.
    const int n = 2001;
    double best_t = 0.0, best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double t = -1.5607 + 3.1214 * i / (n - 1);
      const double d = std::abs(lambda - dispersion_lambda(spec, side, std::tan(t)));
      if (d < best_d) {
        best_d = d;
        best_t = t;
      }
    }
    const double dt = 3.1214 / (n - 1);
    const double t_ref = golden_min(
        [&](double t) { return std::abs(lambda - dispersion_lambda(spec, side, std::tan(t))); },
        best_t - dt, best_t + dt, 1e-12);
    best = std::min({best, best_d,
                     std::abs(lambda - dispersion_lambda(spec, side, std::tan(t_ref)))});
  }
  return best;
}

}  // namespace rgs
