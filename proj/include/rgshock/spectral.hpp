#pragma once
// Asymptotic spectral data at the profile end states: characteristic roots of
// the first-order (u, q, p) formulation of the eigenvalue problem, labeled
// continuously in lambda, their eigenvectors, consistent-splitting dimension
// counts, and the essential-spectrum dispersion curves.

#include <array>
#include <complex>
#include <utility>

#include "rgshock/model.hpp"
#include "rgshock/numerics.hpp"

namespace rgs {

// Coefficient pair (a, b) = (df, dM) frozen at one end state.
struct EndState {
  double a = 0.0;
  double b = 0.0;
};

// side = +1 for the state at +infinity (u_plus), -1 for -infinity (u_minus).
EndState end_state(const ModelSpec& spec, int side);

// Characteristic roots mu of  mu^3 + (lambda + L b)/a * mu^2 - mu - lambda/a = 0,
// labeled by analytic continuation from the lambda = 0 anchors
//   mu[0] = side*theta1   (exponentially growing toward side*infinity),
//   mu[1] = 0             (slow root, O(lambda)),
//   mu[2] = -side*theta3  (the rate of the profile tail on that side).
// V[j] is the eigenvector ((1 - mu^2)/b, -mu, 1) of the limit matrix.
struct ModeSet {
  int side = +1;
  cplx lambda{};
  std::array<cplx, 3> mu{};
  std::array<std::array<cplx, 3>, 3> V{};
  double theta1 = 0.0;
  double theta3 = 0.0;
  double a = 0.0;
  double b = 0.0;
};

ModeSet char_roots(const ModelSpec& spec, int side, cplx lambda);

// 3x3 matrix of the frozen-coefficient system W' = B W at the end state.
std::array<std::array<cplx, 3>, 3> limit_matrix(const ModelSpec& spec, int side,
                                                cplx lambda);

// (count Re mu > 0, count Re mu < 0). Throws if any root has |Re mu| < 1e-12,
// i.e. if the claimed hyperbolic splitting degenerates at this lambda.
std::pair<int, int> splitting_dimensions(const ModelSpec& spec, int side,
                                         cplx lambda);

// One point of the essential-spectrum curve of the end-state symbol,
// lambda(xi) = -i a xi - L b xi^2 / (1 + xi^2).
cplx dispersion_lambda(const ModelSpec& spec, int side, double xi);

// Distance from lambda to the union of the two dispersion curves (advisory).
double essential_spectrum_margin(const ModelSpec& spec, cplx lambda);

}  // namespace rgs
