// Small numerical toolkit shared by the other modules: polynomial and
// truncated-power-series arithmetic, an adaptive Dormand-Prince integrator,
// closed-form cubic/quadratic solvers with Newton polish, scalar root
// finding, 1-D minimization, tridiagonal solves, least-squares line fits,
// monotone cubic interpolation, and tiny dense complex linear algebra.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgs {

using cplx = std::complex<double>;

// ------------------------------------------------------------- polynomials
// Coefficients stored in ascending order: p(u) = c[0] + c[1]*u + ... .
double poly_eval(const std::vector<double>& c, double u);
std::vector<double> poly_derivative(const std::vector<double>& c);

// --------------------------------------------------- truncated power series
// A truncated power series s(x) = sum_k c[k] x^k, all operations performed
// to a fixed truncation order.
struct Series {
  std::vector<double> c;

  Series() = default;
  explicit Series(std::size_t order) : c(order + 1, 0.0) {}
  std::size_t order() const { return c.empty() ? 0 : c.size() - 1; }
  double operator[](std::size_t k) const { return k < c.size() ? c[k] : 0.0; }
};

Series series_add(const Series& a, const Series& b);
Series series_scale(const Series& a, double s);
Series series_mul(const Series& a, const Series& b, std::size_t order);
// a/b with b.c[0] != 0.
Series series_div(const Series& a, const Series& b, std::size_t order);
// d/dx
Series series_derivative(const Series& a);
// Composition P(s(x)) of a polynomial with a series, truncated.
Series poly_of_series(const std::vector<double>& p, const Series& s,
                      std::size_t order);
double series_eval(const Series& s, double x);
double series_eval_derivative(const Series& s, double x);
double series_eval_second_derivative(const Series& s, double x);

// -------------------------------------------- adaptive Dormand-Prince RK5(4)
// Fixed-dimension explicit integrator with embedded error estimate.  The
// per-step hook runs after every accepted step and may modify the state in
// place (used for renormalization); it may also request an early stop by
// returning false.
template <class T, std::size_t N>
using OdeState = std::array<T, N>;

struct OdeStats {
  int accepted = 0;
  int rejected = 0;
};

namespace detail {
// Dormand-Prince coefficients.
constexpr double dp_c[7] = {0.0,    1.0 / 5, 3.0 / 10, 4.0 / 5,
                            8.0 / 9, 1.0,     1.0};
constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double dp_b5[7] = {35.0 / 384,      0.0,          500.0 / 1113,
                             125.0 / 192,     -2187.0 / 6784, 11.0 / 84,
                             0.0};
constexpr double dp_b4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695,
                             393.0 / 640,     -92097.0 / 339200,
                             187.0 / 2100,    1.0 / 40};
}  // namespace detail

template <class T, std::size_t N, class F>
bool rk45_try_step(F&& rhs, double x, const OdeState<T, N>& y, double h,
                   OdeState<T, N>& out, double& err_norm, double rtol,
                   double atol) {
  using namespace detail;
  std::array<OdeState<T, N>, 7> k;
  rhs(x, y, k[0]);
  for (int s = 1; s < 7; ++s) {
    OdeState<T, N> ys = y;
    for (int j = 0; j < s; ++j) {
      const double a = dp_a[s][j];
      if (a == 0.0) continue;
      for (std::size_t i = 0; i < N; ++i) ys[i] += h * a * k[j][i];
    }
    rhs(x + dp_c[s] * h, ys, k[s]);
  }
  OdeState<T, N> y5 = y, y4 = y;
  for (int s = 0; s < 7; ++s) {
    for (std::size_t i = 0; i < N; ++i) {
      y5[i] += h * dp_b5[s] * k[s][i];
      y4[i] += h * dp_b4[s] * k[s][i];
    }
  }
  err_norm = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
    const double e = std::abs(y5[i] - y4[i]) / sc;
    err_norm = std::max(err_norm, e);
  }
  out = y5;
  return err_norm <= 1.0;
}

// Integrates from x0 to x1 (either direction).  hook(x, y) -> bool, called
// after each accepted step; returning false stops the integration early.
template <class T, std::size_t N, class F, class Hook>
OdeStats rk45_drive(F&& rhs, double x0, double x1, OdeState<T, N>& y,
                    double rtol, double atol, Hook&& hook,
                    double h_init = 0.0, int max_steps = 2000000) {
  OdeStats st;
  if (x0 == x1) return st;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  double span = std::abs(x1 - x0);
  double h = h_init > 0 ? h_init : std::min(1e-2, span / 10.0);
  double x = x0;
  while (dir * (x1 - x) > 0) {
    h = std::min(h, std::abs(x1 - x));
    OdeState<T, N> ynew;
    double err = 0.0;
    const bool ok = rk45_try_step(rhs, x, y, dir * h, ynew, err, rtol, atol);
    if (ok) {
      x += dir * h;
      y = ynew;
      ++st.accepted;
      if (!hook(x, y)) break;
      const double grow =
          err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::min(5.0, std::max(0.2, grow));
    } else {
      ++st.rejected;
      h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
      if (h < 1e-14 * std::max(1.0, std::abs(x)))
        throw std::runtime_error("rk45: step size underflow at x=" +
                                 std::to_string(x));
    }
    if (st.accepted + st.rejected > max_steps)
      throw std::runtime_error("rk45: step budget exhausted");
  }
  return st;
}

template <class T, std::size_t N, class F>
OdeStats rk45_drive(F&& rhs, double x0, double x1, OdeState<T, N>& y,
                    double rtol, double atol) {
  auto nohook = [](double, const OdeState<T, N>&) { return true; };
  return rk45_drive<T, N>(rhs, x0, x1, y, rtol, atol, nohook);
}

// ------------------------------------------------------------- root solvers
// Roots of x^2 + b x + c = 0 (real coefficients, possibly complex roots).
std::array<cplx, 2> quadratic_roots(double b, double c);

// Roots of mu^3 + b mu^2 + c mu + d = 0 with complex coefficients, each
// polished by a Newton iteration.  No ordering is imposed.
std::array<cplx, 3> cubic_roots(cplx b, cplx c, cplx d);

// Safeguarded scalar root finding on a bracket [a,b] with f(a)*f(b) <= 0.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol);

// Golden-section minimization with a final parabolic refinement.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol);

// Least-squares straight line through (x_i, y_i): returns {slope, intercept}.
std::array<double, 2> fit_line(const std::vector<double>& x,
                               const std::vector<double>& y);

// --------------------------------------------------------- linear algebra
// Thomas algorithm for a tridiagonal system (diagonally dominant use only).
// diag/lower/upper are the three bands; lower[0] and upper[n-1] are unused.
std::vector<double> tridiag_solve(const std::vector<double>& lower,
                                  const std::vector<double>& diag,
                                  const std::vector<double>& upper,
                                  std::vector<double> rhs);

cplx det3(const std::array<std::array<cplx, 3>, 3>& m);
// Solve the 3x3 complex system A x = b by partial-pivot elimination.
std::array<cplx, 3> solve3(std::array<std::array<cplx, 3>, 3> a,
                           std::array<cplx, 3> b);

// --------------------------------------------- monotone cubic interpolation
// Fritsch-Carlson shape-preserving cubic interpolant on a strictly
// increasing abscissa grid.
struct MonotoneCubic {
  std::vector<double> x, y, d;  // nodes, values, node derivatives
  double operator()(double xq) const;
  double derivative(double xq) const;
};
MonotoneCubic make_monotone_cubic(std::vector<double> x, std::vector<double> y);

}  // namespace rgs
