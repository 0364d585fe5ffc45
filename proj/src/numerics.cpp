#include "rgshock/numerics.hpp"

#include <algorithm>
#include <cassert>

namespace rgs {

double poly_eval(const std::vector<double>& c, double u) {
  double r = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) r = r * u + c[k];
  return r;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = double(k) * c[k];
  return d;
}

Series series_add(const Series& a, const Series& b) {
  Series r(std::max(a.order(), b.order()));
  for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] = a[k] + b[k];
  return r;
}

Series series_scale(const Series& a, double s) {
  Series r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

Series series_mul(const Series& a, const Series& b, std::size_t order) {
  Series r(order);
  for (std::size_t i = 0; i < a.c.size() && i <= order; ++i) {
    if (a.c[i] == 0.0) continue;
    const std::size_t jmax = std::min(b.c.size(), order - i + 1);
    for (std::size_t j = 0; j < jmax; ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  return r;
}

Series series_div(const Series& a, const Series& b, std::size_t order) {
  if (b.c.empty() || b.c[0] == 0.0)
    throw std::invalid_argument("series_div: divisor has zero constant term");
  Series r(order);
  for (std::size_t k = 0; k <= order; ++k) {
    double acc = a[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * r.c[k - j];
    r.c[k] = acc / b.c[0];
  }
  return r;
}

Series series_derivative(const Series& a) {
  if (a.c.size() <= 1) return Series(0);
  Series r(a.order() - 1);
  for (std::size_t k = 1; k < a.c.size(); ++k) r.c[k - 1] = double(k) * a.c[k];
  return r;
}

Series poly_of_series(const std::vector<double>& p, const Series& s,
                      std::size_t order) {
  // Horner's scheme lifted to series arithmetic.
  Series r(order);
  if (p.empty()) return r;
  r.c[0] = p.back();
  for (std::size_t k = p.size() - 1; k-- > 0;) {
    r = series_mul(r, s, order);
    r.c[0] += p[k];
  }
  return r;
}

double series_eval(const Series& s, double x) {
  double r = 0.0;
  for (std::size_t k = s.c.size(); k-- > 0;) r = r * x + s.c[k];
  return r;
}

double series_eval_derivative(const Series& s, double x) {
  double r = 0.0;
  for (std::size_t k = s.c.size(); k-- > 1;) r = r * x + double(k) * s.c[k];
  return r;
}

double series_eval_second_derivative(const Series& s, double x) {
  double r = 0.0;
  for (std::size_t k = s.c.size(); k-- > 2;)
    r = r * x + double(k) * double(k - 1) * s.c[k];
  return r;
}

std::array<cplx, 2> quadratic_roots(double b, double c) {
  // Numerically stable form: avoid cancellation in the smaller root.
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    // q is the larger-magnitude root; the other is recovered as c/q.
    const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
    const double r1 = q;
    const double r2 = q != 0.0 ? c / q : -b - q;
    return {cplx(r1, 0.0), cplx(r2, 0.0)};
  }
  const double sq = std::sqrt(-disc);
  return {cplx(-b / 2, sq / 2), cplx(-b / 2, -sq / 2)};
}

static cplx cubic_newton_polish(cplx b, cplx c, cplx d, cplx z) {
  for (int it = 0; it < 4; ++it) {
    const cplx f = ((z + b) * z + c) * z + d;
    const cplx fp = (3.0 * z + 2.0 * b) * z + c;
    if (std::abs(fp) == 0.0) break;
    const cplx dz = f / fp;
    z -= dz;
    if (std::abs(dz) < 1e-15 * (1.0 + std::abs(z))) break;
  }
  return z;
}

std::array<cplx, 3> cubic_roots(cplx b, cplx c, cplx d) {
  // Depressed form t^3 + p t + q with mu = t - b/3, then Cardano.
  const cplx p = c - b * b / 3.0;
  const cplx q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const cplx shift = -b / 3.0;
  std::array<cplx, 3> roots;
  const cplx disc = q * q / 4.0 + p * p * p / 27.0;
  cplx u = std::pow(-q / 2.0 + std::sqrt(disc), 1.0 / 3.0);
  if (std::abs(u) < 1e-300) {
    // p ~ 0 branch: three cube roots of -q.
    const cplx r = std::pow(-q, 1.0 / 3.0);
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    roots = {r, r * w, r * w * w};
  } else {
    const cplx v = -p / (3.0 * u);
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    roots = {u + v, u * w + v * std::conj(w), u * std::conj(w) + v * w};
  }
  for (auto& z : roots) z = cubic_newton_polish(b, c, d, z + shift);
  return roots;
}

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    throw std::invalid_argument("brent_root: endpoints do not bracket a root");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, qq;
      if (a == c) {
        p = 2.0 * xm * s;
        qq = 1.0 - s;
      } else {
        const double q2 = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * q2 * (q2 - r) - (b - a) * (r - 1.0));
        qq = (q2 - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) qq = -qq;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * qq - std::abs(tol1 * qq),
                             std::abs(e * qq))) {
        e = d; d = p / qq;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
  }
  return b;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = f(x2);
    }
  }
  // One parabolic refinement through the three best points.
  const double xm = 0.5 * (a + b);
  const double h = std::max(tol, 0.25 * (b - a));
  const double fl = f(xm - h), fm = f(xm), fr = f(xm + h);
  const double denom = fl - 2.0 * fm + fr;
  if (denom > 0.0) {
    const double shift = 0.5 * h * (fl - fr) / denom;
    if (std::abs(shift) <= h) return xm + shift;
  }
  return xm;
}

std::array<double, 2> fit_line(const std::vector<double>& x,
                               const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two points");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double icept = (sy - slope * sx) / n;
  return {slope, icept};
}

std::vector<double> tridiag_solve(const std::vector<double>& lower,
                                  const std::vector<double>& diag,
                                  const std::vector<double>& upper,
                                  std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw std::invalid_argument("tridiag_solve: band size mismatch");
  std::vector<double> cp(n);
  double beta = diag[0];
  if (beta == 0.0) throw std::runtime_error("tridiag_solve: zero pivot");
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    cp[i] = upper[i - 1] / beta;
    beta = diag[i] - lower[i] * cp[i];
    if (beta == 0.0) throw std::runtime_error("tridiag_solve: zero pivot");
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cp[i + 1] * rhs[i + 1];
  return rhs;
}

cplx det3(const std::array<std::array<cplx, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::array<cplx, 3> solve3(std::array<std::array<cplx, 3>, 3> a,
                           std::array<cplx, 3> b) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) == 0.0)
      throw std::runtime_error("solve3: singular matrix");
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const cplx m = a[r][col] / a[col][col];
      for (int cc = col; cc < 3; ++cc) a[r][cc] -= m * a[col][cc];
      b[r] -= m * b[col];
    }
  }
  std::array<cplx, 3> x{};
  for (int r = 3; r-- > 0;) {
    cplx acc = b[r];
    for (int cc = r + 1; cc < 3; ++cc) acc -= a[r][cc] * x[cc];
    x[r] = acc / a[r][r];
  }
  return x;
}

double MonotoneCubic::operator()(double xq) const {
  if (xq <= x.front()) return y.front() + d.front() * (xq - x.front());
  if (xq >= x.back()) return y.back() + d.back() * (xq - x.back());
  std::size_t lo =
      std::upper_bound(x.begin(), x.end(), xq) - x.begin() - 1;
  const double h = x[lo + 1] - x[lo];
  const double t = (xq - x[lo]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * y[lo] + h10 * h * d[lo] + h01 * y[lo + 1] + h11 * h * d[lo + 1];
}

double MonotoneCubic::derivative(double xq) const {
  if (xq <= x.front()) return d.front();
  if (xq >= x.back()) return d.back();
  std::size_t lo =
      std::upper_bound(x.begin(), x.end(), xq) - x.begin() - 1;
  const double h = x[lo + 1] - x[lo];
  const double t = (xq - x[lo]) / h;
  const double g00 = 6 * t * t - 6 * t;
  const double g10 = 3 * t * t - 4 * t + 1;
  const double g01 = -g00;
  const double g11 = 3 * t * t - 2 * t;
  return (g00 * y[lo] + g01 * y[lo + 1]) / h + g10 * d[lo] + g11 * d[lo + 1];
}

MonotoneCubic make_monotone_cubic(std::vector<double> x,
                                  std::vector<double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw std::invalid_argument("make_monotone_cubic: bad input sizes");
  std::vector<double> slope(n - 1), d(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    slope[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  d[0] = slope[0];
  d[n - 1] = slope[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (slope[i - 1] * slope[i] <= 0.0)
      d[i] = 0.0;
    else {
      // Weighted harmonic mean (Fritsch-Carlson) keeps the interpolant
      // monotone.
      const double w1 = 2 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      const double w2 = (x[i + 1] - x[i]) + 2 * (x[i] - x[i - 1]);
      d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
    }
  }
  MonotoneCubic mc;
  mc.x = std::move(x);
  mc.y = std::move(y);
  mc.d = std::move(d);
  return mc;
}

}  // namespace rgs
