#include "doctest.h"

#include <cmath>

#include "rgshock/numerics.hpp"

using namespace rgs;

TEST_CASE("polynomial evaluation and derivative") {
  std::vector<double> p = {1.0, -2.0, 0.5, 3.0};  // 1 - 2u + 0.5u^2 + 3u^3
  CHECK(poly_eval(p, 0.0) == doctest::Approx(1.0));
  CHECK(poly_eval(p, 2.0) == doctest::Approx(1 - 4 + 2 + 24));
  auto dp = poly_derivative(p);
  CHECK(poly_eval(dp, 2.0) == doctest::Approx(-2 + 2.0 + 36.0));
  CHECK(poly_derivative(std::vector<double>{5.0}).size() == 1);
  CHECK(poly_eval(poly_derivative(std::vector<double>{5.0}), 3.0) == 0.0);
}

TEST_CASE("series multiply/divide round trip") {
  Series a(6), b(6);
  // a = 1 + x + x^2/2 (exp-ish), b = 1 - x
  a.c = {1.0, 1.0, 0.5, 1.0 / 6, 0.0, 0.0, 0.0};
  b.c = {1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  auto prod = series_mul(a, b, 6);
  auto back = series_div(prod, b, 6);
  for (std::size_t k = 0; k <= 6; ++k) CHECK(back[k] == doctest::Approx(a[k]).epsilon(1e-14));
}

TEST_CASE("polynomial of a series matches direct composition") {
  std::vector<double> p = {2.0, 0.0, 1.0};  // 2 + u^2
  Series s(4);
  s.c = {0.3, 1.0, -0.25, 0.0, 0.0};
  auto comp = poly_of_series(p, s, 4);
  for (double x : {-0.2, 0.0, 0.15}) {
    const double direct = poly_eval(p, series_eval(s, x));
    CHECK(series_eval(comp, x) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("series derivative evaluations") {
  Series s(5);
  s.c = {1.0, -1.0, 0.5, 2.0, 0.0, -0.125};
  const double x = 0.2;
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t k = 1; k <= 5; ++k) d1 += k * s[k] * std::pow(x, k - 1);
  for (std::size_t k = 2; k <= 5; ++k) d2 += k * (k - 1) * s[k] * std::pow(x, k - 2);
  CHECK(series_eval_derivative(s, x) == doctest::Approx(d1).epsilon(1e-13));
  CHECK(series_eval_second_derivative(s, x) == doctest::Approx(d2).epsilon(1e-13));
}

TEST_CASE("rk45 integrates a linear oscillator accurately") {
  OdeState<double, 2> y = {1.0, 0.0};  // y'' = -y
  auto rhs = [](double, const OdeState<double, 2>& v, OdeState<double, 2>& d) {
    d[0] = v[1];
    d[1] = -v[0];
  };
  rk45_drive<double, 2>(rhs, 0.0, 10.0, y, 1e-12, 1e-13);
  CHECK(std::abs(y[0] - std::cos(10.0)) < 1e-9);
  CHECK(std::abs(y[1] + std::sin(10.0)) < 1e-9);
}

TEST_CASE("rk45 hook can stop the integration early") {
  OdeState<double, 1> y = {1.0};
  auto rhs = [](double, const OdeState<double, 1>& v, OdeState<double, 1>& d) {
    d[0] = v[0];
  };
  double x_stop = 0.0;
  rk45_drive<double, 1>(
      rhs, 0.0, 50.0, y, 1e-10, 1e-12,
      [&](double x, const OdeState<double, 1>& v) {
        x_stop = x;
        return v[0] < 10.0;
      });
  CHECK(y[0] >= 10.0);
  CHECK(x_stop < 5.0);  // e^x hits 10 near x = 2.3
}

TEST_CASE("quadratic root solver") {
  auto r = quadratic_roots(-3.0, 2.0);  // x^2 - 3x + 2
  const double lo = std::min(r[0].real(), r[1].real());
  const double hi = std::max(r[0].real(), r[1].real());
  CHECK(lo == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-14));
  auto c = quadratic_roots(0.0, 1.0);  // x^2 + 1
  CHECK(std::abs(c[0].imag()) == doctest::Approx(1.0));
  // Cancellation-prone case: x^2 - 1e8 x + 1 has a tiny root near 1e-8.
  auto t = quadratic_roots(-1e8, 1.0);
  const double small = std::min(std::abs(t[0]), std::abs(t[1]));
  CHECK(small == doctest::Approx(1e-8).epsilon(1e-12));
}

TEST_CASE("cubic root solver with Newton polish") {
  auto r = cubic_roots(cplx(-6.0), cplx(11.0), cplx(-6.0));  // (x-1)(x-2)(x-3)
  std::array<double, 3> got = {r[0].real(), r[1].real(), r[2].real()};
  std::sort(got.begin(), got.end());
  CHECK(got[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(got[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(got[2] == doctest::Approx(3.0).epsilon(1e-12));

  // Complex coefficients: (x - i)(x + 2i)(x - 1).
  const cplx i(0.0, 1.0);
  const cplx b = -(i - 2.0 * i + 1.0);
  const cplx c = i * (-2.0 * i) + i * 1.0 + (-2.0 * i) * 1.0;
  const cplx d = -(i * (-2.0 * i) * 1.0);
  auto rc = cubic_roots(b, c, d);
  for (const cplx& want : {i, -2.0 * i, cplx(1.0)}) {
    double best = 1e9;
    for (const auto& g : rc) best = std::min(best, std::abs(g - want));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("brent root and golden minimization") {
  const double r = brent_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-14);
  CHECK(std::abs(std::cos(r) - r) < 1e-13);
  const double m = golden_min([](double x) { return (x - 1.3) * (x - 1.3) + 0.5; },
                              -1.0, 4.0, 1e-10);
  CHECK(m == doctest::Approx(1.3).epsilon(1e-7));
}

TEST_CASE("least-squares line fit is exact on linear data") {
  std::vector<double> x = {0.0, 1.0, 2.0, 3.0}, y;
  for (double xi : x) y.push_back(2.5 * xi - 0.75);
  auto ab = fit_line(x, y);
  CHECK(ab[0] == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(ab[1] == doctest::Approx(-0.75).epsilon(1e-13));
}

TEST_CASE("tridiagonal solve matches a hand-checked system") {
  // [2 1 0; 1 2 1; 0 1 2] x = [4; 8; 8] -> x = [1; 2; 3]
  std::vector<double> lo = {0.0, 1.0, 1.0}, di = {2.0, 2.0, 2.0}, up = {1.0, 1.0, 0.0};
  auto x = tridiag_solve(lo, di, up, {4.0, 8.0, 8.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x[2] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("3x3 determinant and solve") {
  std::array<std::array<cplx, 3>, 3> a = {{{cplx(2), cplx(0), cplx(1)},
                                           {cplx(1), cplx(3), cplx(0)},
                                           {cplx(0), cplx(1), cplx(4)}}};
  // det = 2*(12-0) - 0 + 1*(1-0) = 25
  CHECK(std::abs(det3(a) - cplx(25.0)) < 1e-13);
  std::array<cplx, 3> xw = {cplx(1.0, 0.5), cplx(-2.0), cplx(0.25)};
  std::array<cplx, 3> b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i] += a[i][j] * xw[j];
  auto x = solve3(a, b);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i] - xw[i]) < 1e-13);
}

TEST_CASE("monotone cubic interpolation preserves monotone data") {
  std::vector<double> x, y;
  for (int i = 0; i <= 10; ++i) {
    x.push_back(0.3 * i);
    y.push_back(std::tanh(0.3 * i - 1.5));
  }
  auto mc = make_monotone_cubic(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(mc(x[i]) == doctest::Approx(y[i]));
  double prev = mc(0.0);
  for (double q = 0.01; q <= 3.0; q += 0.01) {
    const double v = mc(q);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  // Exact on linear data, including the derivative.
  std::vector<double> xl = {0.0, 0.5, 1.5, 2.0}, yl;
  for (double xi : xl) yl.push_back(3.0 * xi + 1.0);
  auto lin = make_monotone_cubic(xl, yl);
  CHECK(lin(0.77) == doctest::Approx(3.0 * 0.77 + 1.0).epsilon(1e-13));
  CHECK(lin.derivative(0.77) == doctest::Approx(3.0).epsilon(1e-12));
}
