#include "wlab/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wlab;
using std::numbers::pi;

TEST_SUITE("spectral") {

TEST_CASE("Fourier collocation differentiates trigonometric polynomials exactly") {
  for (int n : {16, 33, 64}) {
    const auto D1 = spectral::fourier_d1(n);
    const auto D2 = spectral::fourier_d2(n);
    Eigen::VectorXd f(n), df(n), d2f(n);
    for (int i = 0; i < n; ++i) {
      const double x = -pi + 2 * pi * i / n;
      f(i) = std::sin(3 * x) + 0.5 * std::cos(5 * x);
      df(i) = 3 * std::cos(3 * x) - 2.5 * std::sin(5 * x);
      d2f(i) = -9 * std::sin(3 * x) - 12.5 * std::cos(5 * x);
    }
    CHECK((D1 * f - df).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((D2 * f - d2f).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Gauss-Legendre integrates degree 2n-1 exactly") {
  const auto g = spectral::gauss_legendre(6, 0.0, 2.0);
  double s = 0;
  for (int i = 0; i < 6; ++i) s += g.weights(i) * std::pow(g.nodes(i), 11);
  CHECK(s == doctest::Approx(std::pow(2.0, 12) / 12).epsilon(1e-14));
  CHECK(g.weights.sum() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("Fejer weights integrate against sin theta") {
  const auto w = spectral::fejer_weights(40);
  double s1 = 0, s2 = 0;
  for (int j = 0; j < 40; ++j) {
    const double t = (j + 0.5) * pi / 40;
    s1 += w(j);
    s2 += w(j) * std::cos(t) * std::cos(t);
  }
  CHECK(s1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("polar differentiation matches the analytic theta derivative") {
  // f = cos(theta) + sin(theta)^2 cos(2 phi) is smooth on the sphere.
  const int n = 24;
  const auto P = spectral::polar_diff(n);
  Eigen::VectorXd f(n), fr(n), exact(n);
  const double phi = 0.3;
  for (int j = 0; j < n; ++j) {
    const double t = (j + 0.5) * pi / n;
    f(j) = std::cos(t) + std::sin(t) * std::sin(t) * std::cos(2 * phi);
    fr(j) = std::cos(t) + std::sin(t) * std::sin(t) * std::cos(2 * (phi + pi));
    exact(j) = -std::sin(t) + 2 * std::sin(t) * std::cos(t) * std::cos(2 * phi);
  }
  CHECK((P.d1_direct * f + P.d1_reflected * fr - exact).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("grading is a periodic diffeomorphism with consistent derivatives") {
  const spectral::Grading g{0.2};
  CHECK(g.map(0.0) == doctest::Approx(0.0));
  CHECK(g.map(pi - 1e-12) == doctest::Approx(pi).epsilon(1e-9));
  for (double s : {-2.5, -0.7, 0.1, 1.9}) {
    const double h = 1e-5;
    CHECK(g.d1(s) == doctest::Approx((g.map(s + h) - g.map(s - h)) / (2 * h)).epsilon(1e-8));
    CHECK(g.d2(s) == doctest::Approx((g.d1(s + h) - g.d1(s - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK(g.d1(0) == doctest::Approx(0.2));
  CHECK(spectral::Grading{}.identity());
}

TEST_CASE("order fit and Richardson extrapolation") {
  const std::vector<double> h = {0.2, 0.1, 0.05};
  std::vector<double> y, f;
  for (double x : h) {
    y.push_back(3 * x * x);
    f.push_back(1.5 + 2 * x * x + 7 * std::pow(x, 4));
  }
  const auto fit = spectral::fit_order(h, y);
  CHECK(fit.order == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(spectral::richardson(h, f, 2) == doctest::Approx(1.5).epsilon(1e-12));
}

}
