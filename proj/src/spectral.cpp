#include "wlab/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace wlab::spectral {

using constants::pi;

Matrix fourier_d1(int n) {
  if (n < 2) throw std::invalid_argument("fourier_d1 needs n >= 2");
  const double h = 2 * pi / n;
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = (n % 2 == 0) ? 0.5 * sgn / std::tan(k * h / 2) : 0.5 * sgn / std::sin(k * h / 2);
    }
  return d;
}

Matrix fourier_d2(int n) {
  if (n < 2) throw std::invalid_argument("fourier_d2 needs n >= 2");
  const double h = 2 * pi / n;
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = i - j;
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      if (n % 2 == 0) {
        if (k == 0)
          d(i, j) = -pi * pi / (3 * h * h) - 1.0 / 6;
        else {
          const double s = std::sin(k * h / 2);
          d(i, j) = -0.5 * sgn / (s * s);
        }
      } else {
        if (k == 0)
          d(i, j) = -pi * pi / (3 * h * h) + 1.0 / 12;
        else
          d(i, j) = -0.5 * sgn / std::sin(k * h / 2) / std::tan(k * h / 2);
      }
    }
  return d;
}

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  GaussRule r{Vector(n), Vector(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes(i) = -x;
    r.nodes(n - 1 - i) = x;
    r.weights(i) = r.weights(n - 1 - i) = w;
  }
  const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
  r.nodes = mid + half * r.nodes.array();
  r.weights *= half;
  return r;
}

Vector fejer_weights(int n) {
  Vector w(n);
  for (int j = 0; j < n; ++j) {
    const double t = (j + 0.5) * pi / n;
    double s = 0;
    for (int k = 1; k <= n / 2; ++k) s += std::cos(2 * k * t) / (4.0 * k * k - 1);
    w(j) = 2.0 / n * (1 - 2 * s);
  }
  return w;
}

PolarDiff polar_diff(int n_theta) {
  const int m = 2 * n_theta;
  const Matrix d1 = fourier_d1(m), d2 = fourier_d2(m);
  PolarDiff p;
  p.d1_direct = d1.topLeftCorner(n_theta, n_theta);
  p.d2_direct = d2.topLeftCorner(n_theta, n_theta);
  p.d1_reflected = d1.topRightCorner(n_theta, n_theta).rowwise().reverse();
  p.d2_reflected = d2.topRightCorner(n_theta, n_theta).rowwise().reverse();
  return p;
}

double Grading::map(double s) const {
  if (identity()) return s;
  return 2 * std::atan2(kappa * std::sin(s / 2), std::cos(s / 2));
}

double Grading::d1(double s) const {
  if (identity()) return 1;
  const double c = std::cos(s / 2), sn = std::sin(s / 2);
  return kappa / (c * c + kappa * kappa * sn * sn);
}

double Grading::d2(double s) const {
  if (identity()) return 0;
  const double c = std::cos(s / 2), sn = std::sin(s / 2);
  const double D = c * c + kappa * kappa * sn * sn;
  return kappa * (1 - kappa * kappa) * std::sin(s) / (2 * D * D);
}

OrderFit fit_order(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_order needs >= 2 paired samples");
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd A(n, 2);
  Vector b(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = std::log(x[i]);
    A(i, 1) = 1;
    b(i) = std::log(std::abs(y[i]));
  }
  const Vector c = A.colPivHouseholderQr().solve(b);
  OrderFit f;
  f.order = c(0);
  f.log_constant = c(1);
  f.residual = std::sqrt((A * c - b).squaredNorm() / n);
  return f;
}

double richardson(const std::vector<double>& h, const std::vector<double>& f, double p) {
  if (h.size() != f.size() || h.empty()) throw std::invalid_argument("richardson needs paired samples");
  // Neville evaluation at t = 0 of the interpolant in t = h^p.
  std::vector<double> t(h.size()), v = f;
  for (size_t i = 0; i < h.size(); ++i) t[i] = std::pow(h[i], p);
  for (size_t k = 1; k < t.size(); ++k)
    for (size_t i = 0; i + k < t.size(); ++i) v[i] = (t[i + k] * v[i] - t[i] * v[i + 1]) / (t[i + k] - t[i]);
  return v[0];
}

}  // namespace wlab::spectral
