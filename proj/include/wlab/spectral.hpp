#pragma once

// Quadrature rules, Fourier collocation differentiation and periodic mesh grading.

#include "wlab/types.hpp"

#include <vector>

namespace wlab::spectral {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Periodic Fourier collocation matrices on n equispaced nodes over one period 2 pi.
Matrix fourier_d1(int n);
Matrix fourier_d2(int n);

struct GaussRule {
  Vector nodes;
  Vector weights;
};

// n-point Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Fejer's first rule on the staggered nodes theta_j = (j + 1/2) pi / n:
// sum_j w_j f(theta_j) ~ int_0^pi f(theta) sin(theta) dtheta.
Vector fejer_weights(int n);

// Double Fourier differentiation in theta for fields on the pole-staggered
// sphere grid. A field f with f(-theta, phi) = f(theta, phi + pi) is extended to
// a 2 pi periodic function of theta; d f = direct * f + reflected * f(., phi + pi).
struct PolarDiff {
  Matrix d1_direct, d1_reflected;
  Matrix d2_direct, d2_reflected;
};
PolarDiff polar_diff(int n_theta);

// Circle map s -> 2 atan(kappa tan(s/2)) on (-pi, pi): a smooth periodic
// reparametrization that packs nodes near s = 0 with density 1/kappa.
struct Grading {
  double kappa = 1.0;

  double map(double s) const;
  double d1(double s) const;
  double d2(double s) const;
  bool identity() const { return kappa == 1.0; }
};

// Least-squares slope of log|y| against log x.
struct OrderFit {
  double order = 0.0;
  double log_constant = 0.0;
  double residual = 0.0;  // rms of the log-log fit
};
OrderFit fit_order(const std::vector<double>& x, const std::vector<double>& y);

// Polynomial Richardson extrapolation to h = 0 assuming
// f(h) = f0 + c1 h^p + c2 h^(2p) + ... through all given samples.
double richardson(const std::vector<double>& h, const std::vector<double>& f, double p);

}  // namespace wlab::spectral
