#pragma once

// The limit sphere S^2_A~ = {A~(1 + cos t, sin t cos p, sin t sin p)}: the
// handle point is the origin at t = pi. Closed forms for Laplace psi0 and for the
// metric derivative F of the mean curvature, and the cut-off integrals that
// produce the constant (16/3) pi B A~ (R22 - R33).

#include "wlab/ambient.hpp"
#include "wlab/surface.hpp"
#include "wlab/types.hpp"

#include <string>
#include <vector>

namespace wlab::sphere {

struct SphereFrame {
  double theta = 0, phi = 0;
  Vec3d X;   // position
  Vec3d e1;  // A~^-1 dX/dtheta
  Vec3d e2;  // (A~ sin theta)^-1 dX/dphi
  Vec3d n0;  // outer normal
  Vec3d f1;  // (sin t, -(1 + cos t) cos p, -(1 + cos t) sin p)

  static SphereFrame at(double theta, double phi);
};

// The limit sphere as a polar surface about the x axis, outward oriented.
surface::ParamSurface limit_sphere(surface::Resolution res);

// Radial C^2 bump: 1 on |x| <= delta, 0 on |x| >= 2 delta, quintic smoothstep between.
class Cutoff {
 public:
  explicit Cutoff(double delta);

  double delta() const { return delta_; }
  double operator()(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  // sup |chi'| delta and sup |chi''| delta^2, independent of delta.
  static constexpr double c1_bound = 15.0 / 8.0;
  static constexpr double c2_bound = 10.0 / std::numbers::sqrt3;

  // chi_delta(|X(theta, .)|) and the polar angle where |X| = r.
  double on_sphere(double theta) const;
  static double theta_at_radius(double r);

 private:
  double delta_;
};

// (1/A~^2)[-2A cos t + 2B cos 2p {cos t - 2(1 - cos t)/sin^2 t}]
double laplacian_psi0(double theta, double phi);

// dH/dt at t = 0 for (S^2_A~, delta + t h), in the printed closed form.
double metric_derivative_H(double theta, double phi, const ambient::Curvature& curv);
// Same quantity from the tensor formula
// -sum e_i(h_ni) + h_n1 <D_e2 e2, e1> - h_nn H / 2 + sum (d_n0 h)(e_i, e_i) / 2.
double metric_derivative_H_tensor(double theta, double phi, const ambient::Curvature& curv);

struct AppendixIntegrals {
  double delta = 0;
  double I_ric = 0;         // int (1 - chi) H Ric(n0, n0) psi0
  double I_F = 0;           // int (1 - chi) F Laplace psi0
  double I_total = 0;
  double I_F_moved = 0;     // int F Laplace((1 - chi) psi0)
  double quadrature_error = 0;  // relative change under refinement
};

struct AppendixTargets {
  double I_ric, I_F, I_total;
};
// (4/3, 4, 16/3) pi A~ B (R22 - R33)
AppendixTargets appendix_targets(const ambient::Curvature& curv);

AppendixIntegrals appendix_integrals(double delta, const ambient::Curvature& curv);

struct BasicIntegral {
  std::string name;
  double value;
  double exact;
};
std::vector<BasicIntegral> basic_integrals();

}  // namespace wlab::sphere
