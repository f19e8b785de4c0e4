#pragma once

// Moebius degeneration of the Clifford torus: inversions, the area-preserving
// offset xi_eta, the family T_omega, the blow-up chart Z and the normal
// variation phi_eta with its limit psi0 on the sphere S^2_A~.

#include "wlab/spectral.hpp"
#include "wlab/surface.hpp"
#include "wlab/types.hpp"

#include <string>
#include <vector>

namespace wlab::moebius {

// Spherical inversion in the sphere of radius eta about x0.
template <class T>
Vec3<T> inversion(const Vec3<T>& x0, T eta, const Vec3<T>& x) {
  const Vec3<T> d = x - x0;
  const T r2 = d.squaredNorm();
  if (!(r2 > T(0))) throw std::domain_error("inversion undefined at its center");
  return eta * eta * d / r2 + x0;
}

// D Phi_{0,eta}(x) = eta^2 / |x|^2 (Id - 2 x^ x^T)
template <class T>
Mat3<T> inversion_jacobian(T eta, const Vec3<T>& x) {
  const T r2 = x.squaredNorm();
  return eta * eta / r2 * (Mat3<T>::Identity() - 2 * x * x.transpose() / r2);
}

// x -> -x reflection in the first coordinate.
inline Mat3d reflect_x() { return Eigen::Vector3d(-1, 1, 1).asDiagonal(); }

inline Mat3d rotation_z(double angle) {
  return Eigen::AngleAxisd(angle, Vec3d::UnitZ()).toRotationMatrix();
}

// Clifford torus X(phi, theta) with radii (sqrt2, 1); chart u = phi, v = theta.
surface::Jet clifford_jet(double phi, double theta);
// Outer unit normal of the Clifford torus.
Vec3d clifford_normal(double phi, double theta);
// The chart orientation: x_phi x x_theta points inward.
inline constexpr int clifford_orientation = -1;

surface::ParamSurface clifford_torus(surface::Resolution res);

// |Y|^2 for Y = X - (sqrt2 + 1 + xi) e_x, evaluated without cancellation near the origin.
double y_norm2(double phi, double theta, double xi);
Vec3d y_point(double phi, double theta, double xi);

struct Quadrature {
  int n_phi = 0;
  int n_theta = 0;
  spectral::Grading grade_phi, grade_theta;
};

// Graded mesh resolving the near-origin peak of width ~ xi; `density` scales node
// counts. The trapezoid error decays like exp(-N sqrt(xi)), so density 1 sits
// near 1e-13 relative for every xi.
Quadrature quadrature_for(double xi, double density = 1.0);
// Density used for the self-convergence check.
inline constexpr double refine_density = 1.35;

struct InvertedIntegrals {
  double I4 = 0;   // int (sqrt2 + cos phi) / |Y|^4
  double I6f = 0;  // int (sqrt2 + cos phi) f / |Y|^6, f = d|Y|^2 / d xi
};
InvertedIntegrals inverted_integrals(double xi, const Quadrature& q);

// eta^4 int int (sqrt2 + cos phi) / |Y|^4; throws unless a refined mesh agrees to 8 digits.
double area_of_inverted(double eta, double xi);
double area_of_inverted(double eta, double xi, const Quadrature& q);

struct DegenerationState {
  double eta = 0;
  double xi = 0;
  double xi_prime = 0;
  double area_residual = 0;   // relative |area - 4 sqrt2 pi^2|
  double self_convergence = 0;  // relative change of I4 under mesh doubling
  Quadrature quad;
  std::vector<std::string> warnings;

  static double A_tilde() { return constants::A_tilde; }
  static double c0() { return constants::c0; }
  // eta^-4 (xi' eta - 2 xi)
  double xi_combination() const;
};

// Operating window for which double precision resolves the handle scale.
inline constexpr double eta_window_lo = 0.02;
inline constexpr double eta_window_hi = 0.3;

DegenerationState solve_xi(double eta);

struct MoebiusParam {
  Eigen::Vector2d omega = Eigen::Vector2d::Zero();

  double r() const { return omega.norm(); }
  double eta() const { return 1.0 - r(); }
  double angle() const { return std::atan2(omega.y(), omega.x()); }
  static MoebiusParam polar(double r, double angle = 0.0) {
    return MoebiusParam{Eigen::Vector2d(r * std::cos(angle), r * std::sin(angle))};
  }
};

// T_omega = Rot_z(arg omega) Refx Phi_{0,eta}(x - (sqrt2 + 1 + xi_eta) e_x); T_0 = Id.
class MoebiusMap {
 public:
  explicit MoebiusMap(const MoebiusParam& p);
  MoebiusMap(const MoebiusParam& p, DegenerationState state);

  Vec3d operator()(const Vec3d& x) const;
  surface::Jet torus_jet(double phi, double theta) const;

  bool identity() const { return identity_; }
  const DegenerationState& state() const { return state_; }
  const MoebiusParam& param() const { return param_; }
  const Mat3d& frame() const { return M_; }

 private:
  MoebiusParam param_;
  DegenerationState state_;
  bool identity_ = true;
  Mat3d M_ = Mat3d::Identity();
};

Vec3d t_omega(const MoebiusParam& p, const Vec3d& x);

// The image T_omega(T) as a surface; graded when the handle is small.
surface::ParamSurface moebius_torus(const MoebiusMap& map, surface::Resolution res, bool graded = true);
// Same surface on the grading of `mesh` (node counts still come from `res`).
surface::ParamSurface moebius_torus(const MoebiusMap& map, surface::Resolution res, const Quadrature& mesh);
surface::Resolution default_resolution(const MoebiusMap& map, double density = 1.0);

// Largest distance of T_omega(T) from the limit sphere, outside the ball B_delta.
double sphere_deviation(const MoebiusParam& p, double delta, surface::Resolution res);

// Z(phi_bar, theta_bar, eta) = Phi_{0,eta}(Y(eta^2 phi_bar, eta^2 theta_bar)), unreflected.
Vec3d z_map(double phi_bar, double theta_bar, const DegenerationState& s);
Vec3d z0_map(double phi_bar, double theta_bar);

// Normal speed d/d eta of the degenerating torus at chart point (phi, theta).
double phi_eta(double phi, double theta, const DegenerationState& s);
double psi_eta(double phi_bar, double theta_bar, const DegenerationState& s);

// psi0 on S^2_A~ in polar coordinates x = A~(1 + cos t), y = A~ sin t cos p, z = A~ sin t sin p.
double psi0(double theta, double phi);
// The three printed forms: Cartesian, polar, expanded cos^2.
double psi0_cartesian(const Vec3d& x);
double psi0_expanded(double theta, double phi);
// Blow-up plane form in (phi_bar, theta_bar).
double psi0_plane(double phi_bar, double theta_bar);

// Stereographic identification of the blow-up plane with S^2_A~.
Vec3d plane_to_sphere(double phi_bar, double theta_bar);
// Polar angles (theta, phi) of a point on S^2_A~.
Eigen::Vector2d sphere_angles(const Vec3d& x);

}  // namespace wlab::moebius
