#pragma once

// Critical points of F(R) = S(R e2, R e2) - S(R e3, R e3) on SO(3) and the
// Morse counting tables for the boundary of the torus parameter space.

#include "wlab/ambient.hpp"
#include "wlab/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace wlab::morse {

using Vec6 = Eigen::Matrix<double, 6, 1>;

struct RotationPoint {
  Mat3d R = Mat3d::Identity();
  Vec6 x = Vec6::Zero();  // (R e2, R e3) in the eigenframe
  double lambda = 0, mu = 0, nu = 0;
  double F = 0;
  Vec3d hessian = Vec3d::Zero();  // ascending
  int index = 0;
  int i = 0, j = 0;  // signed labels: R e2 = sign(i) e_|i|, R e3 = sign(j) e_|j|; 0 if unlabelled
  double constraint_residual = 0;
};

// Thrown when two eigenvalues coincide: F is then constant along a circle.
struct NotMorse : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void require_distinct(const Vec3d& alpha);

// F(x) = sum alpha_i (x_i^2 - x_{i+3}^2)
double f_value(const Vec3d& alpha, const Vec6& x);
// Rotation with columns (x123 x x456, x123, x456).
Mat3d rotation_from(const Vec6& x);
Vec6 coordinates_of(const Mat3d& R);

// Residual of the nine-equation Lagrange system at (x, lambda, mu, nu).
Eigen::Matrix<double, 9, 1> lagrange_residual(const Vec3d& alpha, const Vec6& x, double lambda, double mu, double nu);

// Half the x-Hessian of the Lagrange function on the tangent vectors
// (w x R e2, w x R e3), w = e1, e2, e3. Half, so that at R = Id the quadratic form
// reads (a1 - a2) v1^2 + 2 (a3 - a2) v3^2 + (a3 - a1) v4^2.
Mat3d tangent_hessian(const Vec3d& alpha, const Vec6& x, double lambda, double mu, double nu);

std::vector<RotationPoint> f_critical_enumerate(const Vec3d& alpha);

struct SearchResult {
  std::vector<RotationPoint> points;  // one per cluster, matched to the enumeration
  int seeds = 0;
  int converged = 0;
  double max_match_error = 0;     // coordinate distance to the enumerated point
  double max_spectrum_error = 0;  // numerical vs analytic Hessian eigenvalues
  double condition = 0;           // max |eig| / min |eig| over all points
  std::vector<std::string> warnings;
};

inline constexpr double cluster_radius = 1e-4;

SearchResult f_critical_search(const Vec3d& alpha, int n_seeds, std::uint64_t seed);

std::array<int, 4> index_counts(const std::vector<RotationPoint>& pts);

using Counts4 = std::array<int, 4>;
using Counts7 = std::array<int, 7>;

// C~_0 = C~_1 = 0, C~_2 = 4 C_0, C~_q = 4 C_{q-2} + 2 C_{q-3}, C~_6 = 2 C_3.
Counts7 tilde_c(const Counts4& c);

// Half the number of pairs (P, R) with F(R) < 0, graded by
// index(-Hess Sc) + index(-Hess F), built from an explicit SO(3) point list.
Counts7 tilde_c_from_points(const Counts4& c, const std::vector<RotationPoint>& so3);

struct TildeBeta {
  Counts7 beta{};
  Counts7 kunneth{};  // convolution of beta with (1, 1, 1)
  std::vector<std::string> warnings;
};
TildeBeta tilde_beta(const Counts4& b);

struct Multiplicity {
  std::array<int, 5> surplus{};  // (beta~_q - C~_q)^+, q = 0..4
  int bound = 0;
};
Multiplicity multiplicity_bound(const Counts7& beta_t, const Counts7& c_t);

// Betti numbers of S^3, S^2 x S^1, T^3 with Z_2 coefficients.
Counts4 betti_preset(const std::string& name);

// G_r = -Sc - (B A~ / (sqrt2 pi)) F(P, R) (1 - r)^2
double g_r_eval(double sc, const ambient::Curvature& curv, const Mat3d& R, double r);
inline const double g_r_coefficient = constants::B_coef * constants::A_tilde / (constants::sqrt2 * constants::pi);

}  // namespace wlab::morse
