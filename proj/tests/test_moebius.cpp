#include "wlab/moebius.hpp"

#include <doctest.h>

#include <functional>
#include <map>
#include <random>

using namespace wlab;
using namespace wlab::moebius;
using namespace wlab::constants;

namespace {

const ambient::Metric flat;

const DegenerationState& state(double eta) {
  static std::map<double, DegenerationState> cache;
  auto it = cache.find(eta);
  if (it == cache.end()) it = cache.emplace(eta, solve_xi(eta)).first;
  return it->second;
}

double sup_over_window(double R, int n, const std::function<double(double, double)>& f) {
  double worst = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) worst = std::max(worst, f(-R + 2 * R * i / n, -R + 2 * R * j / n));
  return worst;
}

}  // namespace

TEST_SUITE("moebius") {

TEST_CASE("inversion") {
  const Vec3d o = Vec3d::Zero();
  const Vec3d u = Vec3d(0.3, -0.4, 0.2).normalized();
  CHECK((inversion(o, 1.0, u) - u).norm() < 1e-15);
  CHECK((inversion(o, 1.0, Vec3d(2, 0, 0)) - Vec3d(0.5, 0, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(inversion(o, 1.0, o), std::domain_error);

  std::mt19937_64 g(11);
  std::normal_distribution<double> N;
  for (int k = 0; k < 100; ++k) {
    const Vec3d x0(N(g), N(g), N(g)), x(N(g), N(g), N(g));
    const double eta = 0.1 + std::abs(N(g));
    CHECK((inversion(x0, eta, inversion(x0, eta, x)) - x).norm() < 1e-12 * (1 + x.norm()));
    const Mat3d D = inversion_jacobian(eta, x);
    const double s = eta * eta / x.squaredNorm();
    CHECK((D.transpose() * D - s * s * Mat3d::Identity()).cwiseAbs().maxCoeff() < 1e-12 * s * s);
  }
}

TEST_CASE("inversion Jacobian against finite differences") {
  const Vec3d x(0.7, -0.3, 0.5);
  const double eta = 0.4, h = 1e-6;
  const Mat3d D = inversion_jacobian(eta, x);
  for (int k = 0; k < 3; ++k) {
    const Vec3d e = h * Vec3d::Unit(k);
    const Vec3d col = (inversion(Vec3d(Vec3d::Zero()), eta, Vec3d(x + e)) -
                       inversion(Vec3d(Vec3d::Zero()), eta, Vec3d(x - e))) / (2 * h);
    CHECK((col - D.col(k)).norm() < 1e-8);
  }
}

TEST_CASE("area of the inverted torus") {
  const double eta = 0.05;
  const double xi = state(eta).xi;
  double prev = area_of_inverted(eta, 0.25 * xi);
  for (double f : {0.5, 1.0, 2.0, 4.0}) {
    const double a = area_of_inverted(eta, f * xi);
    CHECK(a < prev);
    prev = a;
  }
  CHECK(std::abs(area_of_inverted(eta, xi) / clifford_area - 1) < 1e-8);
  const double a1 = area_of_inverted(eta, xi, quadrature_for(xi, 1.0));
  const double a2 = area_of_inverted(eta, xi, quadrature_for(xi, 2.0));
  CHECK(std::abs(a2 / a1 - 1) < 1e-9);
}

TEST_CASE("solve_xi") {
  const DegenerationState& s = state(0.05);
  CHECK(std::abs(std::pow(0.05, 4) / (s.xi * s.xi) - 17.7715) <= 0.05);
  CHECK(s.area_residual <= 1e-8);
  CHECK(s.warnings.empty());

  const DegenerationState again = solve_xi(0.05);
  CHECK(again.xi == s.xi);
  CHECK(again.xi_prime == s.xi_prime);

  double prev = 0;
  for (double eta : {0.025, 0.05, 0.1, 0.2}) {
    CHECK(state(eta).xi > prev);
    prev = state(eta).xi;
  }

  // xi' from the implicit formula against a central difference of solved xi.
  const double h = 1e-4;
  const double fd = (solve_xi(0.1 + h).xi - solve_xi(0.1 - h).xi) / (2 * h);
  CHECK(state(0.1).xi_prime == doctest::Approx(fd).epsilon(1e-6));

  CHECK(!solve_xi(0.4).warnings.empty());
  CHECK_THROWS_AS(solve_xi(0.0), std::domain_error);
  CHECK_THROWS_AS(solve_xi(1.0), std::domain_error);
}

TEST_CASE("T_omega") {
  const Vec3d x(0.4, -1.1, 0.7);
  CHECK((t_omega(MoebiusParam{}, x) - x).norm() == 0.0);
  CHECK_THROWS_AS(t_omega(MoebiusParam::polar(1.0), x), std::domain_error);

  // Rotating omega about the z axis rotates the image.
  const MoebiusMap a(MoebiusParam::polar(0.5, 0.0)), b(MoebiusParam::polar(0.5, 0.9));
  const Vec3d p = clifford_jet(0.3, 1.2).x;
  CHECK((b(p) - rotation_z(0.9) * a(p)).norm() < 1e-12);

  for (double r : {0.3, 0.9}) {
    const MoebiusMap m(MoebiusParam::polar(r, 0.4));
    const auto s = moebius_torus(m, default_resolution(m));
    CHECK(std::abs(surface::area(s, flat) / clifford_area - 1) <= 1e-7);
    CHECK(std::abs(surface::willmore_energy(s, flat) / clifford_willmore - 1) <= 1e-6);
  }

  CHECK(sphere_deviation(MoebiusParam::polar(0.99), 0.3, {256, 256}) <= 0.05);
}

TEST_CASE("blow-up chart") {
  CHECK((z0_map(0, 0) - Vec3d(-2 * A_tilde, 0, 0)).norm() < 1e-12);
  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> U(-20, 20);
  for (int k = 0; k < 100; ++k) {
    const Vec3d z = z0_map(U(g), U(g));
    CHECK(std::abs((z + A_tilde * Vec3d::UnitX()).norm() - A_tilde) < 1e-10);
  }
  std::vector<double> err;
  for (double eta : {0.1, 0.05, 0.025})
    err.push_back(sup_over_window(5, 40, [&](double p, double t) { return (z_map(p, t, state(eta)) - z0_map(p, t)).norm(); }));
  CHECK(std::log(err[0] / err[2]) / std::log(4.0) >= 1.3);
}

TEST_CASE("variation field") {
  // |phi_eta| <= C eta, on the full chart and on the handle window.
  std::vector<double> c;
  for (double eta : {0.1, 0.05}) {
    const auto& s = state(eta);
    const double coarse = sup_over_window(pi, 120, [&](double p, double t) { return std::abs(phi_eta(p, t, s)); });
    const double handle = sup_over_window(5 * eta * eta, 80, [&](double p, double t) { return std::abs(phi_eta(p, t, s)); });
    c.push_back(std::max(coarse, handle) / eta);
  }
  CHECK(c[1] <= 1.2 * c[0]);
  CHECK(c[0] < 5);

  // psi_eta -> psi0 with decreasing error.
  std::vector<double> err;
  for (double eta : {0.1, 0.05, 0.025})
    err.push_back(sup_over_window(5, 40, [&](double p, double t) { return std::abs(psi_eta(p, t, state(eta)) - psi0_plane(p, t)); }));
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);

  // The degeneration preserves area: int H phi_eta = 0.
  const MoebiusMap m(MoebiusParam::polar(0.95), state(0.05));
  const auto s = moebius_torus(m, default_resolution(m));
  const auto geo = surface::geometry(s, flat);
  const Field phi = surface::sample(s, [&](double p, double t) { return phi_eta(p, t, m.state()); });
  CHECK(std::abs(surface::integrate(s, geo, geo.H * phi)) <= 1e-6);
}

TEST_CASE("psi0 forms") {
  for (double p : {0.0, 0.7, 2.0, 4.5}) CHECK(psi0(0, p) == doctest::Approx(sqrt2 / 2).epsilon(1e-15));
  std::mt19937_64 g(13);
  std::uniform_real_distribution<double> T(0, pi), P(0, 2 * pi);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const double t = T(g), p = P(g);
    const Vec3d x(A_tilde * (1 + std::cos(t)), A_tilde * std::sin(t) * std::cos(p), A_tilde * std::sin(t) * std::sin(p));
    worst = std::max({worst, std::abs(psi0(t, p) - psi0_expanded(t, p)), std::abs(psi0(t, p) - psi0_cartesian(x))});
  }
  CHECK(worst < 1e-12);

  // Plane and sphere forms under the stereographic identification.
  double plane = 0;
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      const double pb = 0.25 * i, tb = 0.25 * j;
      const Eigen::Vector2d a = sphere_angles(plane_to_sphere(pb, tb));
      plane = std::max(plane, std::abs(psi0_plane(pb, tb) - psi0(a(0), a(1))));
    }
  CHECK(plane < 1e-8);
}

}
