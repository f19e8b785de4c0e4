#include "wlab/ambient.hpp"

#include <doctest.h>

#include <random>

using namespace wlab;
using namespace wlab::ambient;
using namespace wlab::constants;

namespace {

Curvature diag123() { return Curvature::from_ricci(6.0, Eigen::Vector3d(1, 2, 3).asDiagonal()); }

Curvature random_curvature(std::mt19937_64& g) {
  std::normal_distribution<double> N;
  Mat3d A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = N(g);
  return Curvature::from_ricci(A + A.transpose());
}

Vec3d random_point(std::mt19937_64& g, double radius) {
  std::uniform_real_distribution<double> U(-1, 1);
  Vec3d y;
  do y = Vec3d(U(g), U(g), U(g));
  while (y.norm() > 1);
  return radius * y;
}

}  // namespace

TEST_SUITE("ambient") {

TEST_CASE("curvature data validation") {
  CHECK_THROWS_AS(Curvature::from_ricci(1.0, Eigen::Vector3d(1, 2, 3).asDiagonal()), std::invalid_argument);
  Mat3d asym = Mat3d::Identity();
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(Curvature::from_ricci(asym), std::invalid_argument);
  const Mat3d Q = Eigen::AngleAxisd(0.4, Vec3d(1, 2, 0.5).normalized()).toRotationMatrix();
  const auto c = Curvature::from_eigenvalues(Vec3d(1, 2, 3), Q);
  CHECK(c.sc == doctest::Approx(6));
  CHECK((c.ric - Q * Vec3d(1, 2, 3).asDiagonal() * Q.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("h_tensor: zero at the origin, quadratic, symmetric") {
  std::mt19937_64 g(1);
  const auto c = random_curvature(g);
  CHECK(h_tensor(c, Vec3d(Vec3d::Zero())).cwiseAbs().maxCoeff() == 0.0);
  for (int k = 0; k < 20; ++k) {
    const Vec3d y = random_point(g, 3);
    const Mat3d h = h_tensor(c, y);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((h_tensor(c, Vec3d(2.5 * y)) - 6.25 * h).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("h_tensor: Ric = diag(1,2,3), y = e1") {
  const Mat3d h = h_tensor(diag123(), Vec3d(Vec3d::UnitX()));
  Mat3d expected = Mat3d::Zero();
  expected(2, 2) = -1.0 / 3.0;
  CHECK((h - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("h_tensor annihilates the radial direction for isotropic Ricci") {
  std::mt19937_64 g(2);
  const auto c = Curvature::from_ricci(Mat3d(2.7 * Mat3d::Identity()));
  for (int k = 0; k < 100; ++k) {
    const Vec3d y = random_point(g, 5);
    CHECK(std::abs(y.dot(h_tensor(c, y) * y)) < 1e-12);
  }
}

TEST_CASE("h_tensor equals 1/3 R_{a m n b} y^m y^n") {
  std::mt19937_64 g(3);
  const auto c = random_curvature(g);
  const auto rm = riemann_from_ricci(c);
  for (int k = 0; k < 10; ++k) {
    const Vec3d y = random_point(g, 2);
    Mat3d h = Mat3d::Zero();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int m = 0; m < 3; ++m)
          for (int n = 0; n < 3; ++n) h(a, b) += rm[a][m](n, b) * y(m) * y(n) / 3;
    CHECK((h - h_tensor(c, y)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("h_tensor is generic in the scalar type") {
  const CurvatureData<long double> cl = CurvatureData<long double>::from_ricci(Vec3<long double>(1, 2, 3).asDiagonal());
  const Mat3<long double> hl = h_tensor(cl, Vec3<long double>(0.3L, -0.2L, 0.7L));
  const Mat3d hd = h_tensor(diag123(), Vec3d(0.3, -0.2, 0.7));
  CHECK((hl.cast<double>() - hd).cwiseAbs().maxCoeff() < 1e-15);
  const CurvatureData<float> cf = CurvatureData<float>::from_ricci(Vec3<float>(1, 2, 3).asDiagonal());
  CHECK((h_tensor(cf, Vec3<float>(0.3f, -0.2f, 0.7f)).cast<double>() - hd).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("metric_at examples and domain") {
  const Metric am(0.1, diag123());
  CHECK((metric_at(am, Vec3d(Vec3d::Zero())) - Mat3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((metric_at(Metric(0.0, diag123()), Vec3d(1, 2, 3)) - Mat3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  Mat3d expected = Mat3d::Identity();
  expected(2, 2) = 1 - 0.01 / 3;
  CHECK((metric_at(am, Vec3d(Vec3d::UnitX())) - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(metric_at(am, Vec3d(10.5, 0, 0)), std::domain_error);
  CHECK_THROWS_AS(Metric(-0.1, diag123()), std::invalid_argument);
}

TEST_CASE("metric positivity") {
  // Positive definite while eps^2 |y|^2 |Ric| stays of order one.
  std::mt19937_64 g(4);
  for (int k = 0; k < 200; ++k) {
    const auto c = Curvature::from_eigenvalues(Vec3d(random_point(g, 1)));
    Eigen::SelfAdjointEigenSolver<Mat3d> es(metric_at(Metric(0.1, c), random_point(g, 10)));
    CHECK(es.eigenvalues().minCoeff() > 0);
  }
  // The quadratic model is indefinite at the edge of the chart for eps = 1/2.
  Eigen::SelfAdjointEigenSolver<Mat3d> edge(metric_at(Metric(0.5, diag123()), Vec3d(10, 0, 0)));
  CHECK(edge.eigenvalues().minCoeff() == doctest::Approx(1 - 25.0 / 3));
}

TEST_CASE("Christoffel symbols") {
  std::mt19937_64 g(5);
  const auto c = random_curvature(g);
  const Metric am(0.1, c);
  for (const auto& G : christoffel_at(am, Vec3d(Vec3d::Zero()))) CHECK(G.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& G : christoffel_at(Metric(0.0, c), Vec3d(1, 1, 1))) CHECK(G.cwiseAbs().maxCoeff() == 0.0);

  // Linearization against finite-difference Christoffels of metric_at.
  const double eps = 1e-3;
  const Metric small(eps, c);
  for (int k = 0; k < 100; ++k) {
    const Vec3d y = random_point(g, 5);
    const auto G = christoffel_at(small, y);
    std::array<Mat3d, 3> dg;
    const double step = 1e-4;
    for (int s = 0; s < 3; ++s) {
      const Vec3d e = step * Vec3d::Unit(s);
      dg[s] = (metric_at(small, Vec3d(y + e)) - metric_at(small, Vec3d(y - e))) / (2 * step);
    }
    double worst = 0;
    for (int kk = 0; kk < 3; ++kk)
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m) {
          const double lin = 0.5 * (dg[l](kk, m) + dg[m](kk, l) - dg[kk](l, m));
          worst = std::max(worst, std::abs(G[kk](l, m) - lin));
          CHECK(G[kk](l, m) == doctest::Approx(G[kk](m, l)).epsilon(1e-14));
        }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("Ricci of the perturbed metric recovers Ric_P") {
  const Metric am(1e-3, diag123());
  const Mat3d r0 = ricci_of_perturbed(am, Vec3d(Vec3d::Zero())) / 1e-6;
  CHECK((r0 - Mat3d(Eigen::Vector3d(1, 2, 3).asDiagonal())).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(ricci_of_perturbed(Metric(0.0, diag123()), Vec3d(1, 2, 3)).cwiseAbs().maxCoeff() == 0.0);

  // eps^2 coefficient by Richardson over eps in {1e-2, 1e-3}: R(eps)/eps^2 = Ric + O(eps^2).
  std::mt19937_64 g(6);
  const auto c = random_curvature(g);
  for (int k = 0; k < 20; ++k) {
    const Vec3d y = random_point(g, 10);
    const Mat3d a = ricci_of_perturbed(Metric(1e-2, c), y) / 1e-4;
    const Mat3d b = ricci_of_perturbed(Metric(1e-3, c), y) / 1e-6;
    const Mat3d extrap = b + (b - a) / 99.0;
    CHECK((extrap - c.ric).cwiseAbs().maxCoeff() < 1e-3);
  }
}

TEST_CASE("F(P, R)") {
  std::mt19937_64 g(7);
  const auto iso = Curvature::from_ricci(Mat3d(4.0 * Mat3d::Identity()));
  const Mat3d R = Eigen::AngleAxisd(1.1, Vec3d(0.2, -1, 0.4).normalized()).toRotationMatrix();
  CHECK(std::abs(f_function(iso, R)) < 1e-14);
  CHECK(f_function(diag123(), Mat3d(Mat3d::Identity())) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(f_function(diag123(), Mat3d(2 * Mat3d::Identity())), std::domain_error);
  CHECK_THROWS_AS(f_function(diag123(), Mat3d(Vec3d(1, 1, -1).asDiagonal())), std::domain_error);
  // Rotating the curvature is the same as rotating the frame.
  const auto c = random_curvature(g);
  CHECK(f_function(rotated(c, R), Mat3d(Mat3d::Identity())) == doctest::Approx(f_function(c, R)).epsilon(1e-13));
}

}
