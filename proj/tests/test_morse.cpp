#include "wlab/morse.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace wlab;
using namespace wlab::morse;

namespace {

const RotationPoint& labelled(const std::vector<RotationPoint>& pts, int i, int j) {
  const auto it = std::find_if(pts.begin(), pts.end(), [&](const RotationPoint& p) { return p.i == i && p.j == j; });
  REQUIRE(it != pts.end());
  return *it;
}

}  // namespace

TEST_SUITE("morse") {

TEST_CASE("enumeration for alpha = (1, 2, 3)") {
  const Vec3d a(1, 2, 3);
  const auto pts = f_critical_enumerate(a);
  REQUIRE(pts.size() == 24);
  CHECK(index_counts(pts) == std::array<int, 4>{4, 8, 8, 4});
  for (const auto& p : pts) {
    CHECK(p.constraint_residual <= 1e-10);
    CHECK(std::abs(p.nu) <= 1e-8);
    CHECK(p.R.determinant() == doctest::Approx(1.0));
    CHECK(lagrange_residual(a, p.x, p.lambda, p.mu, p.nu).norm() < 1e-12);
    CHECK(p.F == doctest::Approx(f_value(a, p.x)));
    CHECK((p.index >= 2) == (p.F > 0));
    if (p.index == 0) CHECK(p.F == doctest::Approx(-2));
    if (p.index == 3) CHECK(p.F == doctest::Approx(2));
  }
  const RotationPoint& p23 = labelled(pts, 2, 3);
  CHECK(p23.F == doctest::Approx(-1));
  CHECK(p23.index == 1);
  CHECK((p23.hessian - Vec3d(-1, 2, 2)).norm() < 1e-12);

  // Euler characteristic of SO(3).
  const auto c = index_counts(pts);
  CHECK(c[0] - c[1] + c[2] - c[3] == 0);
}

TEST_CASE("tangent Hessian against second differences of F") {
  const Vec3d a(0.3, 1.7, 2.2);
  for (const auto& p : f_critical_enumerate(a)) {
    const Mat3d H = tangent_hessian(a, p.x, p.lambda, p.mu, p.nu);
    Eigen::SelfAdjointEigenSolver<Mat3d> es(H);
    CHECK((es.eigenvalues() - p.hessian).norm() < 1e-10);
    // Along a one-parameter subgroup R exp(t w^) the second derivative of F is 2 w^T H w.
    const double h = 1e-4;
    for (int k = 0; k < 3; ++k) {
      const Mat3d G = Eigen::AngleAxisd(h, Vec3d::Unit(k)).toRotationMatrix();
      const double fp = f_value(a, coordinates_of(Mat3d(p.R * G)));
      const double fm = f_value(a, coordinates_of(Mat3d(p.R * G.transpose())));
      const double d2 = (fp - 2 * p.F + fm) / (h * h);
      const Vec3d w = p.R * Vec3d::Unit(k);
      CHECK(d2 == doctest::Approx(2 * w.dot(H * w)).epsilon(1e-5).scale(1));
    }
  }
}

TEST_CASE("search reproduces the enumeration") {
  std::mt19937_64 g(31);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int k = 0; k < 5; ++k) {
    Vec3d a(U(g), U(g), U(g));
    std::sort(a.data(), a.data() + 3);
    const SearchResult r = f_critical_search(a, 500, 100 + k);
    CHECK(r.points.size() == 24);
    CHECK(index_counts(r.points) == std::array<int, 4>{4, 8, 8, 4});
    CHECK(r.max_match_error < 1e-6);
    CHECK(r.max_spectrum_error < 1e-6);
  }
  const SearchResult a = f_critical_search(Vec3d(1, 2, 3), 200, 7), b = f_critical_search(Vec3d(1, 2, 3), 200, 7);
  CHECK(a.converged == b.converged);
  CHECK(a.max_match_error == b.max_match_error);
}

TEST_CASE("near-degenerate and degenerate eigenvalues") {
  const SearchResult r = f_critical_search(Vec3d(0, 1, 1 + 1e-6), 500, 3);
  CHECK(r.points.size() == 24);
  CHECK(r.condition > 1e5);
  CHECK(!r.warnings.empty());
  CHECK_THROWS_AS(f_critical_enumerate(Vec3d(2, 2, 2)), NotMorse);
  CHECK_THROWS_AS(f_critical_search(Vec3d(1, 1, 3), 200, 1), NotMorse);
}

TEST_CASE("scaling equivariance") {
  const Vec3d a(1, 2, 3);
  const auto base = f_critical_enumerate(a);
  const auto shifted = f_critical_enumerate(Vec3d(a + Vec3d::Constant(5)));
  const auto scaled = f_critical_enumerate(Vec3d(2.5 * a));
  for (std::size_t k = 0; k < base.size(); ++k) {
    CHECK(shifted[k].i == base[k].i);
    CHECK(shifted[k].index == base[k].index);
    CHECK(shifted[k].F == doctest::Approx(base[k].F));
    CHECK(scaled[k].index == base[k].index);
    CHECK(scaled[k].F == doctest::Approx(2.5 * base[k].F));
    CHECK((scaled[k].hessian - 2.5 * base[k].hessian).norm() < 1e-12);
  }
}

TEST_CASE("counting tables") {
  CHECK(tilde_c({1, 0, 0, 1}) == Counts7{0, 0, 4, 2, 0, 4, 2});
  CHECK(tilde_c({0, 0, 0, 0}) == Counts7{});
  CHECK(tilde_c({1, 3, 3, 1}) == Counts7{0, 0, 4, 14, 18, 10, 2});

  CHECK(tilde_beta(betti_preset("s3")).beta == Counts7{1, 1, 1, 1, 1, 1, 0});
  CHECK(tilde_beta(betti_preset("s2xs1")).beta == Counts7{1, 2, 3, 3, 2, 1, 0});
  CHECK(tilde_beta(betti_preset("t3")).beta == Counts7{1, 4, 7, 7, 4, 1, 0});
  for (const char* name : {"s3", "s2xs1", "t3"}) {
    const TildeBeta t = tilde_beta(betti_preset(name));
    CHECK(t.beta == t.kunneth);
    for (int q = 0; q <= 5; ++q) CHECK(t.beta[q] == t.beta[5 - q]);
  }
  CHECK(!tilde_beta({2, 0, 0, 2}).warnings.empty());
  CHECK_THROWS_AS(betti_preset("klein"), std::invalid_argument);

  const Multiplicity t3 = multiplicity_bound(tilde_beta(betti_preset("t3")).beta, tilde_c({1, 3, 3, 1}));
  CHECK(t3.surplus == std::array<int, 5>{1, 4, 3, 0, 0});
  CHECK(t3.bound == 8);
  const Multiplicity s3 = multiplicity_bound(tilde_beta(betti_preset("s3")).beta, tilde_c({1, 0, 0, 1}));
  CHECK(s3.surplus == std::array<int, 5>{1, 1, 0, 0, 1});
  CHECK(s3.bound == 3);

  std::mt19937_64 g(32);
  std::uniform_int_distribution<int> U(0, 6);
  const auto so3 = f_critical_enumerate(Vec3d(1, 2, 3));
  for (int k = 0; k < 50; ++k) {
    const Counts4 c{U(g), U(g), U(g), U(g)};
    const Counts4 b{1, U(g), U(g), 1};
    CHECK(tilde_c_from_points(c, so3) == tilde_c(c));
    CHECK(multiplicity_bound(tilde_beta(b).beta, tilde_c(c)).bound >= 2);
  }
}

TEST_CASE("reduced boundary energy") {
  const auto c = ambient::Curvature::from_eigenvalues(Vec3d(1, 2, 3));
  const Mat3d I = Mat3d::Identity();
  CHECK(g_r_coefficient == doctest::Approx(0.0694785).epsilon(1e-5));
  CHECK(g_r_eval(6, c, I, 0.9) == doctest::Approx(-5.99930).epsilon(1e-6));
  CHECK(g_r_eval(6, c, I, 1 - 1e-9) == doctest::Approx(-6).epsilon(1e-12));
  const auto iso = ambient::Curvature::from_ricci(Mat3d(3.0 * Mat3d::Identity()));
  const Mat3d R = Eigen::AngleAxisd(0.8, Vec3d(1, 1, 0).normalized()).toRotationMatrix();
  CHECK(g_r_eval(9, iso, R, 0.2) == doctest::Approx(-9).epsilon(1e-14));
}

}
