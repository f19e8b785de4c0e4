#include "wlab/morse.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wlab::morse {

void require_distinct(const Vec3d& alpha) {
  const double scale = std::max(1.0, alpha.cwiseAbs().maxCoeff());
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (std::abs(alpha(a) - alpha(b)) <= 1e-13 * scale)
        throw NotMorse("F is not Morse: the eigenvalues of the Ricci form must be distinct");
}

double f_value(const Vec3d& alpha, const Vec6& x) {
  double f = 0;
  for (int i = 0; i < 3; ++i) f += alpha(i) * (x(i) * x(i) - x(i + 3) * x(i + 3));
  return f;
}

Mat3d rotation_from(const Vec6& x) {
  const Vec3d a = x.head<3>(), b = x.tail<3>();
  Mat3d R;
  R.col(0) = a.cross(b);
  R.col(1) = a;
  R.col(2) = b;
  return R;
}

Vec6 coordinates_of(const Mat3d& R) {
  Vec6 x;
  x << R.col(1), R.col(2);
  return x;
}

Eigen::Matrix<double, 9, 1> lagrange_residual(const Vec3d& alpha, const Vec6& x, double lambda, double mu,
                                              double nu) {
  Eigen::Matrix<double, 9, 1> r;
  for (int i = 0; i < 3; ++i) {
    r(i) = 2 * (alpha(i) - lambda) * x(i) - nu * x(i + 3);
    r(i + 3) = nu * x(i) + 2 * (mu + alpha(i)) * x(i + 3);
  }
  r(6) = x.head<3>().squaredNorm() - 1;
  r(7) = x.tail<3>().squaredNorm() - 1;
  r(8) = x.head<3>().dot(x.tail<3>());
  return r;
}

namespace {

using Mat9 = Eigen::Matrix<double, 9, 9>;
using Vec9 = Eigen::Matrix<double, 9, 1>;

Mat9 lagrange_jacobian(const Vec3d& alpha, const Vec6& x, double lambda, double mu, double nu) {
  Mat9 J = Mat9::Zero();
  for (int i = 0; i < 3; ++i) {
    J(i, i) = 2 * (alpha(i) - lambda);
    J(i, i + 3) = -nu;
    J(i, 6) = -2 * x(i);
    J(i, 8) = -x(i + 3);
    J(i + 3, i) = nu;
    J(i + 3, i + 3) = 2 * (mu + alpha(i));
    J(i + 3, 7) = 2 * x(i + 3);
    J(i + 3, 8) = x(i);
    J(6, i) = 2 * x(i);
    J(7, i + 3) = 2 * x(i + 3);
    J(8, i) = x(i + 3);
    J(8, i + 3) = x(i);
  }
  return J;
}

Mat3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Mat3d g;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g(a, b) = n01(rng);
  Eigen::HouseholderQR<Mat3d> qr(g);
  Mat3d q = qr.householderQ();
  const Mat3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 3; ++c)
    if (r(c, c) < 0) q.col(c) *= -1;
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

RotationPoint make_point(const Vec3d& alpha, const Vec6& x, double lambda, double mu, double nu) {
  RotationPoint p;
  p.x = x;
  p.R = rotation_from(x);
  p.lambda = lambda;
  p.mu = mu;
  p.nu = nu;
  p.F = f_value(alpha, x);
  Eigen::SelfAdjointEigenSolver<Mat3d> es(tangent_hessian(alpha, x, lambda, mu, nu), Eigen::EigenvaluesOnly);
  p.hessian = es.eigenvalues();
  p.index = static_cast<int>((p.hessian.array() < 0).count());
  p.constraint_residual = lagrange_residual(alpha, x, lambda, mu, nu).tail<3>().cwiseAbs().maxCoeff();
  return p;
}

}  // namespace

Mat3d tangent_hessian(const Vec3d& alpha, const Vec6& x, double lambda, double mu, double nu) {
  Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    H(i, i) = 2 * (alpha(i) - lambda);
    H(i + 3, i + 3) = -2 * (alpha(i) + mu);
    H(i, i + 3) = H(i + 3, i) = -nu;
  }
  const Vec3d a = x.head<3>(), b = x.tail<3>();
  Eigen::Matrix<double, 6, 3> T;
  for (int k = 0; k < 3; ++k) {
    const Vec3d w = Vec3d::Unit(k);
    T.col(k) << w.cross(a), w.cross(b);
  }
  return 0.5 * T.transpose() * H * T;
}

std::vector<RotationPoint> f_critical_enumerate(const Vec3d& alpha) {
  require_distinct(alpha);
  std::vector<RotationPoint> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const int k = 3 - i - j;
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          Vec6 x = Vec6::Zero();
          x(i) = si;
          x(3 + j) = sj;
          RotationPoint p = make_point(alpha, x, alpha(i), -alpha(j), 0.0);
          Vec3d analytic(alpha(k) - alpha(i), 2 * (alpha(j) - alpha(i)), alpha(j) - alpha(k));
          std::sort(analytic.data(), analytic.data() + 3);
          p.hessian = analytic;
          p.index = static_cast<int>((analytic.array() < 0).count());
          p.i = si * (i + 1);
          p.j = sj * (j + 1);
          out.push_back(p);
        }
    }
  return out;
}

SearchResult f_critical_search(const Vec3d& alpha, int n_seeds, std::uint64_t seed) {
  require_distinct(alpha);
  const std::vector<RotationPoint> reference = f_critical_enumerate(alpha);
  SearchResult res;
  res.seeds = n_seeds;
  std::mt19937_64 rng(seed);
  const double scale = std::max(1.0, alpha.cwiseAbs().maxCoeff());

  std::vector<RotationPoint> found;
  for (int s = 0; s < n_seeds; ++s) {
    const Mat3d R0 = random_rotation(rng);
    Vec9 z;
    const Vec6 x0 = coordinates_of(R0);
    double lam = 0, mu = 0;
    for (int i = 0; i < 3; ++i) {
      lam += alpha(i) * x0(i) * x0(i);
      mu -= alpha(i) * x0(i + 3) * x0(i + 3);
    }
    z << x0, lam, mu, 0.0;
    bool ok = false;
    for (int it = 0; it < 200; ++it) {
      const Vec6 x = z.head<6>();
      const Vec9 r = lagrange_residual(alpha, x, z(6), z(7), z(8));
      const double rn = r.norm();
      if (rn <= 1e-13 * scale) {
        ok = true;
        break;
      }
      const Vec9 step = lagrange_jacobian(alpha, x, z(6), z(7), z(8)).fullPivLu().solve(-r);
      if (!step.allFinite()) break;
      double t = 1;
      for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
        const Vec9 zn = z + t * step;
        if (lagrange_residual(alpha, zn.head<6>(), zn(6), zn(7), zn(8)).norm() < (1 - 1e-4 * t) * rn) break;
      }
      z += t * step;
    }
    if (!ok) continue;
    ++res.converged;
    found.push_back(make_point(alpha, z.head<6>(), z(6), z(7), z(8)));
  }

  // Deterministic clustering: sort lexicographically, then merge within the radius.
  std::sort(found.begin(), found.end(), [](const RotationPoint& a, const RotationPoint& b) {
    return std::lexicographical_compare(a.x.data(), a.x.data() + 6, b.x.data(), b.x.data() + 6);
  });
  std::vector<RotationPoint> clusters;
  for (const RotationPoint& p : found) {
    bool merged = false;
    for (const RotationPoint& c : clusters)
      if ((c.x - p.x).norm() < cluster_radius) {
        merged = true;
        break;
      }
    if (!merged) clusters.push_back(p);
  }

  for (RotationPoint& c : clusters) {
    const RotationPoint* best = nullptr;
    double dist = 1e300;
    for (const RotationPoint& ref : reference) {
      const double d = (ref.x - c.x).norm();
      if (d < dist) {
        dist = d;
        best = &ref;
      }
    }
    if (dist > 1e-6) {
      std::ostringstream os;
      os << "converged critical point not in the enumeration (distance " << dist << ")";
      throw ConvergenceError(os.str());
    }
    c.i = best->i;
    c.j = best->j;
    res.max_match_error = std::max(res.max_match_error, dist);
    res.max_spectrum_error =
        std::max(res.max_spectrum_error, (c.hessian - best->hessian).cwiseAbs().maxCoeff() / scale);
    const double lo = c.hessian.cwiseAbs().minCoeff(), hi = c.hessian.cwiseAbs().maxCoeff();
    res.condition = std::max(res.condition, hi / lo);
  }
  if (res.condition > 1e4) {
    std::ostringstream os;
    os << "near-degenerate eigenvalues: Hessian condition number " << res.condition;
    res.warnings.push_back(os.str());
  }
  res.points = std::move(clusters);
  return res;
}

std::array<int, 4> index_counts(const std::vector<RotationPoint>& pts) {
  std::array<int, 4> c{};
  for (const RotationPoint& p : pts) ++c.at(p.index);
  return c;
}

Counts7 tilde_c(const Counts4& c) {
  Counts7 t{};
  t[2] = 4 * c[0];
  for (int q = 3; q <= 5; ++q) t[q] = 4 * c[q - 2] + 2 * c[q - 3];
  t[6] = 2 * c[3];
  return t;
}

Counts7 tilde_c_from_points(const Counts4& c, const std::vector<RotationPoint>& so3) {
  Counts7 twice{};
  for (int p = 0; p < 4; ++p)
    for (const RotationPoint& r : so3) {
      if (!(r.F < 0)) continue;
      const int q = p + (3 - r.index);  // index of -Hess F
      twice.at(q) += c[p];
    }
  Counts7 t{};
  for (int q = 0; q < 7; ++q) {
    if (twice[q] % 2) throw std::logic_error("odd count before halving");
    t[q] = twice[q] / 2;
  }
  return t;
}

TildeBeta tilde_beta(const Counts4& b) {
  TildeBeta out;
  if (b[0] != 1) out.warnings.push_back("beta_0 != 1: M is assumed connected");
  out.beta = {1, b[1] + 1, b[1] + b[2] + 1, b[1] + b[2] + 1, b[2] + 1, 1, 0};
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 3; ++q) out.kunneth[p + q] += b[p];
  return out;
}

Multiplicity multiplicity_bound(const Counts7& beta_t, const Counts7& c_t) {
  Multiplicity m;
  for (int q = 0; q <= 4; ++q) {
    m.surplus[q] = std::max(beta_t[q] - c_t[q], 0);
    m.bound += m.surplus[q];
  }
  return m;
}

Counts4 betti_preset(const std::string& name) {
  if (name == "s3") return {1, 0, 0, 1};
  if (name == "s2xs1") return {1, 1, 1, 1};
  if (name == "t3") return {1, 3, 3, 1};
  throw std::invalid_argument("unknown manifold preset '" + name + "' (s3, s2xs1, t3)");
}

double g_r_eval(double sc, const ambient::Curvature& curv, const Mat3d& R, double r) {
  if (!(r >= 0 && r < 1)) throw std::domain_error("G_r needs r in [0, 1)");
  return -sc - g_r_coefficient * ambient::f_function(curv, R) * (1 - r) * (1 - r);
}

}  // namespace wlab::morse
