#include "wlab/moebius.hpp"

#include "wlab/parallel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wlab::moebius {

using constants::A_tilde;
using constants::pi;
using constants::sqrt2;

namespace {

constexpr double big_radius = sqrt2 + 1.0;

int even_ceil(double x) {
  int n = static_cast<int>(std::ceil(x));
  return n + (n % 2);
}

// Second derivative of Phi_{0,eta} at y applied to (a, b).
Vec3d inversion_hessian(double eta, const Vec3d& y, const Vec3d& a, const Vec3d& b) {
  const double r2 = y.squaredNorm();
  const double ya = y.dot(a), yb = y.dot(b);
  return eta * eta * (-2 * (a * yb + b * ya + y * a.dot(b)) / (r2 * r2) + 8 * y * ya * yb / (r2 * r2 * r2));
}

}  // namespace

surface::Jet clifford_jet(double phi, double theta) {
  const double cp = std::cos(phi), sp = std::sin(phi), ct = std::cos(theta), st = std::sin(theta);
  const double rho = sqrt2 + cp;
  surface::Jet j;
  j.x = Vec3d(rho * ct, rho * st, sp);
  j.xu = Vec3d(-sp * ct, -sp * st, cp);
  j.xv = Vec3d(-rho * st, rho * ct, 0);
  j.xuu = Vec3d(-cp * ct, -cp * st, -sp);
  j.xuv = Vec3d(sp * st, -sp * ct, 0);
  j.xvv = Vec3d(-rho * ct, -rho * st, 0);
  return j;
}

Vec3d clifford_normal(double phi, double theta) {
  return Vec3d(std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta), std::sin(phi));
}

surface::ParamSurface clifford_torus(surface::Resolution res) {
  return surface::ParamSurface(clifford_jet, surface::Topology::Torus, res, clifford_orientation);
}

Vec3d y_point(double phi, double theta, double xi) {
  const double sh = std::sin(phi / 2), th = std::sin(theta / 2);
  const double rho = sqrt2 + std::cos(phi);
  return Vec3d(-(2 * sh * sh + xi) - 2 * rho * th * th, rho * std::sin(theta), std::sin(phi));
}

double y_norm2(double phi, double theta, double xi) {
  const double sh = std::sin(phi / 2), th = std::sin(theta / 2), sp = std::sin(phi);
  const double rho = sqrt2 + std::cos(phi);
  const double a = 2 * sh * sh + xi;
  return a * a + 4 * (big_radius + xi) * rho * th * th + sp * sp;
}

Quadrature quadrature_for(double xi, double density) {
  Quadrature q;
  const double kp = std::min(1.0, 1.2 * std::sqrt(xi));
  const double kt = std::min(1.0, 1.2 * std::sqrt(xi / big_radius));
  q.grade_phi.kappa = kp;
  q.grade_theta.kappa = kt;
  q.n_phi = std::max(64, even_ceil(density * 48.0 / kp));
  q.n_theta = std::max(64, even_ceil(density * 48.0 / kt));
  return q;
}

InvertedIntegrals inverted_integrals(double xi, const Quadrature& q) {
  const int np = q.n_phi, nt = q.n_theta;
  std::vector<double> s_i(nt), ct_i(nt), th2_i(nt), wt_i(nt);
  for (int j = 0; j < nt; ++j) {
    const double t = -pi + 2 * pi * j / nt;
    const double theta = q.grade_theta.map(t);
    const double th = std::sin(theta / 2);
    ct_i[j] = std::cos(theta);
    th2_i[j] = th * th;
    wt_i[j] = q.grade_theta.d1(t) * 2 * pi / nt;
  }
  std::vector<double> row4(np), row6(np);
  parallel_for(np, [&](int i) {
    const double s = -pi + 2 * pi * i / np;
    const double phi = q.grade_phi.map(s);
    const double sh = std::sin(phi / 2), sp = std::sin(phi);
    const double rho = sqrt2 + std::cos(phi);
    const double a = 2 * sh * sh + xi;
    const double base = a * a + sp * sp;
    const double c4 = 4 * (big_radius + xi) * rho;
    double acc4 = 0, acc6 = 0;
    for (int j = 0; j < nt; ++j) {
      const double r2 = base + c4 * th2_i[j];
      // f = d|Y|^2/d xi = 2 (sqrt2 + 1 + xi - rho cos theta) = 2 (a + 2 rho sin^2(theta/2))
      const double f = 2 * (a + 2 * rho * th2_i[j]);
      const double inv2 = 1.0 / r2;
      const double w = wt_i[j];
      acc4 += w * inv2 * inv2;
      acc6 += w * f * inv2 * inv2 * inv2;
    }
    const double wp = q.grade_phi.d1(s) * 2 * pi / np * rho;
    row4[i] = wp * acc4;
    row6[i] = wp * acc6;
  });
  InvertedIntegrals r;
  for (int i = 0; i < np; ++i) {
    r.I4 += row4[i];
    r.I6f += row6[i];
  }
  return r;
}

double area_of_inverted(double eta, double xi, const Quadrature& q) {
  if (!(eta > 0) || !(xi > 0)) throw std::domain_error("area_of_inverted needs eta, xi > 0");
  return std::pow(eta, 4) * inverted_integrals(xi, q).I4;
}

double area_of_inverted(double eta, double xi) {
  const double a1 = area_of_inverted(eta, xi, quadrature_for(xi));
  const double a2 = area_of_inverted(eta, xi, quadrature_for(xi, refine_density));
  if (std::abs(a2 - a1) > 1e-8 * std::abs(a2)) {
    std::ostringstream os;
    os << "graded quadrature did not stabilize 8 digits at eta=" << eta << ", xi=" << xi << " (" << a1 << " vs " << a2
       << ")";
    throw ConvergenceError(os.str());
  }
  return a2;
}

double DegenerationState::xi_combination() const { return (xi_prime * eta - 2 * xi) / std::pow(eta, 4); }

namespace {

struct Newton {
  double eta;
  Quadrature q;
  double lo, hi;

  double g(double xi) const { return area_of_inverted(eta, xi, q) - constants::clifford_area; }

  double solve(double xi) {
    const double e4 = std::pow(eta, 4);
    for (int it = 0; it < 200; ++it) {
      const InvertedIntegrals I = inverted_integrals(xi, q);
      const double G = e4 * I.I4 - constants::clifford_area;
      if (G > 0)
        lo = std::max(lo, xi);
      else
        hi = std::min(hi, xi);
      if (std::abs(G) <= 1e-14 * constants::clifford_area) return xi;
      double next = xi + G / (2 * e4 * I.I6f);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - xi) <= 1e-15 * xi) return next;
      xi = next;
    }
    return xi;
  }
};

}  // namespace

DegenerationState solve_xi(double eta) {
  if (!(eta > 0 && eta < 1)) throw std::domain_error("solve_xi needs eta in (0, 1)");
  DegenerationState st;
  st.eta = eta;
  if (eta < eta_window_lo || eta > eta_window_hi) {
    std::ostringstream os;
    os << "eta=" << eta << " outside the operating window [" << eta_window_lo << ", " << eta_window_hi << "]";
    st.warnings.push_back(os.str());
  }
  const double guess = eta * eta / (2 * A_tilde);
  Newton nw{eta, quadrature_for(guess, 0.4), guess, guess};

  int expand = 0;
  while (nw.g(nw.lo) <= 0) {
    nw.lo *= 0.5;
    if (++expand > 60) throw ConvergenceError("solve_xi: no lower bracket; area not decreasing from xi -> 0");
  }
  expand = 0;
  while (nw.g(nw.hi) >= 0) {
    nw.hi *= 2;
    if (++expand > 60) throw ConvergenceError("solve_xi: no upper bracket; area not decreasing in xi");
  }
  double xi = nw.solve(std::sqrt(nw.lo * nw.hi));

  // Re-mesh at full density for the solved offset and polish.
  Newton polish{eta, quadrature_for(xi), 0.5 * xi, 2 * xi};
  if (polish.g(polish.lo) <= 0 || polish.g(polish.hi) >= 0) throw ConvergenceError("solve_xi: polish bracket lost");
  xi = polish.solve(xi);

  st.xi = xi;
  st.quad = polish.q;
  const InvertedIntegrals I = inverted_integrals(xi, st.quad);
  st.xi_prime = 2 * I.I4 / (eta * I.I6f);
  st.area_residual = std::abs(std::pow(eta, 4) * I.I4 - constants::clifford_area) / constants::clifford_area;
  const InvertedIntegrals I2 = inverted_integrals(xi, quadrature_for(xi, refine_density));
  st.self_convergence = std::abs(I2.I4 - I.I4) / std::abs(I2.I4);
  if (st.area_residual > 1e-8) throw ConvergenceError("solve_xi: area residual above 1e-8");
  return st;
}

MoebiusMap::MoebiusMap(const MoebiusParam& p) : param_(p) {
  const double r = p.r();
  if (!(r < 1)) throw std::domain_error("T_omega needs |omega| < 1");
  if (r == 0) return;
  *this = MoebiusMap(p, solve_xi(1 - r));
}

MoebiusMap::MoebiusMap(const MoebiusParam& p, DegenerationState state) : param_(p), state_(std::move(state)) {
  if (!(p.r() < 1)) throw std::domain_error("T_omega needs |omega| < 1");
  identity_ = p.r() == 0;
  M_ = rotation_z(p.angle()) * reflect_x();
}

Vec3d MoebiusMap::operator()(const Vec3d& x) const {
  if (identity_) return x;
  const Vec3d y = x - (big_radius + state_.xi) * Vec3d::UnitX();
  return M_ * inversion<double>(Vec3d::Zero(), state_.eta, y);
}

surface::Jet MoebiusMap::torus_jet(double phi, double theta) const {
  const surface::Jet X = clifford_jet(phi, theta);
  if (identity_) return X;
  const double eta = state_.eta;
  const Vec3d y = y_point(phi, theta, state_.xi);
  const double r2 = y_norm2(phi, theta, state_.xi);
  const Mat3d D = M_ * (eta * eta / r2 * (Mat3d::Identity() - 2 * y * y.transpose() / r2));
  surface::Jet z;
  z.x = M_ * (eta * eta * y / r2);
  z.xu = D * X.xu;
  z.xv = D * X.xv;
  z.xuu = M_ * inversion_hessian(eta, y, X.xu, X.xu) + D * X.xuu;
  z.xuv = M_ * inversion_hessian(eta, y, X.xu, X.xv) + D * X.xuv;
  z.xvv = M_ * inversion_hessian(eta, y, X.xv, X.xv) + D * X.xvv;
  return z;
}

Vec3d t_omega(const MoebiusParam& p, const Vec3d& x) { return MoebiusMap(p)(x); }

surface::ParamSurface moebius_torus(const MoebiusMap& map, surface::Resolution res, bool graded) {
  Quadrature mesh;
  if (graded && !map.identity()) mesh = quadrature_for(map.state().xi);
  return moebius_torus(map, res, mesh);
}

surface::ParamSurface moebius_torus(const MoebiusMap& map, surface::Resolution res, const Quadrature& mesh) {
  auto chart = [map](double phi, double theta) { return map.torus_jet(phi, theta); };
  return surface::ParamSurface(chart, surface::Topology::Torus, res, clifford_orientation, mesh.grade_phi,
                               mesh.grade_theta);
}

surface::Resolution default_resolution(const MoebiusMap& map, double density) {
  if (map.identity()) {
    const int n = even_ceil(128 * density);
    return {n, n};
  }
  const Quadrature q = quadrature_for(map.state().xi, density);
  return {q.n_phi, q.n_theta};
}

double sphere_deviation(const MoebiusParam& p, double delta, surface::Resolution res) {
  const MoebiusMap map(p);
  const surface::ParamSurface s = moebius_torus(map, res);
  const Vec3d center = A_tilde * Vec3d(std::cos(p.angle()), std::sin(p.angle()), 0);
  double worst = 0;
  for (int i = 0; i < res.nu; ++i)
    for (int j = 0; j < res.nv; ++j) {
      const Vec3d x = s.jet(i, j).x;
      if (x.norm() <= delta) continue;
      worst = std::max(worst, std::abs((x - center).norm() - A_tilde));
    }
  return worst;
}

Vec3d z_map(double phi_bar, double theta_bar, const DegenerationState& s) {
  const double e2 = s.eta * s.eta;
  const Vec3d y = y_point(e2 * phi_bar, e2 * theta_bar, s.xi);
  return e2 * y / y_norm2(e2 * phi_bar, e2 * theta_bar, s.xi);
}

Vec3d z0_map(double phi_bar, double theta_bar) {
  const Vec3d y(-1 / (2 * A_tilde), big_radius * theta_bar, phi_bar);
  return y / y.squaredNorm();
}

double phi_eta(double phi, double theta, const DegenerationState& s) {
  const double sh = std::sin(phi / 2), th = std::sin(theta / 2);
  const double cp = std::cos(phi);
  // h = 2 (sqrt2 cos phi + 1 - (sqrt2 + 1) cos phi cos theta)
  const double h = 2 * (2 * sh * sh + 2 * big_radius * cp * th * th);
  const double k = s.xi_prime * s.eta - 2 * s.xi;
  return -s.eta / y_norm2(phi, theta, s.xi) * (h + k * cp * std::cos(theta));
}

double psi_eta(double phi_bar, double theta_bar, const DegenerationState& s) {
  const double e2 = s.eta * s.eta;
  return phi_eta(e2 * phi_bar, e2 * theta_bar, s) / s.eta;
}

double psi0(double theta, double phi) {
  return constants::A_coef * std::cos(theta) + constants::B_coef * (1 - std::cos(theta)) * std::cos(2 * phi);
}

double psi0_cartesian(const Vec3d& x) {
  const double a = A_tilde;
  return -(x.z() * x.z() + x.y() * x.y() - (2 - sqrt2) * x.y() * x.y()) / (2 * a * x.x()) + sqrt2 / (4 * a) * x.x();
}

double psi0_expanded(double theta, double phi) {
  const double ct = std::cos(theta), cp = std::cos(phi);
  return 0.5 * (ct - 1) + (2 - sqrt2) / 2 * (1 - ct) * cp * cp + sqrt2 / 4 * (1 + ct);
}

double psi0_plane(double phi_bar, double theta_bar) {
  const double a2 = A_tilde * A_tilde;
  const double num = phi_bar * phi_bar + big_radius * theta_bar * theta_bar - sqrt2 / (8 * a2);
  const double den = phi_bar * phi_bar + big_radius * big_radius * theta_bar * theta_bar + 1 / (4 * a2);
  return -num / den;
}

Vec3d plane_to_sphere(double phi_bar, double theta_bar) {
  const double b = phi_bar * phi_bar + big_radius * big_radius * theta_bar * theta_bar + 1 / (4 * A_tilde * A_tilde);
  return Vec3d(1 / (2 * A_tilde * b), big_radius * theta_bar / b, phi_bar / b);
}

Eigen::Vector2d sphere_angles(const Vec3d& x) {
  const double c = std::clamp(x.x() / A_tilde - 1, -1.0, 1.0);
  double ph = std::atan2(x.z(), x.y());
  if (ph < 0) ph += 2 * pi;
  return {std::acos(c), ph};
}

}  // namespace wlab::moebius
