#include "wlab/sphere_asymptotics.hpp"

#include "wlab/spectral.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace wlab::sphere {

using constants::A_coef;
using constants::A_tilde;
using constants::B_coef;
using constants::pi;

namespace {

void check_open(double theta) {
  if (!(theta > 0 && theta < pi)) throw std::domain_error("theta must lie in (0, pi); the poles are excluded");
}

double bilinear(const Mat3d& m, const Vec3d& a, const Vec3d& b) { return a.dot(m * b); }

Mat3d directional(const Tensor3<double>& dh, const Vec3d& v) { return v(0) * dh[0] + v(1) * dh[1] + v(2) * dh[2]; }

// sum_i e_i(h_ni), differentiating h(X)(n0, e_i) along the coordinate lines
// with the frame derivatives d_t n0 = e1, d_t e1 = -n0, d_p n0 = sin t e2,
// d_p e2 = -(sin t n0 + cos t e1).
double divergence_hn(const SphereFrame& f, const Mat3d& h, const Tensor3<double>& dh) {
  const double hnn = bilinear(h, f.n0, f.n0);
  const double e1h = bilinear(directional(dh, f.e1), f.n0, f.e1) + (bilinear(h, f.e1, f.e1) - hnn) / A_tilde;
  const double e2h = bilinear(directional(dh, f.e2), f.n0, f.e2) + (bilinear(h, f.e2, f.e2) - hnn) / A_tilde -
                     std::cos(f.theta) / (A_tilde * std::sin(f.theta)) * bilinear(h, f.n0, f.e1);
  return e1h + e2h;
}

}  // namespace

SphereFrame SphereFrame::at(double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta), cp = std::cos(phi), sp = std::sin(phi);
  SphereFrame f;
  f.theta = theta;
  f.phi = phi;
  f.n0 = Vec3d(ct, st * cp, st * sp);
  f.X = A_tilde * (f.n0 + Vec3d::UnitX());
  f.e1 = Vec3d(-st, ct * cp, ct * sp);
  f.e2 = Vec3d(0, -sp, cp);
  f.f1 = Vec3d(st, -(1 + ct) * cp, -(1 + ct) * sp);
  return f;
}

surface::ParamSurface limit_sphere(surface::Resolution res) {
  auto chart = [](double theta, double phi) {
    const double ct = std::cos(theta), st = std::sin(theta), cp = std::cos(phi), sp = std::sin(phi);
    const double a = A_tilde;
    surface::Jet j;
    j.x = a * Vec3d(1 + ct, st * cp, st * sp);
    j.xu = a * Vec3d(-st, ct * cp, ct * sp);
    j.xv = a * Vec3d(0, -st * sp, st * cp);
    j.xuu = a * Vec3d(-ct, -st * cp, -st * sp);
    j.xuv = a * Vec3d(0, -ct * sp, ct * cp);
    j.xvv = a * Vec3d(0, -st * cp, -st * sp);
    return j;
  };
  return surface::ParamSurface(chart, surface::Topology::Sphere, res, 1);
}

Cutoff::Cutoff(double delta) : delta_(delta) {
  if (!(delta > 0)) throw std::domain_error("cut-off radius must be positive");
}

double Cutoff::operator()(double r) const {
  const double s = (r - delta_) / delta_;
  if (s <= 0) return 1;
  if (s >= 1) return 0;
  return 1 - s * s * s * (10 - 15 * s + 6 * s * s);
}

double Cutoff::d1(double r) const {
  const double s = (r - delta_) / delta_;
  if (s <= 0 || s >= 1) return 0;
  return -30 * s * s * (1 - s) * (1 - s) / delta_;
}

double Cutoff::d2(double r) const {
  const double s = (r - delta_) / delta_;
  if (s <= 0 || s >= 1) return 0;
  return -60 * s * (1 - s) * (1 - 2 * s) / (delta_ * delta_);
}

double Cutoff::on_sphere(double theta) const { return (*this)(2 * A_tilde * std::cos(theta / 2)); }

double Cutoff::theta_at_radius(double r) { return 2 * std::acos(r / (2 * A_tilde)); }

double laplacian_psi0(double theta, double phi) {
  check_open(theta);
  const double ct = std::cos(theta);
  return (-2 * A_coef * ct + 2 * B_coef * std::cos(2 * phi) * (ct - 2 / (1 + ct))) / (A_tilde * A_tilde);
}

double metric_derivative_H(double theta, double phi, const ambient::Curvature& curv) {
  check_open(theta);
  const SphereFrame f = SphereFrame::at(theta, phi);
  const Mat3d h = ambient::h_tensor(curv, f.X);
  const Tensor3<double> dh = ambient::h_gradient(ambient::h_second_derivatives(curv), f.X);
  const Mat3d& R = curv.ric;
  const Vec3d ex = Vec3d::UnitX();
  const double ct = std::cos(theta);
  const double bracket = -curv.sc / 6 * (1 + ct) - bilinear(R, f.f1, f.e1) * ct / 3 -
                         (1 + ct) * bilinear(R, f.n0, ex) / 3 + bilinear(R, f.n0, f.n0) * ct / 3 +
                         bilinear(R, ex, ex) / 3;
  return -divergence_hn(f, h, dh) + A_tilde * bracket;
}

double metric_derivative_H_tensor(double theta, double phi, const ambient::Curvature& curv) {
  check_open(theta);
  const SphereFrame f = SphereFrame::at(theta, phi);
  const Mat3d h = ambient::h_tensor(curv, f.X);
  const Tensor3<double> dh = ambient::h_gradient(ambient::h_second_derivatives(curv), f.X);
  const Mat3d dn = directional(dh, f.n0);
  const double curvature_e2e2_e1 = -std::cos(theta) / (A_tilde * std::sin(theta));
  return -divergence_hn(f, h, dh) + bilinear(h, f.n0, f.e1) * curvature_e2e2_e1 -
         0.5 * bilinear(h, f.n0, f.n0) * (2 / A_tilde) +
         0.5 * (bilinear(dn, f.e1, f.e1) + bilinear(dn, f.e2, f.e2));
}

AppendixTargets appendix_targets(const ambient::Curvature& curv) {
  const double base = pi * A_tilde * B_coef * (curv.ric(1, 1) - curv.ric(2, 2));
  return {4.0 / 3.0 * base, 4 * base, 16.0 / 3.0 * base};
}

namespace {

struct Piece {
  double a, b;
};

// Intervals in theta on which the cut-off integrands are smooth: [0, pi/2],
// a geometric approach to theta(2 delta) where Laplace psi0 grows like
// (pi - theta)^-2, and the transition band [theta(2 delta), theta(delta)].
std::vector<Piece> theta_pieces(double delta) {
  const double t2 = Cutoff::theta_at_radius(2 * delta);
  const double t1 = Cutoff::theta_at_radius(delta);
  std::vector<Piece> out{{0, pi / 2}};
  double d = pi / 2;
  const double d_end = pi - t2;
  while (d / 3 > d_end) {
    out.push_back({pi - d, pi - d / 3});
    d /= 3;
  }
  out.push_back({pi - d, t2});
  out.push_back({t2, t1});
  return out;
}

AppendixIntegrals integrate_once(double delta, const ambient::Curvature& curv, int n_gauss, int n_phi) {
  const Cutoff chi(delta);
  const double a2 = A_tilde * A_tilde;
  AppendixIntegrals r;
  r.delta = delta;
  for (const Piece& p : theta_pieces(delta)) {
    const spectral::GaussRule g = spectral::gauss_legendre(n_gauss, p.a, p.b);
    for (int k = 0; k < g.nodes.size(); ++k) {
      const double th = g.nodes(k);
      const double st = std::sin(th), ct = std::cos(th);
      const double rad = 2 * A_tilde * std::cos(th / 2);
      const double c = chi(rad);
      const double rp = -A_tilde * std::sin(th / 2), rpp = -0.5 * A_tilde * std::cos(th / 2);
      const double c_t = chi.d1(rad) * rp;
      const double c_tt = chi.d2(rad) * rp * rp + chi.d1(rad) * rpp;
      const double lap_chi = (c_tt + ct / st * c_t) / a2;
      double ric = 0, fl = 0, moved = 0;
      for (int j = 0; j < n_phi; ++j) {
        const double ph = 2 * pi * j / n_phi;
        const SphereFrame f = SphereFrame::at(th, ph);
        const double cos2 = std::cos(2 * ph);
        const double psi = A_coef * ct + B_coef * (1 - ct) * cos2;
        const double psi_t = (-A_coef + B_coef * cos2) * st;
        const double F = metric_derivative_H(th, ph, curv);
        const double lap = laplacian_psi0(th, ph);
        ric += (1 - c) * (2 / A_tilde) * bilinear(curv.ric, f.n0, f.n0) * psi;
        fl += (1 - c) * F * lap;
        moved += F * ((1 - c) * lap - lap_chi * psi - 2 * c_t * psi_t / a2);
      }
      const double w = g.weights(k) * a2 * st * 2 * pi / n_phi;
      r.I_ric += w * ric;
      r.I_F += w * fl;
      r.I_F_moved += w * moved;
    }
  }
  r.I_total = r.I_ric + r.I_F;
  return r;
}

}  // namespace

AppendixIntegrals appendix_integrals(double delta, const ambient::Curvature& curv) {
  if (!(delta > 0 && 2 * delta < 2 * A_tilde)) throw std::domain_error("delta outside the sphere's radius range");
  const AppendixIntegrals coarse = integrate_once(delta, curv, 20, 16);
  AppendixIntegrals fine = integrate_once(delta, curv, 40, 32);
  const double scale = std::max({std::abs(fine.I_ric), std::abs(fine.I_F), 1e-300});
  fine.quadrature_error = std::max({std::abs(fine.I_ric - coarse.I_ric), std::abs(fine.I_F - coarse.I_F),
                                    std::abs(fine.I_F_moved - coarse.I_F_moved)}) /
                          scale;
  if (fine.quadrature_error > 1e-9 && scale > 1e-12)
    throw ConvergenceError("appendix_integrals: quadrature did not converge");
  return fine;
}

std::vector<BasicIntegral> basic_integrals() {
  const spectral::GaussRule g = spectral::gauss_legendre(32, 0, pi);
  auto theta_int = [&](const std::function<double(double)>& f) {
    double s = 0;
    for (int k = 0; k < g.nodes.size(); ++k) s += g.weights(k) * f(g.nodes(k));
    return s;
  };
  auto phi_int = [](const std::function<double(double)>& f) {
    const int n = 64;
    double s = 0;
    for (int j = 0; j < n; ++j) s += f(2 * pi * j / n);
    return s * 2 * pi / n;
  };
  using std::cos;
  using std::sin;
  auto p3 = [](double x) { return x * x * x; };
  return {
      {"int_0^pi cos^3 t sin t", theta_int([&](double t) { return p3(cos(t)) * sin(t); }), 0.0},
      {"int_0^pi sin t cos t", theta_int([](double t) { return sin(t) * cos(t); }), 0.0},
      {"int_0^pi cos t sin^3 t", theta_int([&](double t) { return cos(t) * p3(sin(t)); }), 0.0},
      {"int_0^2pi cos^2 p cos 2p", phi_int([](double p) { return cos(p) * cos(p) * cos(2 * p); }), pi / 2},
      {"-int_0^2pi cos 2p sin^2 p", phi_int([](double p) { return -cos(2 * p) * sin(p) * sin(p); }), pi / 2},
      {"int_0^2pi cos 2p sin p cos p", phi_int([](double p) { return cos(2 * p) * sin(p) * cos(p); }), 0.0},
      {"int_0^2pi cos 2p cos p", phi_int([](double p) { return cos(2 * p) * cos(p); }), 0.0},
      {"int_0^2pi cos 2p sin p", phi_int([](double p) { return cos(2 * p) * sin(p); }), 0.0},
      {"int_0^pi sin^3 t", theta_int([&](double t) { return p3(sin(t)); }), 4.0 / 3.0},
      {"int_0^pi cos^4 t sin t", theta_int([](double t) { return std::pow(cos(t), 4) * sin(t); }), 2.0 / 5.0},
      {"int_0^pi sin^3 t cos^2 t", theta_int([&](double t) { return p3(sin(t)) * cos(t) * cos(t); }), 4.0 / 15.0},
      {"int_0^pi sin t cos^2 t", theta_int([](double t) { return sin(t) * cos(t) * cos(t); }), 2.0 / 3.0},
  };
}

}  // namespace wlab::sphere
