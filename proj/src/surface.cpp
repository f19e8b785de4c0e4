#include "wlab/surface.hpp"

#include "wlab/parallel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace wlab::surface {

using constants::pi;

namespace {

// Differentiation matrices are shared across evaluations of the same size.
struct DiffCache {
  std::mutex mu;
  std::map<int, std::pair<spectral::Matrix, spectral::Matrix>> periodic;
  std::map<int, spectral::PolarDiff> polar;

  const std::pair<spectral::Matrix, spectral::Matrix>& fourier(int n) {
    std::lock_guard lock(mu);
    auto it = periodic.find(n);
    if (it == periodic.end()) it = periodic.emplace(n, std::make_pair(spectral::fourier_d1(n), spectral::fourier_d2(n))).first;
    return it->second;
  }
  const spectral::PolarDiff& sphere(int n) {
    std::lock_guard lock(mu);
    auto it = polar.find(n);
    if (it == polar.end()) it = polar.emplace(n, spectral::polar_diff(n)).first;
    return it->second;
  }
};

DiffCache& diff_cache() {
  static DiffCache c;
  return c;
}

Field shift_half_turn(const Field& f) {
  const Eigen::Index m = f.cols(), h = m / 2;
  Field g(f.rows(), m);
  g.leftCols(m - h) = f.rightCols(m - h);
  g.rightCols(h) = f.leftCols(h);
  return g;
}

}  // namespace

ParamSurface::ParamSurface(Chart chart, Topology topo, Resolution res, int orientation, spectral::Grading grade_u,
                           spectral::Grading grade_v)
    : chart_(std::move(chart)), topo_(topo), res_(res), orientation_(orientation >= 0 ? 1 : -1), gu_(grade_u), gv_(grade_v) {
  if (res_.nu < 4 || res_.nv < 4) throw std::invalid_argument("surface grid needs at least 4 nodes per direction");
  if (topo_ == Topology::Sphere) {
    if (res_.nv % 2 != 0) throw std::invalid_argument("polar sphere grid needs an even phi count");
    if (!gu_.identity() || !gv_.identity()) throw std::invalid_argument("grading is only supported on torus charts");
    const Eigen::VectorXd w = spectral::fejer_weights(res_.nu);
    wu_.resize(res_.nu);
    for (int i = 0; i < res_.nu; ++i) wu_(i) = w(i) / std::sin(s(i));
  } else {
    wu_ = Eigen::VectorXd::Constant(res_.nu, 2 * pi / res_.nu);
  }
}

double ParamSurface::s(int i) const {
  return topo_ == Topology::Sphere ? (i + 0.5) * pi / res_.nu : -pi + 2 * pi * i / res_.nu;
}

double ParamSurface::t(int j) const {
  return topo_ == Topology::Sphere ? 2 * pi * j / res_.nv : -pi + 2 * pi * j / res_.nv;
}

Jet ParamSurface::jet_at(double s, double t) const {
  const double u = gu_.map(s), v = gv_.map(t);
  Jet b = chart_(u, v);
  if (gu_.identity() && gv_.identity()) return b;
  const double a1 = gu_.d1(s), a2 = gu_.d2(s), b1 = gv_.d1(t), b2 = gv_.d2(t);
  Jet j;
  j.x = b.x;
  j.xu = b.xu * a1;
  j.xv = b.xv * b1;
  j.xuu = b.xuu * (a1 * a1) + b.xu * a2;
  j.xuv = b.xuv * (a1 * b1);
  j.xvv = b.xvv * (b1 * b1) + b.xv * b2;
  return j;
}

Jet ParamSurface::jet(int i, int j) const { return jet_at(s(i), t(j)); }

double ParamSurface::weight(int i, int) const { return wu_(i) * 2 * pi / res_.nv; }

ParamSurface ParamSurface::with_resolution(Resolution res) const {
  return ParamSurface(chart_, topo_, res, orientation_, gu_, gv_);
}

ParamSurface ParamSurface::with_chart(Chart chart) const {
  return ParamSurface(std::move(chart), topo_, res_, orientation_, gu_, gv_);
}

SurfaceGeometry geometry(const ParamSurface& s, const ambient::Metric& am) {
  const auto [nu, nv] = s.resolution();
  SurfaceGeometry g;
  g.res = s.resolution();
  for (Field* f : {&g.area_density, &g.H, &g.A2, &g.Ao2, &g.ric_nn}) f->resize(nu, nv);
  for (auto& f : g.normal) f.resize(nu, nv);
  for (auto& f : g.ginv) f.resize(nu, nv);
  for (auto& f : g.christ) f.resize(nu, nv);
  for (auto& f : g.position) f.resize(nu, nv);
  std::vector<double> defect(nu, 0.0);
  std::vector<std::string> failure(nu);
  const bool curved = !am.is_flat();
  const double orient = s.orientation();

  parallel_for(nu, [&](int i) {
    for (int j = 0; j < nv; ++j) {
      const Jet J = s.jet(i, j);
      Mat3d gm = Mat3d::Identity(), gmi = Mat3d::Identity();
      Tensor3<double> G{Mat3d::Zero(), Mat3d::Zero(), Mat3d::Zero()};
      if (curved) {
        const auto mj = ambient::metric_jet(am, J.x);
        gm = mj.g;
        gmi = mj.ginv;
        G = ambient::christoffel_from_jet(mj);
      }
      const Vec3d gxu = gm * J.xu, gxv = gm * J.xv;
      Mat2d gb;
      gb << J.xu.dot(gxu), J.xu.dot(gxv), J.xu.dot(gxv), J.xv.dot(gxv);
      const double det = gb.determinant();
      if (!(det > 0)) {
        std::ostringstream os;
        os << "degenerate induced metric at node (" << i << ", " << j << "), chart point (" << s.u(i) << ", "
           << s.v(j) << ")";
        failure[i] = os.str();
        return;
      }
      const Mat2d gbi = gb.inverse();
      const Vec3d nu_cov = orient * J.xu.cross(J.xv);
      const Vec3d N = gmi * nu_cov;
      const double nn = std::sqrt(nu_cov.dot(N));
      const Vec3d n = N / nn;

      const Vec3d Duu = J.xuu + (curved ? ambient::contract(G, J.xu, J.xu) : Vec3d::Zero());
      const Vec3d Duv = J.xuv + (curved ? ambient::contract(G, J.xu, J.xv) : Vec3d::Zero());
      const Vec3d Dvv = J.xvv + (curved ? ambient::contract(G, J.xv, J.xv) : Vec3d::Zero());
      // g(n, w) = nu_cov . w / nn
      Mat2d A;
      A(0, 0) = -nu_cov.dot(Duu) / nn;
      A(0, 1) = A(1, 0) = -nu_cov.dot(Duv) / nn;
      A(1, 1) = -nu_cov.dot(Dvv) / nn;

      const double H = (gbi.array() * A.array()).sum();
      const Mat2d Am = gbi * A;
      const double A2 = (Am * Am).trace();

      // Gbar^k_ij = gbar^{kl} g(D_ij x, x_l)
      const Eigen::Vector2d cu(Duu.dot(gxu), Duu.dot(gxv)), cm(Duv.dot(gxu), Duv.dot(gxv)),
          cv(Dvv.dot(gxu), Dvv.dot(gxv));
      const Eigen::Vector2d Gu = gbi * cu, Gm = gbi * cm, Gv = gbi * cv;

      g.area_density(i, j) = std::sqrt(det);
      g.H(i, j) = H;
      g.A2(i, j) = A2;
      g.Ao2(i, j) = A2 - 0.5 * H * H;
      g.ric_nn(i, j) = curved ? n.dot(ambient::ricci_of_perturbed(am, J.x) * n) : 0.0;
      for (int k = 0; k < 3; ++k) {
        g.normal[k](i, j) = n(k);
        g.position[k](i, j) = J.x(k);
      }
      g.ginv[0](i, j) = gbi(0, 0);
      g.ginv[1](i, j) = gbi(0, 1);
      g.ginv[2](i, j) = gbi(1, 1);
      g.christ[0](i, j) = Gu(0);
      g.christ[1](i, j) = Gm(0);
      g.christ[2](i, j) = Gv(0);
      g.christ[3](i, j) = Gu(1);
      g.christ[4](i, j) = Gm(1);
      g.christ[5](i, j) = Gv(1);

      const double d = std::abs(n.dot(gm * n) - 1) + std::abs(n.dot(gxu)) / std::sqrt(gb(0, 0)) +
                       std::abs(n.dot(gxv)) / std::sqrt(gb(1, 1));
      defect[i] = std::max(defect[i], d);
    }
  });
  for (const auto& f : failure)
    if (!f.empty()) throw std::runtime_error(f);
  for (double d : defect) g.normal_defect = std::max(g.normal_defect, d);
  return g;
}

double integrate(const ParamSurface& s, const SurfaceGeometry& geo, const Field& f) {
  const auto [nu, nv] = s.resolution();
  double total = 0;
  for (int i = 0; i < nu; ++i) {
    double row = 0;
    for (int j = 0; j < nv; ++j) row += f(i, j) * geo.area_density(i, j);
    total += row * s.weight(i, 0);
  }
  return total;
}

double area(const ParamSurface& s, const SurfaceGeometry& geo) {
  return integrate(s, geo, Field::Ones(geo.res.nu, geo.res.nv));
}

double area(const ParamSurface& s, const ambient::Metric& am) { return area(s, geometry(s, am)); }

double willmore_energy(const ParamSurface& s, const SurfaceGeometry& geo) { return integrate(s, geo, geo.H.square()); }

double willmore_energy(const ParamSurface& s, const ambient::Metric& am) { return willmore_energy(s, geometry(s, am)); }

Partials partials(const ParamSurface& s, const Field& f) {
  const auto [nu, nv] = s.resolution();
  Partials p;
  const auto& [dv1, dv2] = diff_cache().fourier(nv);
  const Eigen::MatrixXd F = f.matrix();
  p.fv = (F * dv1.transpose()).array();
  p.fvv = (F * dv2.transpose()).array();
  if (s.topology() == Topology::Torus) {
    const auto& [du1, du2] = diff_cache().fourier(nu);
    p.fu = (du1 * F).array();
    p.fuu = (du2 * F).array();
    p.fuv = (du1 * p.fv.matrix()).array();
  } else {
    const auto& pd = diff_cache().sphere(nu);
    const Eigen::MatrixXd Fs = shift_half_turn(f).matrix();
    const Eigen::MatrixXd Fvs = shift_half_turn(p.fv).matrix();
    p.fu = (pd.d1_direct * F + pd.d1_reflected * Fs).array();
    p.fuu = (pd.d2_direct * F + pd.d2_reflected * Fs).array();
    p.fuv = (pd.d1_direct * p.fv.matrix() + pd.d1_reflected * Fvs).array();
  }
  return p;
}

Field laplace_beltrami(const ParamSurface& s, const SurfaceGeometry& geo, const Field& f) {
  const Partials p = partials(s, f);
  const auto& gi = geo.ginv;
  const auto& c = geo.christ;
  return gi[0] * (p.fuu - c[0] * p.fu - c[3] * p.fv) + 2 * gi[1] * (p.fuv - c[1] * p.fu - c[4] * p.fv) +
         gi[2] * (p.fvv - c[2] * p.fu - c[5] * p.fv);
}

Field laplace_beltrami_divergence(const ParamSurface& s, const SurfaceGeometry& geo, const Field& f) {
  const Partials p = partials(s, f);
  const Field& w = geo.area_density;
  const Field qu = w * (geo.ginv[0] * p.fu + geo.ginv[1] * p.fv);
  const Field qv = w * (geo.ginv[1] * p.fu + geo.ginv[2] * p.fv);
  return (partials(s, qu).fu + partials(s, qv).fv) / w;
}

Field el_residual(const ParamSurface& s, const SurfaceGeometry& geo) {
  return laplace_beltrami(s, geo, geo.H) + (geo.Ao2 + geo.ric_nn) * geo.H;
}

Field el_residual(const ParamSurface& s, const ambient::Metric& am) { return el_residual(s, geometry(s, am)); }

double first_variation(const ParamSurface& s, const SurfaceGeometry& geo, const Field& residual, const Field& phi) {
  return -2 * integrate(s, geo, residual * phi);
}

double first_variation(const ParamSurface& s, const ambient::Metric& am, const Field& phi) {
  const SurfaceGeometry geo = geometry(s, am);
  return first_variation(s, geo, el_residual(s, geo), phi);
}

double hawking_mass(double area, double willmore) {
  return std::sqrt(area) / (64 * std::pow(pi, 1.5)) * (16 * pi - willmore);
}

double hawking_mass(const ParamSurface& s, const ambient::Metric& am) {
  const SurfaceGeometry geo = geometry(s, am);
  return hawking_mass(area(s, geo), willmore_energy(s, geo));
}

Field sample(const ParamSurface& s, const std::function<double(double, double)>& f) {
  const auto [nu, nv] = s.resolution();
  Field out(nu, nv);
  parallel_for(nu, [&](int i) {
    for (int j = 0; j < nv; ++j) out(i, j) = f(s.u(i), s.v(j));
  });
  return out;
}

ParamSurface round_sphere(double radius, Resolution res, const Vec3d& center) {
  auto chart = [radius, center](double th, double ph) {
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    Jet j;
    j.x = center + radius * Vec3d(st * cp, st * sp, ct);
    j.xu = radius * Vec3d(ct * cp, ct * sp, -st);
    j.xv = radius * Vec3d(-st * sp, st * cp, 0);
    j.xuu = radius * Vec3d(-st * cp, -st * sp, -ct);
    j.xuv = radius * Vec3d(-ct * sp, ct * cp, 0);
    j.xvv = radius * Vec3d(-st * cp, -st * sp, 0);
    return j;
  };
  return ParamSurface(chart, Topology::Sphere, res, +1);
}

}  // namespace wlab::surface
