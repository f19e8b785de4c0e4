#pragma once

// Parametric immersed surfaces in the model ambient metric: fundamental
// forms, mean curvature, Willmore energy and its first variation.

#include "wlab/ambient.hpp"
#include "wlab/spectral.hpp"
#include "wlab/types.hpp"

#include <functional>
#include <memory>

namespace wlab::surface {

// Position and parameter derivatives up to second order at one chart point.
struct Jet {
  Vec3d x, xu, xv, xuu, xuv, xvv;
};

using Chart = std::function<Jet(double u, double v)>;

enum class Topology {
  Torus,   // doubly periodic on [-pi, pi)^2
  Sphere,  // polar (theta, phi) in (0, pi) x [0, 2 pi), pole-staggered
};

struct Resolution {
  int nu = 0;
  int nv = 0;
};

class ParamSurface {
 public:
  // orientation = +1 when x_u x x_v points to the outer side, -1 otherwise.
  ParamSurface(Chart chart, Topology topo, Resolution res, int orientation = 1,
               spectral::Grading grade_u = {}, spectral::Grading grade_v = {});

  Topology topology() const { return topo_; }
  Resolution resolution() const { return res_; }
  int orientation() const { return orientation_; }
  const spectral::Grading& grading_u() const { return gu_; }
  const spectral::Grading& grading_v() const { return gv_; }

  // Computational coordinates of node (i, j).
  double s(int i) const;
  double t(int j) const;
  // Chart coordinates after grading.
  double u(int i) const { return gu_.map(s(i)); }
  double v(int j) const { return gv_.map(t(j)); }

  // Jet in computational coordinates (chain rule through the grading).
  Jet jet(int i, int j) const;
  Jet jet_at(double s, double t) const;

  // Quadrature weight multiplying the area density at node (i, j).
  double weight(int i, int j) const;

  ParamSurface with_resolution(Resolution res) const;
  ParamSurface with_chart(Chart chart) const;
  const Chart& chart() const { return chart_; }

 private:
  Chart chart_;
  Topology topo_;
  Resolution res_;
  int orientation_;
  spectral::Grading gu_, gv_;
  Eigen::VectorXd wu_;  // per-row weights (Fejer / sin for the sphere)
};

// Per-node geometric data, one Field per component.
struct SurfaceGeometry {
  Resolution res;
  Field area_density;            // sqrt det gbar in computational coordinates
  Field H;                       // gbar^{ij} A_ij, sum of principal curvatures
  Field A2;                      // |A|^2
  Field Ao2;                     // |A°|^2 = |A|^2 - H^2 / 2
  Field ric_nn;                  // Ric_g(n, n) of the ambient metric
  std::array<Field, 3> normal;   // outer unit normal in g
  std::array<Field, 3> ginv;     // gbar^{uu}, gbar^{uv}, gbar^{vv}
  std::array<Field, 6> christ;   // Gbar^u_{uu}, ^u_{uv}, ^u_{vv}, ^v_{uu}, ^v_{uv}, ^v_{vv}
  std::array<Field, 3> position;
  double normal_defect = 0;      // max |g(n,n) - 1| + |g(n, x_i)| / |x_i|
};

SurfaceGeometry geometry(const ParamSurface& s, const ambient::Metric& am);

// Integral of f against the area element.
double integrate(const ParamSurface& s, const SurfaceGeometry& geo, const Field& f);

double area(const ParamSurface& s, const ambient::Metric& am);
double area(const ParamSurface& s, const SurfaceGeometry& geo);
double willmore_energy(const ParamSurface& s, const ambient::Metric& am);
double willmore_energy(const ParamSurface& s, const SurfaceGeometry& geo);

// Spectral partial derivatives of a node field on the surface grid.
struct Partials {
  Field fu, fv, fuu, fuv, fvv;
};
Partials partials(const ParamSurface& s, const Field& f);

// gbar^{ij}(f_ij - Gbar^k_ij f_k)
Field laplace_beltrami(const ParamSurface& s, const SurfaceGeometry& geo, const Field& f);
// (1 / sqrt gbar) d_i (sqrt gbar gbar^{ij} d_j f)
Field laplace_beltrami_divergence(const ParamSurface& s, const SurfaceGeometry& geo, const Field& f);

// W' = Delta H + (|A°|^2 + Ric(n, n)) H
Field el_residual(const ParamSurface& s, const SurfaceGeometry& geo);
Field el_residual(const ParamSurface& s, const ambient::Metric& am);

// dW[phi] for the normal variation x + t phi n: -2 int W' phi dsigma.
double first_variation(const ParamSurface& s, const SurfaceGeometry& geo, const Field& residual, const Field& phi);
double first_variation(const ParamSurface& s, const ambient::Metric& am, const Field& phi);

double hawking_mass(double area, double willmore);
double hawking_mass(const ParamSurface& s, const ambient::Metric& am);

// Samples a scalar function of chart coordinates (u, v) at the nodes.
Field sample(const ParamSurface& s, const std::function<double(double, double)>& f);

// Round sphere in the polar chart (theta about the z axis), outward oriented.
ParamSurface round_sphere(double radius, Resolution res, const Vec3d& center = Vec3d::Zero());

}  // namespace wlab::surface
