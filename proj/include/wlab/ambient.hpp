#pragma once

// Curved ambient space in geodesic normal coordinates, modeled as
// g = delta + eps^2 h(y) with h exactly quadratic in y.

#include "wlab/types.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace wlab::ambient {

template <class T>
struct CurvatureData {
  T sc{0};
  Mat3<T> ric = Mat3<T>::Zero();
  std::optional<Vec3<T>> alphas;
  std::optional<Mat3<T>> frame;

  static CurvatureData from_ricci(T sc, const Mat3<T>& ric, T tol = T(1e-10)) {
    if ((ric - ric.transpose()).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("Ricci form is not symmetric");
    if (std::abs(ric.trace() - sc) > tol * (T(1) + std::abs(sc)))
      throw std::invalid_argument("scalar curvature must equal the Ricci trace");
    CurvatureData c;
    c.sc = sc;
    c.ric = T(0.5) * (ric + ric.transpose());
    return c;
  }

  static CurvatureData from_ricci(const Mat3<T>& ric) { return from_ricci(ric.trace(), ric); }

  static CurvatureData from_eigenvalues(const Vec3<T>& a, const Mat3<T>& frame = Mat3<T>::Identity()) {
    CurvatureData c;
    c.ric = frame * a.asDiagonal() * frame.transpose();
    c.sc = a.sum();
    c.alphas = a;
    c.frame = frame;
    return c;
  }

  static CurvatureData flat() { return CurvatureData{}; }
};

using Curvature = CurvatureData<double>;

// Second derivatives d_eta d_zeta h_{ab}, constant in y; entry [3*eta+zeta].
template <class T> using HessianH = std::array<Mat3<T>, 9>;

template <class T>
HessianH<T> h_second_derivatives(const CurvatureData<T>& c) {
  const Mat3<T>& R = c.ric;
  const Mat3<T> I = Mat3<T>::Identity();
  HessianH<T> d2;
  for (int e = 0; e < 3; ++e)
    for (int z = 0; z < 3; ++z) {
      Mat3<T> m;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          m(a, b) = c.sc / 6 * (2 * I(e, z) * I(a, b) - I(a, e) * I(b, z) - I(b, e) * I(a, z)) -
                    T(2) / 3 * I(a, b) * R(e, z) - T(2) / 3 * I(e, z) * R(a, b) +
                    T(1) / 3 * (I(a, e) * R(b, z) + I(a, z) * R(b, e) + I(b, e) * R(a, z) + I(b, z) * R(a, e));
        }
      d2[3 * e + z] = m;
    }
  return d2;
}

// h_{ab}(y) = Sc/6 (|y|^2 d_ab - y_a y_b) - 1/3 d_ab Ric(y,y) - 1/3 |y|^2 R_ab
//             + 1/3 (y_a (Ry)_b + y_b (Ry)_a)
template <class T>
Mat3<T> h_tensor(const CurvatureData<T>& c, const Vec3<T>& y) {
  const Vec3<T> Ry = c.ric * y;
  const T yy = y.squaredNorm();
  Mat3<T> h = c.sc / 6 * (yy * Mat3<T>::Identity() - y * y.transpose());
  h -= (y.dot(Ry) / 3) * Mat3<T>::Identity();
  h -= (yy / 3) * c.ric;
  h += (y * Ry.transpose() + Ry * y.transpose()) / 3;
  return h;
}

// d_eta h_{ab}(y), entry [eta]; linear in y.
template <class T>
Tensor3<T> h_gradient(const HessianH<T>& d2, const Vec3<T>& y) {
  Tensor3<T> g;
  for (int e = 0; e < 3; ++e) {
    g[e] = Mat3<T>::Zero();
    for (int z = 0; z < 3; ++z) g[e] += y(z) * d2[3 * e + z];
  }
  return g;
}

// Riemann tensor R_{abcd} from (Sc, Ric) by the 3-dimensional decomposition,
// in the convention where h = 1/3 R_{a m n b} y^m y^n.
template <class T>
std::array<std::array<Mat3<T>, 3>, 3> riemann_from_ricci(const CurvatureData<T>& c) {
  const Mat3<T> I = Mat3<T>::Identity();
  const Mat3<T>& R = c.ric;
  std::array<std::array<Mat3<T>, 3>, 3> rm;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int cc = 0; cc < 3; ++cc)
        for (int d = 0; d < 3; ++d)
          rm[a][b](cc, d) = I(a, cc) * R(b, d) - I(a, d) * R(b, cc) + I(b, d) * R(a, cc) -
                            I(b, cc) * R(a, d) - c.sc / 2 * (I(a, cc) * I(b, d) - I(a, d) * I(b, cc));
  return rm;
}

inline constexpr double chart_radius = 10.0;

template <class T>
class AmbientMetric {
 public:
  AmbientMetric() : AmbientMetric(T(0), CurvatureData<T>::flat()) {}
  AmbientMetric(T eps, CurvatureData<T> curv)
      : eps_(eps), curv_(std::move(curv)), d2h_(h_second_derivatives(curv_)) {
    if (eps_ < 0) throw std::invalid_argument("eps must be non-negative");
  }

  T eps() const { return eps_; }
  T eps2() const { return eps_ * eps_; }
  const CurvatureData<T>& curvature() const { return curv_; }
  const HessianH<T>& d2h() const { return d2h_; }
  bool is_flat() const { return eps_ == T(0) || (curv_.ric.cwiseAbs().maxCoeff() == T(0) && curv_.sc == T(0)); }

 private:
  T eps_;
  CurvatureData<T> curv_;
  HessianH<T> d2h_;
};

using Metric = AmbientMetric<double>;

template <class T>
void check_domain(const Vec3<T>& y) {
  if (!(y.norm() <= T(chart_radius)))
    throw std::domain_error("point outside the modeled chart |y| <= 10");
}

template <class T>
Mat3<T> metric_at(const AmbientMetric<T>& am, const Vec3<T>& y) {
  check_domain(y);
  return Mat3<T>::Identity() + am.eps2() * h_tensor(am.curvature(), y);
}

// Metric, its inverse and first derivatives at a point.
template <class T>
struct MetricJet {
  Mat3<T> g;
  Mat3<T> ginv;
  Tensor3<T> dg;  // dg[s](a,b) = d_s g_ab
};

template <class T>
MetricJet<T> metric_jet(const AmbientMetric<T>& am, const Vec3<T>& y) {
  MetricJet<T> j;
  j.g = metric_at(am, y);
  j.ginv = j.g.inverse();
  j.dg = h_gradient(am.d2h(), y);
  for (auto& m : j.dg) m *= am.eps2();
  return j;
}

// Gamma[k](l, m) = 1/2 g^{kx} (d_l g_xm + d_m g_xl - d_x g_lm)
template <class T>
Tensor3<T> christoffel_from_jet(const MetricJet<T>& j) {
  Tensor3<T> lower;  // lower[x](l, m)
  for (int x = 0; x < 3; ++x)
    for (int l = 0; l < 3; ++l)
      for (int m = 0; m < 3; ++m)
        lower[x](l, m) = T(0.5) * (j.dg[l](x, m) + j.dg[m](x, l) - j.dg[x](l, m));
  Tensor3<T> G;
  for (int k = 0; k < 3; ++k) {
    G[k] = Mat3<T>::Zero();
    for (int x = 0; x < 3; ++x) G[k] += j.ginv(k, x) * lower[x];
  }
  return G;
}

template <class T>
Tensor3<T> christoffel_at(const AmbientMetric<T>& am, const Vec3<T>& y) {
  return christoffel_from_jet(metric_jet(am, y));
}

// Gamma(u, v)^k = Gamma^k_{lm} u^l v^m
template <class T>
Vec3<T> contract(const Tensor3<T>& G, const Vec3<T>& u, const Vec3<T>& v) {
  return Vec3<T>(u.dot(G[0] * v), u.dot(G[1] * v), u.dot(G[2] * v));
}

// Ricci tensor of the model metric from closed-form derivatives of h.
template <class T>
Mat3<T> ricci_of_perturbed(const AmbientMetric<T>& am, const Vec3<T>& y) {
  const MetricJet<T> j = metric_jet(am, y);
  const Tensor3<T> G = christoffel_from_jet(j);
  const T e2 = am.eps2();
  const auto& d2 = am.d2h();

  // dG[s][k](l, m) = d_s Gamma^k_{lm}
  std::array<Tensor3<T>, 3> dG;
  for (int s = 0; s < 3; ++s) {
    const Mat3<T> dginv = -j.ginv * j.dg[s] * j.ginv;
    Tensor3<T> lower, dlower;
    for (int x = 0; x < 3; ++x)
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m) {
          lower[x](l, m) = T(0.5) * (j.dg[l](x, m) + j.dg[m](x, l) - j.dg[x](l, m));
          dlower[x](l, m) =
              T(0.5) * e2 * (d2[3 * s + l](x, m) + d2[3 * s + m](x, l) - d2[3 * s + x](l, m));
        }
    for (int k = 0; k < 3; ++k) {
      dG[s][k] = Mat3<T>::Zero();
      for (int x = 0; x < 3; ++x) dG[s][k] += dginv(k, x) * lower[x] + j.ginv(k, x) * dlower[x];
    }
  }

  Mat3<T> ric = Mat3<T>::Zero();
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      T v = 0;
      for (int k = 0; k < 3; ++k) {
        v += dG[k][k](m, n) - dG[n][k](k, m);
        for (int l = 0; l < 3; ++l) v += G[k](k, l) * G[l](m, n) - G[k](n, l) * G[l](k, m);
      }
      ric(m, n) = v;
    }
  return T(0.5) * (ric + ric.transpose());
}

template <class T>
bool is_rotation(const Mat3<T>& R, T tol = T(1e-10)) {
  return (R.transpose() * R - Mat3<T>::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(R.determinant() - T(1)) <= tol;
}

// Curvature of the pulled-back metric R^* g: Ric -> R^T Ric R.
template <class T>
CurvatureData<T> rotated(const CurvatureData<T>& c, const Mat3<T>& R) {
  if (!is_rotation(R)) throw std::domain_error("rotated() requires R in SO(3)");
  return CurvatureData<T>::from_ricci(c.sc, R.transpose() * c.ric * R);
}

// F(P, R) = Ric(R e2, R e2) - Ric(R e3, R e3)
template <class T>
T f_function(const CurvatureData<T>& c, const Mat3<T>& R) {
  if (!is_rotation(R)) throw std::domain_error("F(P,R) requires R in SO(3)");
  const Vec3<T> a = R.col(1), b = R.col(2);
  return a.dot(c.ric * a) - b.dot(c.ric * b);
}

}  // namespace wlab::ambient
