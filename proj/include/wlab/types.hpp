#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wlab {

template <class T> using Vec3 = Eigen::Matrix<T, 3, 1>;
template <class T> using Mat3 = Eigen::Matrix<T, 3, 3>;
template <class T> using Mat2 = Eigen::Matrix<T, 2, 2>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using Mat2d = Mat2<double>;

// Row-major node grids: row i is the first chart coordinate.
using Field = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rank-3 array stored as three matrices, t[k](i, j).
template <class T> using Tensor3 = std::array<Mat3<T>, 3>;

// A numerical method failed to reach its stated tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt2 = std::numbers::sqrt2;

// Radius of the degenerate limit sphere, (2 pi^2)^(1/4).
inline const double A_tilde = std::pow(2.0 * pi * pi, 0.25);
inline constexpr double A_coef = sqrt2 / 2.0;
inline constexpr double B_coef = (2.0 - sqrt2) / 4.0;
// c0 = -sqrt2 / (8 A~^2) = -1 / (8 pi)
inline const double c0 = -sqrt2 / (8.0 * A_tilde * A_tilde);

inline constexpr double clifford_area = 4.0 * sqrt2 * pi * pi;
inline constexpr double clifford_willmore = 8.0 * pi * pi;

}  // namespace constants
}  // namespace wlab
