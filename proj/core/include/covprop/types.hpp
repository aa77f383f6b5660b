#pragma once

#include <Eigen/Dense>

namespace covprop {

/// Dense row-major matrix used for propagators and covariances.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into [0, 2pi).
double wrap_angle(double x);

}  // namespace covprop
