#include "covprop/oracles.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace covprop::oracle {

namespace {

// Written out here rather than taken from VelocityField.
double speed(double x) { return std::sin(x) + 2.0; }

}  // namespace

double rk4_departure(double x, double t, double h) {
  if (t < 0.0 || !(h > 0.0)) throw std::invalid_argument("rk4_departure: need t >= 0 and h > 0");
  double y = x;
  double remaining = t;
  while (remaining > 0.0) {
    const double step = std::min(h, remaining);
    const double k1 = -speed(y);
    const double k2 = -speed(y + 0.5 * step * k1);
    const double k3 = -speed(y + 0.5 * step * k2);
    const double k4 = -speed(y + step * k3);
    y += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    remaining -= step;
    if (remaining < 1e-15 * t) break;
  }
  y = std::fmod(y, 2.0 * kPi);
  return y < 0.0 ? y + 2.0 * kPi : y;
}

double characteristic_solution(const std::function<double(double)>& f0, double alpha, double x, double t,
                               double h) {
  const double s = rk4_departure(x, t, h);
  return f0(s) * std::pow(speed(s) / speed(x), alpha);
}

double circular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

double periodic_quadrature(const std::function<double(double)>& f, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(2.0 * kPi * i / n);
  return 2.0 * kPi / n * sum;
}

Tridiagonal householder_tridiagonal(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd w = 0.5 * (a + a.transpose());
  for (int k = 0; k + 2 < n; ++k) {
    Eigen::VectorXd x = w.col(k).tail(n - k - 1);
    const double alpha = (x[0] > 0 ? -1.0 : 1.0) * x.norm();
    if (alpha == 0.0) continue;
    Eigen::VectorXd u = x;
    u[0] -= alpha;
    const double un = u.norm();
    if (un == 0.0) continue;
    u /= un;
    // H = I - 2uu^T applied on both sides of the trailing block.
    auto block = w.bottomRightCorner(n - k - 1, n - k - 1);
    const Eigen::VectorXd p = block * u;
    const Eigen::VectorXd q = p - (u.dot(p)) * u;
    block -= 2.0 * (u * q.transpose() + q * u.transpose());
    w.col(k).tail(n - k - 1).setZero();
    w.row(k).tail(n - k - 1).setZero();
    w(k + 1, k) = w(k, k + 1) = alpha;
  }
  Tridiagonal t{Vector(n), Vector(std::max(n - 1, 0))};
  for (int i = 0; i < n; ++i) t.diag[i] = w(i, i);
  for (int i = 0; i + 1 < n; ++i) t.off[i] = w(i + 1, i);
  return t;
}

int eigenvalues_below(const Matrix& a, double shift) {
  const Tridiagonal t = householder_tridiagonal(a);
  return sturm_count(t, shift);
}

int sturm_count(const Tridiagonal& t, double shift) {
  const int n = static_cast<int>(t.diag.size());
  int negatives = 0;
  double q = 1.0;
  for (int i = 0; i < n; ++i) {
    const double e2 = i > 0 ? t.off[i - 1] * t.off[i - 1] : 0.0;
    q = t.diag[i] - shift - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++negatives;
  }
  return negatives;
}

Vector bisection_eigenvalues(const Matrix& a, double tol) {
  const int n = static_cast<int>(a.rows());
  const Tridiagonal t = householder_tridiagonal(a);
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  Vector out(n);
  // k-th smallest eigenvalue: smallest x with more than k eigenvalues below it.
  for (int k = 0; k < n; ++k) {
    double l = lo - 1.0, r = hi + 1.0;
    while (r - l > tol * std::max(1.0, std::abs(r))) {
      const double mid = 0.5 * (l + r);
      if (sturm_count(t, mid) > k) r = mid;
      else l = mid;
    }
    out[n - 1 - k] = 0.5 * (l + r);
  }
  return out;
}

Vector reference_eigenvalues(const Matrix& a) {
  const Eigen::MatrixXd col = a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(col, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("reference eigensolver failed");
  return solver.eigenvalues().reverse();
}

double gc_inner_piece(double z) {
  return -std::pow(z, 5) / 4.0 + std::pow(z, 4) / 2.0 + 5.0 * std::pow(z, 3) / 8.0 - 5.0 * z * z / 3.0 + 1.0;
}

double gc_outer_piece(double z) {
  return std::pow(z, 5) / 12.0 - std::pow(z, 4) / 2.0 + 5.0 * std::pow(z, 3) / 8.0 + 5.0 * z * z / 3.0 - 5.0 * z +
         4.0 - 2.0 / (3.0 * z);
}

std::vector<double> observed_orders(const std::vector<double>& errors, const std::vector<int>& resolutions) {
  if (errors.size() != resolutions.size() || errors.size() < 2)
    throw std::invalid_argument("observed_orders: need matching lists of length >= 2");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    out.push_back(std::log(errors[i] / errors[i + 1]) /
                  std::log(static_cast<double>(resolutions[i + 1]) / resolutions[i]));
  return out;
}

}  // namespace covprop::oracle
