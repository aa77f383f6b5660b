#include "covprop/jacobi_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace covprop {
namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) sum += a(i, j) * a(i, j);
  return std::sqrt(2.0 * sum);
}

}  // namespace

SymmetricEigenResult jacobi_eigen(const Matrix& input, const JacobiOptions& options) {
  if (input.rows() != input.cols()) throw std::invalid_argument("jacobi_eigen: matrix is not square");
  const Eigen::Index n = input.rows();
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v;
  if (options.compute_vectors) v = Matrix::Identity(n, n);

  const double frob = a.norm();
  const double target = options.tolerance * frob;
  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (sweep == options.max_sweeps)
      throw std::runtime_error("jacobi_eigen: no convergence within max_sweeps");
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Skip entries already negligible against both diagonal entries.
        if (sweep > 3 && std::abs(apq) < 1e-300 + 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          const double new_kp = c * akp - s * akq;
          const double new_kq = s * akp + c * akq;
          a(k, p) = a(p, k) = new_kp;
          a(k, q) = a(q, k) = new_kq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;

        if (options.compute_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

  SymmetricEigenResult out;
  out.sweeps = sweep;
  out.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) out.values[k] = a(order[k], order[k]);
  if (options.compute_vectors) {
    Matrix sorted(n, n);
    for (Eigen::Index k = 0; k < n; ++k) sorted.col(k) = v.col(order[k]);
    out.vectors = std::move(sorted);
  }
  return out;
}

}  // namespace covprop
