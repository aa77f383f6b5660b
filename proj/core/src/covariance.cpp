#include "covprop/covariance.hpp"

#include "covprop/flow_exact.hpp"
#include "covprop/jacobi_eigen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace covprop {
namespace {

void symmetrize(Matrix& p) {
  const Eigen::Index n = p.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = avg;
      p(j, i) = avg;
    }
  }
}

void require_compatible(const CovarianceMatrix& p, const PropagatorMatrix& m, const char* where) {
  if (p.entries.rows() != p.entries.cols())
    throw std::invalid_argument(std::string(where) + ": covariance is not square");
  if (p.size() != m.size())
    throw std::invalid_argument(std::string(where) + ": covariance and propagator sizes differ");
}

// P <- M P M^T in place; `scratch` avoids reallocating per step.
void two_sided_step(const Matrix& m, Matrix& p, Matrix& scratch) {
  scratch.noalias() = m * p;
  p.noalias() = scratch * m.transpose();
  symmetrize(p);
}

}  // namespace

CovarianceMatrix build_initial_covariance(const CorrelationKernel& kernel,
                                          const VarianceProfile& variance, const Grid& grid) {
  const int n = grid.n;
  CovarianceMatrix out;
  out.kernel = kernel;
  out.variance = variance;
  out.provenance = "initial " + kernel.spec() + " variance=" + variance.name();
  out.entries = Matrix::Zero(n, n);

  Vector sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = variance.stddev(grid.node(i));

  if (kernel.is_dirac()) {
    for (int i = 0; i < n; ++i) out.entries(i, i) = sigma[i] * sigma[i];
    return out;
  }
  for (int i = 0; i < n; ++i) {
    out.entries(i, i) = sigma[i] * sigma[i];
    for (int j = i + 1; j < n; ++j) {
      const double value = sigma[i] * kernel(chordal_distance(grid.node(i), grid.node(j))) * sigma[j];
      out.entries(i, j) = value;
      out.entries(j, i) = value;
    }
  }
  return out;
}

CovarianceMatrix propagate_traditional(const CovarianceMatrix& initial,
                                       const PropagatorMatrix& propagator, int steps,
                                       const StepObserver& observer) {
  require_compatible(initial, propagator, "propagate_traditional");
  if (steps < 0) throw std::invalid_argument("propagate_traditional: negative step count");

  CovarianceMatrix out = initial;
  Matrix scratch(initial.size(), initial.size());
  for (int k = 1; k <= steps; ++k) {
    two_sided_step(propagator.entries, out.entries, scratch);
    if (observer) observer(k, out.entries);
  }
  out.provenance = initial.provenance + " | traditional " + std::string(to_string(propagator.scheme)) +
                   " steps=" + std::to_string(steps);
  return out;
}

CovarianceMatrix propagate_polar(const CovarianceMatrix& initial, const PropagatorMatrix& unitary,
                                 const Grid& grid, int steps, const TimeStepping& ts,
                                 const StepObserver& observer) {
  require_compatible(initial, unitary, "propagate_polar");
  if (steps < 0) throw std::invalid_argument("propagate_polar: negative step count");
  if (grid.n != initial.size()) throw std::invalid_argument("propagate_polar: grid size mismatch");

  const int n = grid.n;
  auto polar_factor = [&](int k) {
    Vector d(n);
    const double t = ts.time_at(k);
    for (int i = 0; i < n; ++i) d[i] = polar_scalar_d(grid.node(i), t);
    return d;
  };

  // inner holds U^k P0 (U^T)^k; D_k is applied on the way out.
  Matrix inner = initial.entries;
  Matrix scratch(n, n);
  for (int k = 1; k <= steps; ++k) {
    two_sided_step(unitary.entries, inner, scratch);
    if (observer) {
      const Vector d = polar_factor(k);
      const Matrix snapshot = d.asDiagonal() * inner * d.asDiagonal();
      observer(k, snapshot);
    }
  }

  CovarianceMatrix out = initial;
  const Vector d = polar_factor(steps);
  out.entries = d.asDiagonal() * inner * d.asDiagonal();
  symmetrize(out.entries);
  out.provenance = initial.provenance + " | polar " + std::string(to_string(unitary.scheme)) +
                   " steps=" + std::to_string(steps);
  return out;
}

double trace(const Matrix& p) { return p.diagonal().sum(); }

double weighted_trace(const Matrix& p, double dx) { return dx * trace(p); }

Vector diagonal(const Matrix& p) { return p.diagonal(); }

Vector correlation_row(const Matrix& p, int row) {
  const Eigen::Index n = p.rows();
  if (row < 0 || row >= n) throw std::out_of_range("correlation_row: row index out of range");
  const double pii = p(row, row);
  if (!(pii > 0.0)) throw std::domain_error("correlation_row: non-positive variance on the requested row");
  Vector out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double pjj = p(j, j);
    if (!(pjj > 0.0))
      throw std::domain_error("correlation_row: non-positive variance at index " + std::to_string(j));
    out[j] = p(row, j) / std::sqrt(pii * pjj);
  }
  return out;
}

SpectrumDiagnostics normalized_spectrum(const Matrix& p) {
  SpectrumDiagnostics out;
  out.eigenvalues = jacobi_eigen(p).values;
  if (out.eigenvalues.size() == 0 || !(out.eigenvalues[0] > 0.0))
    throw std::domain_error("normalized_spectrum: largest eigenvalue is not positive");
  out.normalized = out.eigenvalues / out.eigenvalues[0];
  return out;
}

double max_asymmetry(const Matrix& p) { return (p - p.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace covprop
