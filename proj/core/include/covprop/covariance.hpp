#pragma once

#include "covprop/grid.hpp"
#include "covprop/kernels.hpp"
#include "covprop/schemes.hpp"
#include "covprop/types.hpp"

#include <functional>
#include <string>

namespace covprop {

/// Dense symmetric covariance with a note on where it came from.
struct CovarianceMatrix {
  Matrix entries;
  CorrelationKernel kernel = CorrelationKernel::dirac();
  VarianceProfile variance;
  std::string provenance;

  int size() const { return static_cast<int>(entries.rows()); }
};

/// P0[i][j] = sigma0(x_i) C(r(x_i, x_j)) sigma0(x_j); diag(sigma0^2) for Dirac.
CovarianceMatrix build_initial_covariance(const CorrelationKernel& kernel,
                                          const VarianceProfile& variance, const Grid& grid);

/// Called with (step, P_step) after every step, step = 1..k.
using StepObserver = std::function<void(int, const Matrix&)>;

/// P <- M P M^T repeated k times, symmetrized after each step.
CovarianceMatrix propagate_traditional(const CovarianceMatrix& initial,
                                       const PropagatorMatrix& propagator, int steps,
                                       const StepObserver& observer = {});

/// D_k U^k P0 (U^T)^k D_k with D_k = diag(d(x_i, k dt)) from the exact
/// solution. The observer sees the full D_j (...) D_j product at every step.
CovarianceMatrix propagate_polar(const CovarianceMatrix& initial, const PropagatorMatrix& unitary,
                                 const Grid& grid, int steps, const TimeStepping& ts,
                                 const StepObserver& observer = {});

double trace(const Matrix& p);
/// dx * trace: the periodic quadrature of the variance.
double weighted_trace(const Matrix& p, double dx);
Vector diagonal(const Matrix& p);
/// P[i][j] / sqrt(P[i][i] P[j][j]). Throws if any diagonal entry is <= 0.
Vector correlation_row(const Matrix& p, int row);

struct SpectrumDiagnostics {
  Vector eigenvalues;  // descending
  Vector normalized;   // eigenvalues / eigenvalues[0]
};

SpectrumDiagnostics normalized_spectrum(const Matrix& p);

double max_asymmetry(const Matrix& p);

}  // namespace covprop
