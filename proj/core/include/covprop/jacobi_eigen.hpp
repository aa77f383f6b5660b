#pragma once

#include "covprop/types.hpp"

#include <optional>

namespace covprop {

struct JacobiOptions {
  /// Stop once off(A) <= tolerance * ||A||_F.
  double tolerance = 1e-12;
  int max_sweeps = 100;
  bool compute_vectors = false;
};

struct SymmetricEigenResult {
  /// Sorted descending.
  Vector values;
  /// Column j pairs with values[j]; present only when requested.
  std::optional<Matrix> vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix. The input is symmetrized
/// first, so round-off asymmetry is harmless. Throws std::runtime_error when
/// max_sweeps is exhausted.
SymmetricEigenResult jacobi_eigen(const Matrix& a, const JacobiOptions& options = {});

}  // namespace covprop
