#pragma once

#include "covprop/types.hpp"
#include "covprop/velocity_field.hpp"

namespace covprop {

/// Uniform periodic grid x_i = i * dx, dx = 2pi / n.
struct Grid {
  int n = 0;
  double dx = 0.0;

  double node(int i) const { return i * dx; }
  Vector nodes() const;
  /// Index of the node closest to angle x.
  int nearest_index(double x) const;
};

/// Rejects n < 8.
Grid build_grid(int n);

struct TimeStepping {
  double cfl = 1.0;
  double dt = 0.0;

  /// round(final_time / dt).
  int steps_to(double final_time) const;
  double time_at(int step) const { return step * dt; }
};

/// dt = lambda * dx / max|v|; lambda must lie in (0, 1].
TimeStepping timestep_from_cfl(double lambda, const Grid& grid,
                               const VelocityField& field = VelocityField::shifted_sine());

}  // namespace covprop
