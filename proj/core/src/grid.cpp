#include "covprop/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace covprop {

Vector Grid::nodes() const {
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = node(i);
  return x;
}

int Grid::nearest_index(double x) const {
  const long i = std::lround(wrap_angle(x) / dx);
  return static_cast<int>(i % n);
}

Grid build_grid(int n) {
  if (n < 8) throw std::invalid_argument("build_grid: need n >= 8, got " + std::to_string(n));
  return Grid{n, kTwoPi / n};
}

int TimeStepping::steps_to(double final_time) const {
  if (!(final_time >= 0.0) || !std::isfinite(final_time))
    throw std::invalid_argument("steps_to: final time must be finite and >= 0");
  return static_cast<int>(std::lround(final_time / dt));
}

TimeStepping timestep_from_cfl(double lambda, const Grid& grid, const VelocityField& field) {
  if (!(lambda > 0.0) || lambda > 1.0)
    throw std::invalid_argument("timestep_from_cfl: CFL number must lie in (0, 1]");
  const double vmax = field.max_speed();
  if (!(vmax > 0.0)) throw std::invalid_argument("timestep_from_cfl: zero velocity field");
  return TimeStepping{lambda, lambda * grid.dx / vmax};
}

}  // namespace covprop
