#include "covprop/schemes.hpp"

#include <cmath>
#include <stdexcept>

namespace covprop {
namespace {

int wrap_index(int i, int n) { return ((i % n) + n) % n; }

void require_alpha(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("build_propagator: non-finite alpha");
}

// Compact discretization of L^2 for L = -(v d/dx + alpha v'):
//   L^2 q = (v (v q)_x)_x + 2 (alpha - 1) v v' q_x
//           + ((alpha - 1) v v'' + (alpha^2 - 1) v'^2) q.
// The first term uses the three-point conservative stencil (half-node speeds),
// the remainder centered differences. For constant v this is the classical
// Lax-Wendroff second difference; for alpha = 1 the remainder vanishes.
Matrix lax_wendroff_second_order_term(const Grid& grid, const VelocityField& field, double alpha) {
  const int n = grid.n;
  const double dx = grid.dx;
  const double inv_dx2 = 1.0 / (dx * dx);
  const double inv_2dx = 1.0 / (2.0 * dx);
  Matrix s = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int ip = wrap_index(i + 1, n);
    const int im = wrap_index(i - 1, n);
    const double x = grid.node(i);
    const double v = field.speed(x);
    const double v_plus = field.speed(x + 0.5 * dx);
    const double v_minus = field.speed(x - 0.5 * dx);

    s(i, ip) += v_plus * field.speed(grid.node(ip)) * inv_dx2;
    s(i, i) -= (v_plus + v_minus) * v * inv_dx2;
    s(i, im) += v_minus * field.speed(grid.node(im)) * inv_dx2;

    const double vp = field.derivative(x);
    const double first = 2.0 * (alpha - 1.0) * v * vp;
    s(i, ip) += first * inv_2dx;
    s(i, im) -= first * inv_2dx;
    s(i, i) += (alpha - 1.0) * v * field.second_derivative(x) + (alpha * alpha - 1.0) * vp * vp;
  }
  return s;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::LaxWendroff: return "LaxWendroff";
    case Scheme::CrankNicolson: return "CrankNicolson";
  }
  return "?";
}

Matrix centered_difference(const Grid& grid) {
  const int n = grid.n;
  const double h = 1.0 / (2.0 * grid.dx);
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, wrap_index(i + 1, n)) = h;
    d(i, wrap_index(i - 1, n)) = -h;
  }
  return d;
}

Matrix skew_centered_operator(const Grid& grid, const VelocityField& field) {
  const int n = grid.n;
  const double inv_4dx = 1.0 / (4.0 * grid.dx);
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int ip = wrap_index(i + 1, n);
    // Fill (i, i+1) and its mirror from the same sum so A + A^T is exactly 0.
    const double w = (field.speed(grid.node(i)) + field.speed(grid.node(ip))) * inv_4dx;
    a(i, ip) = -w;
    a(ip, i) = w;
  }
  return a;
}

Matrix advection_operator(const Grid& grid, const VelocityField& field, double alpha) {
  require_alpha(alpha);
  if (alpha == 0.5) return skew_centered_operator(grid, field);
  const int n = grid.n;
  const double inv_2dx = 1.0 / (2.0 * grid.dx);
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int ip = wrap_index(i + 1, n);
    const int im = wrap_index(i - 1, n);
    const double vi = field.speed(grid.node(i));
    a(i, ip) -= ((1.0 - alpha) * vi + alpha * field.speed(grid.node(ip))) * inv_2dx;
    a(i, im) += ((1.0 - alpha) * vi + alpha * field.speed(grid.node(im))) * inv_2dx;
  }
  return a;
}

PropagatorMatrix build_propagator(Scheme scheme, double alpha, const Grid& grid,
                                  const TimeStepping& ts, const VelocityField& field) {
  require_alpha(alpha);
  if (!(ts.dt > 0.0)) throw std::invalid_argument("build_propagator: dt must be positive");
  const int n = grid.n;
  const Matrix a = advection_operator(grid, field, alpha);
  const Matrix id = Matrix::Identity(n, n);

  PropagatorMatrix out{scheme, alpha, Matrix()};
  if (scheme == Scheme::CrankNicolson) {
    const Matrix lhs = id - 0.5 * ts.dt * a;
    const Matrix rhs = id + 0.5 * ts.dt * a;
    const Eigen::PartialPivLU<Matrix> lu(lhs);
    // Skew-dominant A keeps I - dt/2 A well away from singular; anything else
    // is a construction bug.
    const double rcond = lu.rcond();
    if (!(rcond > 1e-12)) throw std::runtime_error("build_propagator: singular Crank-Nicolson system");
    out.entries = lu.solve(rhs);
  } else {
    const Matrix s = lax_wendroff_second_order_term(grid, field, alpha);
    out.entries = id + ts.dt * a + (0.5 * ts.dt * ts.dt) * s;
  }
  return out;
}

Vector propagate_state(const PropagatorMatrix& propagator, const Vector& q, int steps) {
  if (q.size() != propagator.size())
    throw std::invalid_argument("propagate_state: state length does not match propagator");
  if (steps < 0) throw std::invalid_argument("propagate_state: negative step count");
  Vector current = q;
  Vector next(q.size());
  for (int k = 0; k < steps; ++k) {
    next.noalias() = propagator.entries * current;
    current.swap(next);
  }
  return current;
}

}  // namespace covprop
