#pragma once

#include "covprop/grid.hpp"
#include "covprop/types.hpp"
#include "covprop/velocity_field.hpp"

#include <string_view>

namespace covprop {

enum class Scheme { LaxWendroff, CrankNicolson };

std::string_view to_string(Scheme scheme);

/// One-step propagator for q_t + v q_x + alpha v' q = 0. Immutable after
/// construction and time independent, so a single matrix serves every step.
struct PropagatorMatrix {
  Scheme scheme = Scheme::CrankNicolson;
  double alpha = 1.0;
  Matrix entries;

  int size() const { return static_cast<int>(entries.rows()); }
};

/// Periodic centered first difference, D[i][i+-1] = +-1/(2dx).
Matrix centered_difference(const Grid& grid);

/// A = -(V D + D V)/2: exactly skew-symmetric, second-order consistent with
/// -(v d/dx + v'/2).
Matrix skew_centered_operator(const Grid& grid, const VelocityField& field);

/// A_alpha = -[(1 - alpha) V D + alpha D V].
///
/// alpha = 0 is the advective form, alpha = 1 the flux form (columns sum to
/// zero, so sum(q) is conserved), alpha = 1/2 coincides with
/// skew_centered_operator().
Matrix advection_operator(const Grid& grid, const VelocityField& field, double alpha);

/// CrankNicolson: (I - dt/2 A)^-1 (I + dt/2 A) with A = advection_operator().
/// LaxWendroff: I + dt A + dt^2/2 S, where S is a compact three-point
/// discretization of A^2 built around the conservative term (v (v q)_x)_x.
PropagatorMatrix build_propagator(Scheme scheme, double alpha, const Grid& grid,
                                  const TimeStepping& ts,
                                  const VelocityField& field = VelocityField::shifted_sine());

/// P^k q.
Vector propagate_state(const PropagatorMatrix& propagator, const Vector& q, int steps);

}  // namespace covprop
