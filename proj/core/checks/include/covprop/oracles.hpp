#pragma once
// Reference computations that do not share code paths with the library:
// numerical characteristics, brute-force eigenvalues, textbook kernel forms.
// Used by the acceptance checks and the unit tests only.

#include "covprop/types.hpp"

#include <functional>
#include <vector>

namespace covprop::oracle {

/// Integrates dx/dtau = -v(x) from tau = t back to 0 with classical RK4.
/// The last step is shortened to land on 0. Result wrapped to [0, 2pi).
double rk4_departure(double x, double t, double h = 1e-5);

/// f0(s) (v(s)/v(x))^alpha with s from rk4_departure.
double characteristic_solution(const std::function<double(double)>& f0, double alpha, double x, double t,
                               double h = 1e-5);

/// Distance between two angles measured around the circle.
double circular_distance(double a, double b);

/// (2pi/n) * sum f(2pi i/n).
double periodic_quadrature(const std::function<double(double)>& f, int n);

struct Tridiagonal {
  Vector diag;
  Vector off;  // off[i] couples i and i+1
};

/// Orthogonally similar tridiagonal form by Householder reflections.
Tridiagonal householder_tridiagonal(const Matrix& a);

/// Number of eigenvalues of `t` below `shift` from the Sturm sequence of
/// its leading principal minors.
int sturm_count(const Tridiagonal& t, double shift);

/// Same count for a full symmetric matrix, via householder_tridiagonal().
int eigenvalues_below(const Matrix& a, double shift);

/// All eigenvalues by Sturm bisection, descending.
Vector bisection_eigenvalues(const Matrix& a, double tol = 1e-13);

/// Eigen's dense self-adjoint solver, descending.
Vector reference_eigenvalues(const Matrix& a);

/// Gaspari-Cohn pieces in expanded power form, z = r/c.
double gc_inner_piece(double z);
double gc_outer_piece(double z);

/// log(e1/e2)/log(h1/h2) for each consecutive pair of refinements.
std::vector<double> observed_orders(const std::vector<double>& errors, const std::vector<int>& resolutions);

}  // namespace covprop::oracle
