#pragma once

// Closed-form characteristic solutions of q_t + v q_x + alpha v' q = 0 on the
// unit circle for v(x) = sin(x) + 2. Everything here is a pure function.

#include <functional>
#include <vector>

namespace covprop {

/// Foot of the characteristic through (x, t), in [0, 2pi).
///
/// Continuous in t for all t >= 0: the inner phase is reduced modulo pi with
/// an integer branch counter before tan() is applied.
double departure_point(double x, double t);

/// Time for a particle to circle the domain once, 2pi / sqrt(3).
double circulation_period();

/// f0(s(x,t)) * (v(s)/v(x))^alpha.
///
/// alpha = 2 gives the variance, alpha = 1 the continuous-spectrum solution
/// (and the state / mass ratio), alpha = 0 pure advection, alpha = 1/2 the
/// polar factor d.
class ExactProfile {
 public:
  using Initial = std::function<double(double)>;

  ExactProfile(double alpha, Initial f0);

  static ExactProfile state(Initial q0) { return {1.0, std::move(q0)}; }
  /// sigma^2 from the initial variance sigma0^2.
  static ExactProfile variance(Initial sigma0_sq) { return {2.0, std::move(sigma0_sq)}; }
  static ExactProfile continuous_spectrum(Initial pc0) { return {1.0, std::move(pc0)}; }
  /// Pure advection of the initial diagonal (the "tilde" continuous spectrum).
  static ExactProfile advected(Initial f0) { return {0.0, std::move(f0)}; }
  static ExactProfile mass() { return {1.0, [](double) { return 1.0; }}; }

  double alpha() const { return alpha_; }
  double initial(double x) const { return f0_(x); }

 private:
  double alpha_;
  Initial f0_;
};

double exact_weighted_solution(const ExactProfile& profile, double x, double t);

/// m(x,t) = v(s(x,t)) / v(x).
double mass_ratio(double x, double t);

/// d(x,t) = sqrt(m(x,t)), the diagonal polar factor for b = v'.
double polar_scalar_d(double x, double t);

/// Roots of m(x,t) = 1 splitting the circle into convergence (m > 1) and
/// divergence (m < 1) arcs.
struct ConvergenceBoundaries {
  /// m == 1 everywhere (t = 0 or a whole number of circulation periods).
  bool everywhere_neutral = false;
  /// Sorted ascending in [0, 2pi).
  std::vector<double> roots;
};

/// Sign-change scan on 4 * grid_resolution samples, then bisection to 1e-10.
ConvergenceBoundaries convergence_boundaries(double t, int grid_resolution);

}  // namespace covprop
