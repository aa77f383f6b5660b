#include "covprop/flow_exact.hpp"

#include "covprop/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace covprop {
namespace {

const double kSqrt3 = std::sqrt(3.0);

double sine_speed(double x) { return std::sin(x) + 2.0; }

// Continuous antiderivative of 1/v scaled by sqrt(3)/2: phase(x + 2pi) =
// phase(x) + pi, and phase(x) - phase(s) = sqrt(3) t / 2 along a
// characteristic.
double characteristic_phase(double x) {
  const double principal = std::atan((2.0 * std::tan(0.5 * x) + 1.0) / kSqrt3);
  return x > kPi ? principal + kPi : principal;
}

void require_time(double t, const char* where) {
  if (!std::isfinite(t)) throw std::invalid_argument(std::string(where) + ": non-finite time");
  if (t < 0.0) throw std::invalid_argument(std::string(where) + ": negative time");
}

}  // namespace

double departure_point(double x, double t) {
  require_time(t, "departure_point");
  const double xw = wrap_angle(x);
  if (t == 0.0) return xw;

  const double phase = characteristic_phase(xw) - 0.5 * kSqrt3 * t;
  const double branch = std::round(phase / kPi);
  const double reduced = phase - branch * kPi;  // in [-pi/2, pi/2]
  const double s = 2.0 * std::atan(0.5 * (kSqrt3 * std::tan(reduced) - 1.0));
  return wrap_angle(s);
}

double circulation_period() { return kTwoPi / kSqrt3; }

ExactProfile::ExactProfile(double alpha, Initial f0) : alpha_(alpha), f0_(std::move(f0)) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("ExactProfile: non-finite alpha");
  if (!f0_) throw std::invalid_argument("ExactProfile: empty initial profile");
}

double exact_weighted_solution(const ExactProfile& profile, double x, double t) {
  const double s = departure_point(x, t);
  const double ratio = sine_speed(s) / sine_speed(wrap_angle(x));
  const double alpha = profile.alpha();
  double weight;
  if (alpha == 0.0) {
    weight = 1.0;
  } else if (alpha == 1.0) {
    weight = ratio;
  } else if (alpha == 2.0) {
    weight = ratio * ratio;
  } else if (alpha == 0.5) {
    weight = std::sqrt(ratio);
  } else {
    weight = std::pow(ratio, alpha);
  }
  return profile.initial(s) * weight;
}

double mass_ratio(double x, double t) {
  const double s = departure_point(x, t);
  return sine_speed(s) / sine_speed(wrap_angle(x));
}

double polar_scalar_d(double x, double t) { return std::sqrt(mass_ratio(x, t)); }

ConvergenceBoundaries convergence_boundaries(double t, int grid_resolution) {
  require_time(t, "convergence_boundaries");
  if (grid_resolution < 1) throw std::invalid_argument("convergence_boundaries: resolution < 1");

  ConvergenceBoundaries out;
  if (t == 0.0) {
    out.everywhere_neutral = true;
    return out;
  }

  const int samples = 4 * grid_resolution;
  const double h = kTwoPi / samples;
  std::vector<double> excess(samples);
  double largest = 0.0;
  for (int i = 0; i < samples; ++i) {
    excess[i] = mass_ratio(i * h, t) - 1.0;
    largest = std::max(largest, std::abs(excess[i]));
  }
  // Whole periods bring every particle home; m - 1 is pure round-off then.
  if (largest < 1e-12) {
    out.everywhere_neutral = true;
    return out;
  }

  auto f = [t](double x) { return mass_ratio(x, t) - 1.0; };
  for (int i = 0; i < samples; ++i) {
    const double a = i * h;
    const double fa = excess[i];
    const double fb = excess[(i + 1) % samples];
    if (fa == 0.0) {
      out.roots.push_back(a);
      continue;
    }
    if (fa * fb >= 0.0) continue;
    double lo = a, hi = a + h, flo = fa;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    out.roots.push_back(wrap_angle(0.5 * (lo + hi)));
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

}  // namespace covprop
