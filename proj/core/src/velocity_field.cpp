#include "covprop/velocity_field.hpp"

#include "covprop/types.hpp"

#include <cmath>
#include <stdexcept>

namespace covprop {

double wrap_angle(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("wrap_angle: non-finite angle");
  double w = std::fmod(x, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a tiny negative number can land exactly on 2pi after the shift.
  if (w >= kTwoPi) w = 0.0;
  return w;
}

VelocityField VelocityField::constant(double speed) {
  if (!std::isfinite(speed)) throw std::invalid_argument("VelocityField: non-finite speed");
  return VelocityField(Kind::Constant, speed);
}

double VelocityField::speed(double x) const {
  return kind_ == Kind::ShiftedSine ? std::sin(x) + 2.0 : constant_;
}

double VelocityField::derivative(double x) const {
  return kind_ == Kind::ShiftedSine ? std::cos(x) : 0.0;
}

double VelocityField::second_derivative(double x) const {
  return kind_ == Kind::ShiftedSine ? -std::sin(x) : 0.0;
}

double VelocityField::max_speed() const {
  return kind_ == Kind::ShiftedSine ? 3.0 : std::abs(constant_);
}

}  // namespace covprop
