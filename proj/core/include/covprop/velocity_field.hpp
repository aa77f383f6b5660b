#pragma once

namespace covprop {

/// Time-independent advection speed on the unit circle.
///
/// ShiftedSine is v(x) = sin(x) + 2, the only field with closed-form
/// characteristics. Constant exists so the schemes can be checked against
/// pure translation.
class VelocityField {
 public:
  enum class Kind { ShiftedSine, Constant };

  static VelocityField shifted_sine() { return VelocityField(Kind::ShiftedSine, 0.0); }
  static VelocityField constant(double speed);

  Kind kind() const { return kind_; }

  double speed(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  /// Upper bound of |v| over the circle; sets the CFL time step.
  double max_speed() const;

 private:
  VelocityField(Kind kind, double c) : kind_(kind), constant_(c) {}

  Kind kind_;
  double constant_;
};

}  // namespace covprop
