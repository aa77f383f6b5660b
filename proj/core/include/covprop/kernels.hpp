#pragma once

#include <string>
#include <string_view>

namespace covprop {

/// Straight-line distance between two points of the unit circle,
/// 2 |sin((xi - xj)/2)|, in [0, 2].
double chordal_distance(double xi, double xj);

/// Gaspari-Cohn fifth-order piecewise rational correlation with support
/// [0, 2c]. Throws std::invalid_argument for c <= 0.
double gc_kernel(double r, double c);

/// First-order autoregressive correlation exp(-r/L). Throws for L <= 0.
double foar_kernel(double r, double length);

class CorrelationKernel {
 public:
  enum class Kind { GaspariCohn, Foar, Dirac };

  static CorrelationKernel gaspari_cohn(double c);
  static CorrelationKernel foar(double length);
  static CorrelationKernel dirac() { return CorrelationKernel(Kind::Dirac, 0.0); }
  /// Parses "gc:<c>", "foar:<L>" or "dirac".
  static CorrelationKernel parse(std::string_view text);

  Kind kind() const { return kind_; }
  /// c for GC, L for FOAR, 0 for Dirac.
  double scale() const { return scale_; }
  bool is_dirac() const { return kind_ == Kind::Dirac; }

  /// Correlation at chordal distance r. For Dirac this is 1 at r == 0 and 0
  /// elsewhere, i.e. the identity on a grid.
  double operator()(double r) const;

  /// Round-trips through parse(): "gc:0.05", "foar:0.25", "dirac".
  std::string spec() const;
  /// File-name friendly tag: "gc_0.05", "foar_0.25", "dirac".
  std::string tag() const;

  bool operator==(const CorrelationKernel&) const = default;

 private:
  CorrelationKernel(Kind kind, double scale) : kind_(kind), scale_(scale) {}

  Kind kind_;
  double scale_;
};

class VarianceProfile {
 public:
  enum class Kind { Unit, SinusoidalStd };

  explicit VarianceProfile(Kind kind = Kind::Unit) : kind_(kind) {}
  /// "unit" or "sin".
  static VarianceProfile parse(std::string_view text);

  Kind kind() const { return kind_; }
  std::string name() const;

  /// sigma0(x): 1, or sin(3x)/3 + 1.
  double stddev(double x) const;
  double variance(double x) const {
    const double s = stddev(x);
    return s * s;
  }

  bool operator==(const VarianceProfile&) const = default;

 private:
  Kind kind_;
};

}  // namespace covprop
