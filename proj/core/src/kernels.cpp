#include "covprop/kernels.hpp"

#include "covprop/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace covprop {

double chordal_distance(double xi, double xj) {
  if (!std::isfinite(xi) || !std::isfinite(xj))
    throw std::invalid_argument("chordal_distance: non-finite angle");
  return 2.0 * std::abs(std::sin(0.5 * (xi - xj)));
}

double gc_kernel(double r, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("gc_kernel: support half-length must be > 0");
  if (r < 0.0) throw std::invalid_argument("gc_kernel: negative distance");
  const double z = r / c;
  if (z <= 1.0) {
    return (((-0.25 * z + 0.5) * z + 0.625) * z - 5.0 / 3.0) * z * z + 1.0;
  }
  if (z < 2.0) {
    return ((((z / 12.0 - 0.5) * z + 0.625) * z + 5.0 / 3.0) * z - 5.0) * z + 4.0 - 2.0 / (3.0 * z);
  }
  return 0.0;
}

double foar_kernel(double r, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("foar_kernel: length scale must be > 0");
  if (r < 0.0) throw std::invalid_argument("foar_kernel: negative distance");
  return std::exp(-r / length);
}

CorrelationKernel CorrelationKernel::gaspari_cohn(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("gaspari_cohn: c must be finite and > 0 (use dirac for c = 0)");
  return CorrelationKernel(Kind::GaspariCohn, c);
}

CorrelationKernel CorrelationKernel::foar(double length) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("foar: L must be finite and > 0 (use dirac for L = 0)");
  return CorrelationKernel(Kind::Foar, length);
}

CorrelationKernel CorrelationKernel::parse(std::string_view text) {
  if (text == "dirac") return dirac();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("kernel must be gc:<c>, foar:<L> or dirac, got '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view number = text.substr(colon + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc() || ptr != number.data() + number.size())
    throw std::invalid_argument("bad kernel scale '" + std::string(number) + "'");
  // gc:0 and foar:0 are the zero-length limit.
  if (value == 0.0 && (kind == "gc" || kind == "foar")) return dirac();
  if (kind == "gc") return gaspari_cohn(value);
  if (kind == "foar") return foar(value);
  throw std::invalid_argument("unknown kernel kind '" + std::string(kind) + "'");
}

double CorrelationKernel::operator()(double r) const {
  switch (kind_) {
    case Kind::GaspariCohn: return gc_kernel(r, scale_);
    case Kind::Foar: return foar_kernel(r, scale_);
    case Kind::Dirac: return r == 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

std::string CorrelationKernel::spec() const {
  switch (kind_) {
    case Kind::GaspariCohn: return "gc:" + format_shortest(scale_);
    case Kind::Foar: return "foar:" + format_shortest(scale_);
    case Kind::Dirac: return "dirac";
  }
  return "?";
}

std::string CorrelationKernel::tag() const {
  std::string s = spec();
  for (char& ch : s)
    if (ch == ':') ch = '_';
  return s;
}

VarianceProfile VarianceProfile::parse(std::string_view text) {
  if (text == "unit") return VarianceProfile(Kind::Unit);
  if (text == "sin") return VarianceProfile(Kind::SinusoidalStd);
  throw std::invalid_argument("variance must be unit or sin, got '" + std::string(text) + "'");
}

std::string VarianceProfile::name() const { return kind_ == Kind::Unit ? "unit" : "sin"; }

double VarianceProfile::stddev(double x) const {
  return kind_ == Kind::Unit ? 1.0 : std::sin(3.0 * x) / 3.0 + 1.0;
}

}  // namespace covprop
