#include "jetflow/kernel.hpp"

#include <cmath>

#include "jetflow/errors.hpp"

namespace jetflow {

RadialKernel::RadialKernel(KernelFamily family, double length_scale)
    : family_(family), length_scale_(length_scale) {
  if (!(length_scale > 0.0) || !std::isfinite(length_scale)) {
    throw DomainError("kernel length_scale must be positive and finite");
  }
}

RadialKernel RadialKernel::from_name(std::string_view family, double length_scale) {
  if (family == "gaussian") return gaussian(length_scale);
  if (family == "exponential") return exponential(length_scale);
  throw ConfigError("unknown kernel family '" + std::string(family) +
                    "' (expected gaussian or exponential)");
}

std::string RadialKernel::name() const {
  return family_ == KernelFamily::Gaussian ? "gaussian" : "exponential";
}

namespace {

void check_nonnegative(double s) {
  if (!(s >= 0.0)) throw DomainError("kernel evaluated at negative squared distance");
}

}  // namespace

void RadialKernel::check_differentiable(double s) const {
  check_nonnegative(s);
  if (family_ == KernelFamily::Exponential && s == 0.0) {
    throw RegularityError("kernel not differentiable at origin");
  }
}

double RadialKernel::eval(double s) const {
  check_nonnegative(s);
  if (family_ == KernelFamily::Gaussian) {
    return std::exp(-s / (2.0 * length_scale_ * length_scale_));
  }
  return std::exp(-std::sqrt(s) / length_scale_);
}

// Gaussian: phi^(n) = (-1/(2 sigma^2))^n phi.
// Exponential with r = sqrt(s): phi = exp(-r/a),
//   phi'   = -phi / (2 a r)
//   phi''  = phi (r + a) / (4 a^2 r^3)
//   phi''' = -phi (r^2 + 3 a r + 3 a^2) / (8 a^3 r^5)
double RadialKernel::d1(double s) const {
  check_differentiable(s);
  const double phi = eval(s);
  const double a = length_scale_;
  if (family_ == KernelFamily::Gaussian) return -phi / (2.0 * a * a);
  const double r = std::sqrt(s);
  return -phi / (2.0 * a * r);
}

double RadialKernel::d2(double s) const {
  check_differentiable(s);
  const double phi = eval(s);
  const double a = length_scale_;
  if (family_ == KernelFamily::Gaussian) {
    const double c = 1.0 / (2.0 * a * a);
    return phi * c * c;
  }
  const double r = std::sqrt(s);
  return phi * (r + a) / (4.0 * a * a * r * r * r);
}

double RadialKernel::d3(double s) const {
  check_differentiable(s);
  const double phi = eval(s);
  const double a = length_scale_;
  if (family_ == KernelFamily::Gaussian) {
    const double c = 1.0 / (2.0 * a * a);
    return -phi * c * c * c;
  }
  const double r = std::sqrt(s);
  return -phi * (r * r + 3.0 * a * r + 3.0 * a * a) / (8.0 * a * a * a * std::pow(r, 5));
}

}  // namespace jetflow
