#pragma once

#include <string>
#include <string_view>

namespace jetflow {

enum class KernelFamily { Gaussian, Exponential };

/// Radial kernel profile phi(s) of the squared distance s = |r|^2.
///
/// The kernel is the Green's function of the inertia operator that defines
/// the kinetic energy metric. Gaussian: phi(s) = exp(-s / (2 sigma^2)).
/// Exponential: phi(s) = exp(-sqrt(s) / alpha), the Green's function of
/// 1 - alpha^2 Laplacian; it is only C^0 at the origin, so derivatives
/// in s are rejected at s = 0.
class RadialKernel {
 public:
  RadialKernel(KernelFamily family, double length_scale);

  static RadialKernel gaussian(double sigma) { return {KernelFamily::Gaussian, sigma}; }
  static RadialKernel exponential(double alpha) { return {KernelFamily::Exponential, alpha}; }

  /// Parses "gaussian" / "exponential".
  static RadialKernel from_name(std::string_view family, double length_scale);

  KernelFamily family() const { return family_; }
  double length_scale() const { return length_scale_; }
  std::string name() const;
  bool smooth_at_origin() const { return family_ == KernelFamily::Gaussian; }

  double eval(double s) const;
  double d1(double s) const;
  double d2(double s) const;
  double d3(double s) const;

 private:
  void check_differentiable(double s) const;

  KernelFamily family_;
  double length_scale_;
};

inline double kernel_eval(const RadialKernel& k, double s) { return k.eval(s); }
inline double kernel_d1(const RadialKernel& k, double s) { return k.d1(s); }
inline double kernel_d2(const RadialKernel& k, double s) { return k.d2(s); }

}  // namespace jetflow
