#pragma once

#include <memory>
#include <optional>
#include <string>

#include "jetflow/interp.hpp"
#include "jetflow/spectral.hpp"
#include "jetflow/vortex.hpp"

namespace jetflow {

enum class FieldBackend { KernelK0, KernelK1, Spectral, VortexBlob };

std::string to_string(FieldBackend backend);

/// Immutable snapshot of an interpolated velocity field. Copies are cheap
/// and safe to share across threads.
class VelocityFieldView {
 public:
  static VelocityFieldView kernel_k0(const RadialKernel& kernel, PointArray positions,
                                     PointArray momenta);
  static VelocityFieldView kernel_k1(const RadialKernel& kernel, PointArray positions,
                                     PointArray momenta, MatList frame_momenta);
  static VelocityFieldView spectral(std::shared_ptr<const SpectralBasis> basis, Vec coefficients);
  static VelocityFieldView vortex_blob(VortexState state);

  FieldBackend backend() const { return backend_; }
  int dim() const;

  Vec eval(const Vec& m) const;
  Mat grad(const Vec& m) const;
  Vec operator()(const Vec& m) const { return eval(m); }

  const Vec& coefficients() const { return data_->coefficients; }

 private:
  struct Data {
    std::optional<RadialKernel> kernel;
    PointArray positions;
    PointArray momenta;
    MatList frame_momenta;
    std::shared_ptr<const SpectralBasis> basis;
    Vec coefficients;
    VortexState vortices;
  };

  VelocityFieldView(FieldBackend backend, std::shared_ptr<const Data> data)
      : backend_(backend), data_(std::move(data)) {}

  FieldBackend backend_;
  std::shared_ptr<const Data> data_;
};

}  // namespace jetflow
