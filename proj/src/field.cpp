#include "jetflow/field.hpp"

#include "jetflow/errors.hpp"

namespace jetflow {

std::string to_string(FieldBackend backend) {
  switch (backend) {
    case FieldBackend::KernelK0:
      return "kernel-k0";
    case FieldBackend::KernelK1:
      return "kernel-k1";
    case FieldBackend::Spectral:
      return "spectral";
    case FieldBackend::VortexBlob:
      return "vortex-blob";
  }
  return "unknown";
}

VelocityFieldView VelocityFieldView::kernel_k0(const RadialKernel& kernel, PointArray positions,
                                               PointArray momenta) {
  auto d = std::make_shared<Data>();
  d->kernel = kernel;
  d->positions = std::move(positions);
  d->momenta = std::move(momenta);
  return {FieldBackend::KernelK0, std::move(d)};
}

VelocityFieldView VelocityFieldView::kernel_k1(const RadialKernel& kernel, PointArray positions,
                                               PointArray momenta, MatList frame_momenta) {
  require_jet_kernel(kernel);
  auto d = std::make_shared<Data>();
  d->kernel = kernel;
  d->positions = std::move(positions);
  d->momenta = std::move(momenta);
  d->frame_momenta = std::move(frame_momenta);
  return {FieldBackend::KernelK1, std::move(d)};
}

VelocityFieldView VelocityFieldView::spectral(std::shared_ptr<const SpectralBasis> basis,
                                              Vec coefficients) {
  if (!basis || coefficients.size() != basis->size()) {
    throw ConstraintError("spectral coefficients do not match the basis");
  }
  auto d = std::make_shared<Data>();
  d->basis = std::move(basis);
  d->coefficients = std::move(coefficients);
  return {FieldBackend::Spectral, std::move(d)};
}

VelocityFieldView VelocityFieldView::vortex_blob(VortexState state) {
  auto d = std::make_shared<Data>();
  d->vortices = std::move(state);
  return {FieldBackend::VortexBlob, std::move(d)};
}

int VelocityFieldView::dim() const {
  switch (backend_) {
    case FieldBackend::KernelK0:
    case FieldBackend::KernelK1:
      return static_cast<int>(data_->positions.cols());
    default:
      return 2;
  }
}

Vec VelocityFieldView::eval(const Vec& m) const {
  switch (backend_) {
    case FieldBackend::KernelK0:
      return eval_field_k0(*data_->kernel, data_->positions, data_->momenta, m);
    case FieldBackend::KernelK1:
      return eval_field_k1(*data_->kernel, data_->positions, data_->momenta, data_->frame_momenta, m);
    case FieldBackend::Spectral:
      return data_->basis->eval(data_->coefficients, m);
    case FieldBackend::VortexBlob:
      return blob_velocity(data_->vortices, m);
  }
  return {};
}

Mat VelocityFieldView::grad(const Vec& m) const {
  switch (backend_) {
    case FieldBackend::KernelK0:
      return eval_grad_k0(*data_->kernel, data_->positions, data_->momenta, m);
    case FieldBackend::KernelK1:
      return eval_grad_k1(*data_->kernel, data_->positions, data_->momenta, data_->frame_momenta, m);
    case FieldBackend::Spectral:
      return data_->basis->eval_grad(data_->coefficients, m);
    case FieldBackend::VortexBlob:
      return blob_velocity_grad(data_->vortices, m);
  }
  return {};
}

}  // namespace jetflow
