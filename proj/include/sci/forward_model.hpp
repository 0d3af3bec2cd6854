#pragma once

#include "tensor.hpp"

#include <cstdint>
#include <random>

namespace sci {

// Disperser geometry for spectral SCI. Channel b lands shift_step·b columns
// to the right of channel 0; the leftmost channel sits at column 0.
// reference_channel only changes the physical shift label, since a global
// column offset cancels between forward and adjoint.
struct SpectralGeometry
{
  Index n_lambda = 1;
  Index shift_step = 2;
  Index reference_channel = 0;

  Index offset(Index b) const { return shift_step * b; }
  Index physical_shift(Index b) const { return shift_step * (b - reference_channel); }
  Index sheared_width(Index ny) const { return ny + (n_lambda - 1) * shift_step; }

  void validate() const
  {
    if (n_lambda < 1) { fail(ErrorKind::InvalidArgument, "n_lambda must be >= 1"); }
    if (shift_step < 0) { fail(ErrorKind::InvalidArgument, "shift_step must be >= 0"); }
    if (reference_channel < 0 || reference_channel >= n_lambda) {
      fail(ErrorKind::InvalidArgument, "reference_channel out of range");
    }
  }
};

struct NoiseSpec
{
  enum class Kind
  {
    None,
    Gaussian
  };

  Kind          kind = Kind::None;
  double        sigma = 0.0;
  std::uint64_t seed = 0;

  static NoiseSpec none() { return {}; }
  static NoiseSpec gaussian(double sigma, std::uint64_t seed)
  {
    if (!(sigma >= 0.0)) { fail(ErrorKind::InvalidArgument, "noise sigma must be >= 0"); }
    return {Kind::Gaussian, sigma, seed};
  }
};

template <typename Scalar> void add_noise(Frame2D<Scalar> &y, NoiseSpec const &noise)
{
  if (noise.kind == NoiseSpec::Kind::None || noise.sigma == 0.0) { return; }
  std::mt19937_64                  rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, noise.sigma);
  for (Index k = 0; k < y.size(); ++k) { y.data()[k] += static_cast<Scalar>(gauss(rng)); }
}

// Y = Σ_b C_b ⊙ X_b + Z
template <typename Scalar>
Frame2D<Scalar> video_forward(DataCube<Scalar> const &cube, DataCube<Scalar> const &masks, NoiseSpec const &noise = {})
{
  require_same_dims(cube.dims(), masks.dims(), "video_forward cube vs masks");
  Frame2D<Scalar> y = Frame2D<Scalar>::Zero(cube.nx(), cube.ny());
  for (Index b = 0; b < cube.nb(); ++b) { y.array() += cube.slice(b).array() * masks.slice(b).array(); }
  add_noise(y, noise);
  return y;
}

template <typename Scalar>
DataCube<Scalar> build_shifted_masks(Frame2D<Scalar> const &mask2d, SpectralGeometry const &geom)
{
  geom.validate();
  Index const      ny = mask2d.cols();
  DataCube<Scalar> c(mask2d.rows(), geom.sheared_width(ny), geom.n_lambda);
  for (Index b = 0; b < geom.n_lambda; ++b) { c.slice(b).middleCols(geom.offset(b), ny) = mask2d; }
  return c;
}

// Shifts channel b right by shift_step·b with zero fill; output width grows to
// n_y + (n_λ−1)·shift_step.
template <typename Scalar> DataCube<Scalar> shear(DataCube<Scalar> const &cube, SpectralGeometry const &geom)
{
  geom.validate();
  if (cube.nb() != geom.n_lambda) { fail(ErrorKind::ShapeMismatch, "shear: channel count differs from geometry"); }
  Index const      ny = cube.ny();
  DataCube<Scalar> out(cube.nx(), geom.sheared_width(ny), cube.nb());
  for (Index b = 0; b < cube.nb(); ++b) { out.slice(b).middleCols(geom.offset(b), ny) = cube.slice(b); }
  return out;
}

template <typename Scalar> DataCube<Scalar> unshear(DataCube<Scalar> const &cube, SpectralGeometry const &geom)
{
  geom.validate();
  if (cube.nb() != geom.n_lambda) { fail(ErrorKind::ShapeMismatch, "unshear: channel count differs from geometry"); }
  Index const spread = (geom.n_lambda - 1) * geom.shift_step;
  if (cube.ny() < spread) { fail(ErrorKind::ShapeMismatch, "unshear: cube narrower than the dispersion spread"); }
  Index const      ny = cube.ny() - spread;
  DataCube<Scalar> out(cube.nx(), ny, cube.nb());
  for (Index b = 0; b < cube.nb(); ++b) { out.slice(b) = cube.slice(b).middleCols(geom.offset(b), ny); }
  return out;
}

// X'(:,:,b) = X⁰(:,:,b) ⊙ M⁰
template <typename Scalar> DataCube<Scalar> modulate(DataCube<Scalar> const &cube0, Frame2D<Scalar> const &mask2d)
{
  if (cube0.nx() != mask2d.rows() || cube0.ny() != mask2d.cols()) {
    fail(ErrorKind::ShapeMismatch, "modulate: mask does not match scene");
  }
  DataCube<Scalar> out(cube0.dims());
  for (Index b = 0; b < cube0.nb(); ++b) { out.slice(b) = cube0.slice(b).cwiseProduct(mask2d); }
  return out;
}

// Modulate, shear and integrate an unshifted spectral scene onto the detector.
template <typename Scalar>
Frame2D<Scalar> spectral_forward(DataCube<Scalar> const &cube0,
                                 Frame2D<Scalar> const  &mask2d,
                                 SpectralGeometry const &geom,
                                 NoiseSpec const        &noise = {})
{
  geom.validate();
  if (cube0.nb() != geom.n_lambda) { fail(ErrorKind::ShapeMismatch, "spectral_forward: channel count differs from geometry"); }
  if (cube0.nx() != mask2d.rows() || cube0.ny() != mask2d.cols()) {
    fail(ErrorKind::ShapeMismatch, "spectral_forward: mask does not match scene");
  }
  Index const     ny = cube0.ny();
  Frame2D<Scalar> y = Frame2D<Scalar>::Zero(cube0.nx(), geom.sheared_width(ny));
  for (Index b = 0; b < cube0.nb(); ++b) {
    y.middleCols(geom.offset(b), ny).array() += cube0.slice(b).array() * mask2d.array();
  }
  add_noise(y, noise);
  return y;
}

} // namespace sci
