#pragma once

#include "tensor.hpp"

#include <optional>
#include <random>

namespace sci {

// The SCI sensing map H = [D_1, …, D_B] with D_b = diag(Vec(C_b)), held
// implicitly through its masks. R = HHᵀ is diagonal; its entries are floored
// at r_floor so pixels that no mask exposes stay invertible.
template <typename Scalar_> class SciOperator
{
public:
  using Scalar = Scalar_;

  explicit SciOperator(DataCube<Scalar> masks, std::optional<Scalar> r_floor = std::nullopt)
    : masks_(std::move(masks))
  {
    r_raw_ = Vector<Scalar>::Zero(masks_.pixels());
    for (Index b = 0; b < masks_.nb(); ++b) { r_raw_.array() += masks_.block(b).array().square(); }
    Scalar const peak = r_raw_.size() ? r_raw_.maxCoeff() : Scalar(0);
    r_floor_ = r_floor.value_or(peak > Scalar(0) ? Scalar(1e-12) * peak : Scalar(1e-12));
    if (!(r_floor_ > Scalar(0))) { fail(ErrorKind::InvalidArgument, "r_floor must be positive"); }
    floored_ = (r_raw_.array() < r_floor_);
    r_ = floored_.select(Vector<Scalar>::Constant(r_raw_.size(), r_floor_), r_raw_);
  }

  DataCube<Scalar> const &masks() const { return masks_; }
  CubeDims const         &dims() const { return masks_.dims(); }
  Index                   pixels() const { return masks_.pixels(); }
  Index                   nb() const { return masks_.nb(); }
  Scalar                  r_floor() const { return r_floor_; }

  // diag(HHᵀ) as a vector over pixels, after flooring.
  Vector<Scalar> const &r() const { return r_; }
  Vector<Scalar> const &r_unfloored() const { return r_raw_; }

  bool  is_floored(Index pixel) const { return floored_[pixel]; }
  Index floored_count() const { return floored_.count(); }

  Eigen::Array<bool, Eigen::Dynamic, 1> const &floored_mask() const { return floored_; }

private:
  DataCube<Scalar>                      masks_;
  Vector<Scalar>                        r_raw_;
  Vector<Scalar>                        r_;
  Eigen::Array<bool, Eigen::Dynamic, 1> floored_;
  Scalar                                r_floor_{};
};

namespace detail {

inline void require_frame(Index rows, Index cols, CubeDims const &dims, char const *what)
{
  if (rows != dims.nx || cols != dims.ny) { fail(ErrorKind::ShapeMismatch, std::string(what) + ": frame does not match operator"); }
}

template <typename Scalar> Vector<Scalar> apply_H_vec(SciOperator<Scalar> const &op, Vector<Scalar> const &x)
{
  Vector<Scalar> y = Vector<Scalar>::Zero(op.pixels());
  for (Index b = 0; b < op.nb(); ++b) { y.array() += op.masks().block(b).array() * x.segment(b * op.pixels(), op.pixels()).array(); }
  return y;
}

template <typename Scalar> Vector<Scalar> apply_Ht_vec(SciOperator<Scalar> const &op, Vector<Scalar> const &y)
{
  Vector<Scalar> x(op.pixels() * op.nb());
  for (Index b = 0; b < op.nb(); ++b) { x.segment(b * op.pixels(), op.pixels()) = op.masks().block(b).cwiseProduct(y); }
  return x;
}

} // namespace detail

// y = Hx (noiseless)
template <typename Scalar> Frame2D<Scalar> apply_H(SciOperator<Scalar> const &op, DataCube<Scalar> const &x)
{
  require_same_dims(x.dims(), op.dims(), "apply_H");
  Vector<Scalar> const y = detail::apply_H_vec(op, x.vec());
  return Eigen::Map<Frame2D<Scalar> const>(y.data(), op.dims().nx, op.dims().ny);
}

// Slice b of Hᵀy is C_b ⊙ Y.
template <typename Scalar> DataCube<Scalar> apply_Ht(SciOperator<Scalar> const &op, Frame2D<Scalar> const &y)
{
  detail::require_frame(y.rows(), y.cols(), op.dims(), "apply_Ht");
  return DataCube<Scalar>(op.dims(), detail::apply_Ht_vec(op, vectorize(y)));
}

template <typename Scalar> Frame2D<Scalar> r_diagonal(SciOperator<Scalar> const &op)
{
  return Eigen::Map<Frame2D<Scalar> const>(op.r().data(), op.dims().nx, op.dims().ny);
}

// x = v + scale·HᵀR⁻¹(y − Hv). scale = 1 is the Euclidean projection onto
// {x : Hx = y}; scale = B is the variant used with N(0,1) masks.
template <typename Scalar>
DataCube<Scalar> project_to_manifold(SciOperator<Scalar> const &op,
                                     DataCube<Scalar> const    &v,
                                     Frame2D<Scalar> const     &y,
                                     Scalar                     scale = Scalar(1))
{
  require_same_dims(v.dims(), op.dims(), "project_to_manifold");
  detail::require_frame(y.rows(), y.cols(), op.dims(), "project_to_manifold");
  Vector<Scalar> const w = (vectorize(y) - detail::apply_H_vec(op, v.vec())).cwiseQuotient(op.r());
  return DataCube<Scalar>(op.dims(), v.vec() + scale * detail::apply_Ht_vec(op, w));
}

// Closed-form solution of (HᵀH + γI)x = Hᵀy + γ(v + u), using
// (HᵀH + γI)⁻¹ = (I − Hᵀ(γI + HHᵀ)⁻¹H)/γ with a diagonal inner inverse.
template <typename Scalar>
DataCube<Scalar> admm_x_update(SciOperator<Scalar> const &op,
                               Frame2D<Scalar> const     &y,
                               DataCube<Scalar> const    &v,
                               DataCube<Scalar> const    &u,
                               Scalar                     gamma)
{
  if (!(gamma > Scalar(0))) { fail(ErrorKind::NonPositiveGamma, "admm_x_update requires gamma > 0"); }
  require_same_dims(v.dims(), op.dims(), "admm_x_update v");
  require_same_dims(u.dims(), op.dims(), "admm_x_update u");
  detail::require_frame(y.rows(), y.cols(), op.dims(), "admm_x_update");
  Vector<Scalar> const rhs = detail::apply_Ht_vec(op, vectorize(y)) + gamma * (v.vec() + u.vec());
  Vector<Scalar> const t = detail::apply_H_vec(op, rhs).array() / (op.r_unfloored().array() + gamma);
  return DataCube<Scalar>(op.dims(), (rhs - detail::apply_Ht_vec(op, t)) / gamma);
}

inline constexpr Index kDenseGuard = 1'000'000;

// Explicit n × nB matrix; row i holds C_b(i) at column b·n + i.
template <typename Scalar> Matrix<Scalar> build_dense(SciOperator<Scalar> const &op)
{
  Index const n = op.pixels();
  Index const cols = n * op.nb();
  if (n * cols > kDenseGuard) { fail(ErrorKind::TooLarge, "dense assembly limited to 1e6 entries"); }
  Matrix<Scalar> h = Matrix<Scalar>::Zero(n, cols);
  for (Index b = 0; b < op.nb(); ++b) {
    for (Index i = 0; i < n; ++i) { h(i, b * n + i) = op.masks().block(b)[i]; }
  }
  return h;
}

// Power-iteration estimate of σ_max(HᵀR⁻¹H), with R the floored diagonal.
template <typename Scalar>
Scalar operator_norm(SciOperator<Scalar> const &op, int iterations = 50, std::uint64_t seed = 0x5eed)
{
  std::mt19937_64                  rng(seed);
  std::normal_distribution<double> gauss;
  Vector<Scalar>                   x(op.pixels() * op.nb());
  for (Index k = 0; k < x.size(); ++k) { x[k] = static_cast<Scalar>(gauss(rng)); }
  x.normalize();
  Scalar estimate = 0;
  for (int it = 0; it < iterations; ++it) {
    Vector<Scalar> const q = detail::apply_H_vec(op, x).cwiseQuotient(op.r());
    Vector<Scalar>       ax = detail::apply_Ht_vec(op, q);
    Scalar const         norm = ax.norm();
    if (norm == Scalar(0)) { return Scalar(0); }
    estimate = norm; // ‖x‖ = 1
    x = ax / norm;
  }
  return estimate;
}

} // namespace sci
