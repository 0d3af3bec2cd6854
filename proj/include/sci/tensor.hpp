#pragma once

#include "types.hpp"

#include <ostream>
#include <sstream>

namespace sci {

struct CubeDims
{
  Index nx = 0;
  Index ny = 0;
  Index nb = 0;

  Index pixels() const { return nx * ny; }
  Index size() const { return nx * ny * nb; }
  bool  operator==(CubeDims const &) const = default;
};

inline std::ostream &operator<<(std::ostream &os, CubeDims const &d)
{
  return os << d.nx << "x" << d.ny << "x" << d.nb;
}

// Dense n_x × n_y × B cube. Slice b occupies the contiguous block
// [b·n, (b+1)·n) of the storage and is column-major inside, so the storage
// vector is exactly Vec(X) = [Vec(X_1); …; Vec(X_B)].
template <typename Scalar_> class DataCube
{
public:
  using Scalar = Scalar_;
  using Slice = Eigen::Map<Matrix<Scalar>>;
  using ConstSlice = Eigen::Map<Matrix<Scalar> const>;

  DataCube() = default;

  DataCube(Index nx, Index ny, Index nb)
    : DataCube(CubeDims{nx, ny, nb})
  {
  }

  explicit DataCube(CubeDims dims)
    : dims_{dims}
    , data_(Vector<Scalar>::Zero(dims.size()))
  {
    if (dims.nx < 0 || dims.ny < 0 || dims.nb < 0) { fail(ErrorKind::ShapeMismatch, "negative cube dimension"); }
  }

  DataCube(CubeDims dims, Vector<Scalar> data)
    : dims_{dims}
    , data_(std::move(data))
  {
    if (data_.size() != dims_.size()) {
      fail(ErrorKind::ShapeMismatch, "cube data length does not match dimensions");
    }
  }

  static DataCube Constant(CubeDims dims, Scalar value)
  {
    return DataCube(dims, Vector<Scalar>::Constant(dims.size(), value));
  }

  CubeDims const &dims() const { return dims_; }
  Index           nx() const { return dims_.nx; }
  Index           ny() const { return dims_.ny; }
  Index           nb() const { return dims_.nb; }
  Index           pixels() const { return dims_.pixels(); }
  Index           size() const { return dims_.size(); }

  Scalar &operator()(Index i, Index j, Index b) { return data_[b * pixels() + j * nx() + i]; }
  Scalar  operator()(Index i, Index j, Index b) const { return data_[b * pixels() + j * nx() + i]; }

  Slice      slice(Index b) { return Slice(data_.data() + b * pixels(), nx(), ny()); }
  ConstSlice slice(Index b) const { return ConstSlice(data_.data() + b * pixels(), nx(), ny()); }

  // Block b of Vec(X) as a column vector view.
  auto block(Index b) { return data_.segment(b * pixels(), pixels()); }
  auto block(Index b) const { return data_.segment(b * pixels(), pixels()); }

  Vector<Scalar>       &vec() { return data_; }
  Vector<Scalar> const &vec() const { return data_; }

  template <typename Other> DataCube<Other> cast() const
  {
    return DataCube<Other>(dims_, data_.template cast<Other>());
  }

  bool operator==(DataCube const &other) const
  {
    return dims_ == other.dims_ && data_ == other.data_;
  }

private:
  CubeDims       dims_;
  Vector<Scalar> data_;
};

using Cube = DataCube<double>;
using MaskSet = DataCube<double>;

template <typename Scalar> Vector<Scalar> vectorize(DataCube<Scalar> const &cube) { return cube.vec(); }

template <typename Derived>
DataCube<typename Derived::Scalar> unvectorize(Eigen::MatrixBase<Derived> const &v, CubeDims dims)
{
  if (v.size() != dims.size()) { fail(ErrorKind::ShapeMismatch, "vector length does not match cube dimensions"); }
  return DataCube<typename Derived::Scalar>(dims, v);
}

template <typename Scalar> Vector<Scalar> vectorize(Frame2D<Scalar> const &frame)
{
  return Eigen::Map<Vector<Scalar> const>(frame.data(), frame.size());
}

inline void require_same_dims(CubeDims const &a, CubeDims const &b, char const *what)
{
  if (!(a == b)) {
    std::ostringstream msg;
    msg << what << ": " << a << " vs " << b;
    fail(ErrorKind::ShapeMismatch, msg.str());
  }
}

} // namespace sci
