#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sci {

using Index = Eigen::Index;

template <typename Scalar> using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar> using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// A single measurement frame (Y, Z, M0). Column-major, so the underlying
// storage is already Vec(Y).
template <typename Scalar> using Frame2D = Matrix<Scalar>;

using Frame = Frame2D<double>;

enum class ErrorKind
{
  ShapeMismatch,
  BadMagic,
  TruncatedPayload,
  UnsupportedRank,
  TooLarge,
  NonPositiveGamma,
  GammaOutOfRange,
  OutOfAlphabet,
  WeightShapeMismatch,
  UnknownLayerKind,
  CropOutOfBounds,
  EmptyDataset,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, std::string const &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what)
    , kind_{kind}
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::ShapeMismatch: return "ShapeMismatch";
  case ErrorKind::BadMagic: return "BadMagic";
  case ErrorKind::TruncatedPayload: return "TruncatedPayload";
  case ErrorKind::UnsupportedRank: return "UnsupportedRank";
  case ErrorKind::TooLarge: return "TooLarge";
  case ErrorKind::NonPositiveGamma: return "NonPositiveGamma";
  case ErrorKind::GammaOutOfRange: return "GammaOutOfRange";
  case ErrorKind::OutOfAlphabet: return "OutOfAlphabet";
  case ErrorKind::WeightShapeMismatch: return "WeightShapeMismatch";
  case ErrorKind::UnknownLayerKind: return "UnknownLayerKind";
  case ErrorKind::CropOutOfBounds: return "CropOutOfBounds";
  case ErrorKind::EmptyDataset: return "EmptyDataset";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, std::string const &what) { throw Error(kind, what); }

} // namespace sci
