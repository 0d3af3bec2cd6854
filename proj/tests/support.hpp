#pragma once

// Shared helpers for the unit tests. The dense builders here are written
// independently of the library so they can serve as oracles.

#include "sci/tensor.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace test {

using sci::Cube;
using sci::CubeDims;
using sci::Frame;
using sci::Index;
using Vec = sci::Vector<double>;
using Mat = sci::Matrix<double>;

inline std::filesystem::path data_dir() { return SCI_TEST_DATA_DIR; }

inline std::filesystem::path scratch_dir(std::string const &name)
{
  auto dir = std::filesystem::temp_directory_path() / ("sci_tests_" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Cube random_cube(CubeDims d, std::uint64_t seed, double lo = -1.0, double hi = 1.0)
{
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Cube                                   c(d);
  for (Index b = 0; b < d.nb; ++b) {
    for (Index j = 0; j < d.ny; ++j) {
      for (Index i = 0; i < d.nx; ++i) { c(i, j, b) = u(rng); }
    }
  }
  return c;
}

inline Cube gaussian_cube(CubeDims d, std::uint64_t seed)
{
  std::mt19937_64                  rng(seed);
  std::normal_distribution<double> g;
  Cube                             c(d);
  for (Index b = 0; b < d.nb; ++b) {
    for (Index j = 0; j < d.ny; ++j) {
      for (Index i = 0; i < d.nx; ++i) { c(i, j, b) = g(rng); }
    }
  }
  return c;
}

inline Frame random_frame(Index nx, Index ny, std::uint64_t seed)
{
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Frame                                  f(nx, ny);
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) { f(i, j) = u(rng); }
  }
  return f;
}

// Column-stacked Vec(·) of a frame, element by element.
inline Vec stack_columns(Frame const &f)
{
  Vec v(f.size());
  Index k = 0;
  for (Index j = 0; j < f.cols(); ++j) {
    for (Index i = 0; i < f.rows(); ++i) { v[k++] = f(i, j); }
  }
  return v;
}

inline Vec stack_cube(Cube const &c)
{
  Vec v(c.size());
  Index k = 0;
  for (Index b = 0; b < c.nb(); ++b) {
    for (Index j = 0; j < c.ny(); ++j) {
      for (Index i = 0; i < c.nx(); ++i) { v[k++] = c(i, j, b); }
    }
  }
  return v;
}

// H = [D_1, …, D_B] built entry by entry from the masks.
inline Mat dense_sensing(Cube const &masks)
{
  Index const n = masks.nx() * masks.ny();
  Mat         h = Mat::Zero(n, n * masks.nb());
  for (Index b = 0; b < masks.nb(); ++b) {
    for (Index j = 0; j < masks.ny(); ++j) {
      for (Index i = 0; i < masks.nx(); ++i) {
        Index const p = j * masks.nx() + i;
        h(p, b * n + p) = masks(i, j, b);
      }
    }
  }
  return h;
}

inline double rel(Vec const &got, Vec const &want) { return (got - want).norm() / std::max(want.norm(), 1e-300); }

} // namespace test
