#pragma once

#include "sci/tensor.hpp"

#include <cstdint>
#include <filesystem>

namespace sci::pipeline {

// A bright square on a flat background, moving one column per frame.
struct MovingSquare
{
  Index  nx = 32;
  Index  ny = 32;
  Index  nb = 8;
  Index  side = 12;
  Index  row = 10;
  Index  col = 6;
  Index  speed = 1;
  double background = 0.1;
  double value = 0.9;
};

Cube moving_square(MovingSquare const &s = {});

Cube bernoulli_masks(Index nx, Index ny, Index nb, double p, std::uint64_t seed);
Cube gaussian_masks(Index nx, Index ny, Index nb, std::uint64_t seed);

// nx × ny window of every channel of `mother`, starting at (x, y).
Cube crop_masks(Cube const &mother, Index x, Index y, Index nx, Index ny);

// P2 or P5 grayscale image scaled to [0, 1] by its maxval.
Frame read_pgm(std::filesystem::path const &path);
void  write_pgm(std::filesystem::path const &path, Frame const &frame);

// A .sct cube, a single .pgm (one channel), or a comma-separated list of
// .pgm frames (one channel each).
Cube load_cube(std::string const &spec);

} // namespace sci::pipeline
