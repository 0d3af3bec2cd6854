#pragma once

#include "tensor.hpp"

#include <vector>

namespace sci {

// Anisotropic total variation Σ|∂_x u| + |∂_y u| with forward differences
// and Neumann boundary.
double anisotropic_tv(Eigen::Ref<Frame const> const &u);

// ½‖u − f‖² + λ·TV(u)
double tv_objective(Eigen::Ref<Frame const> const &u, Eigen::Ref<Frame const> const &f, double lambda);

struct TvReport
{
  // Objective of the returned iterate after each inner iteration.
  std::vector<double> objective;
};

// Per-frame anisotropic ROF denoising by projected gradient on the dual
// (Chambolle-style, step 1/8). The returned iterate is the best primal
// point seen, so the reported objective never increases.
Frame tv_denoise_frame(Eigen::Ref<Frame const> const &f, double lambda, int iterations, TvReport *report = nullptr);

// Channel-by-channel application to a cube.
Cube tv_denoise(Cube const &x, double lambda, int iterations, std::vector<TvReport> *reports = nullptr);

} // namespace sci
