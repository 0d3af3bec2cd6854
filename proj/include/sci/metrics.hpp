#pragma once

#include "tensor.hpp"

#include <array>
#include <limits>

namespace sci {

// Returned by psnr() when the inputs are identical.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

double mse(Cube const &a, Cube const &b);
double psnr(Cube const &a, Cube const &b, double peak = 1.0);
double psnr(Frame const &a, Frame const &b, double peak = 1.0);

// Gaussian-window SSIM (11×11, σ = 1.5, K1 = 0.01, K2 = 0.03) over the
// valid region; the window shrinks for frames smaller than 11 pixels.
double ssim(Frame const &a, Frame const &b, double peak = 1.0);
// Mean of per-channel SSIM.
double ssim(Cube const &a, Cube const &b, double peak = 1.0);

// ‖x* − v‖₂
double rmse_loss(Cube const &truth, Cube const &estimate);

inline constexpr std::array<double, 3> kStageLossWeights = {1.0, 0.5, 0.5};

// β₁‖x* − v_K‖ + β₂‖x* − v_{K−1}‖ + β₃‖x* − v_{K−2}‖
double weighted_loss(Cube const                  &truth,
                     Cube const                  &last,
                     Cube const                  &second_last,
                     Cube const                  &third_last,
                     std::array<double, 3> const &betas = kStageLossWeights);

} // namespace sci
