#pragma once

#include "denoisers.hpp"
#include "sci_operator.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sci {

using Operator = SciOperator<double>;

enum class Algorithm
{
  GapNet,
  AdmmNet,
  GapTv,
  PnpGap,
};

std::string_view to_string(Algorithm a);
Algorithm        parse_algorithm(std::string_view name);

struct SolverConfig
{
  Algorithm algorithm = Algorithm::GapNet;
  int       stages = 1;
  // gap_net / admm_net: one denoiser per stage. pnp_gap: a single shared one.
  std::vector<DenoiserStage> denoisers;
  double                     gamma = 1.0;
  // 1 for the Euclidean projection, B for N(0,1) masks.
  double projection_scale = 1.0;
  // Accelerated GAP: the projection target accumulates y + Σ(y − Hv).
  bool accelerate = false;
  bool record_estimates = false;

  std::optional<Cube> truth;
  double              peak = 1.0;

  void validate() const;
};

struct StageRecord
{
  double                residual = 0.0;            // ‖y − Hv⁽ᵏ⁾‖₂
  double                projection_residual = 0.0; // ‖y − Hx⁽ᵏ⁾‖₂ on non-floored pixels (0 for v⁽⁰⁾)
  double                primal_residual = 0.0;     // ADMM ‖x⁽ᵏ⁾ − v⁽ᵏ⁾‖₂
  std::optional<double> error;                     // ‖v⁽ᵏ⁾ − x*‖₂
  std::optional<double> psnr;
  std::optional<Cube>   estimate;
};

// Entry 0 is v⁽⁰⁾ = Hᵀy; entry k the output of stage k.
struct ReconTrace
{
  std::vector<StageRecord> stages;
};

struct Reconstruction
{
  Cube       estimate;
  ReconTrace trace;
  double     seconds = 0.0;
};

// Stage k (1-based) → denoiser used by that stage.
using StageProvider = std::function<DenoiserStage const &(int)>;

Reconstruction gap_net_reconstruct(Operator const &op, Frame const &y, SolverConfig const &cfg);
Reconstruction admm_net_reconstruct(Operator const &op, Frame const &y, SolverConfig const &cfg);
Reconstruction pnp_gap_reconstruct(Operator const &op, Frame const &y, SolverConfig const &cfg);

struct GapTvOptions
{
  int    iterations = 100;
  double lambda = 0.5;
  // Per-iteration decay of the TV weight, λ_k = λ·decay^k.
  double decay = 0.95;
  int    inner_iterations = 20;
  bool   accelerate = true;

  std::optional<Cube> truth;
  double              peak = 1.0;
  bool                record_estimates = false;
};

// GAP with a TV denoising stage every iteration. With lambda = 0 the loop
// reduces to identity-denoiser GAP.
Reconstruction gap_tv_reconstruct(Operator const &op, Frame const &y, GapTvOptions const &options);
Reconstruction gap_tv_reconstruct(Operator const &op, Frame const &y, int iterations, double lambda);

Reconstruction reconstruct(Operator const &op, Frame const &y, SolverConfig const &cfg);

} // namespace sci
