#pragma once

#include "sci/forward_model.hpp"
#include "sci/solvers.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sci::pipeline {

enum class Mode
{
  Simulate,
  Reconstruct,
  Benchmark,
  VerifyTheory,
  MakeMasks,
};

enum class ForwardKind
{
  Video,
  Spectral,
};

enum class MaskKind
{
  Bernoulli,
  Gaussian,
  Crop,
};

std::string_view to_string(Mode m);
std::string_view to_string(ForwardKind f);
std::string_view to_string(MaskKind k);
Mode             parse_mode(std::string_view s);

// Everything a CLI run needs. Text form is one `key = value` per line; `#`
// starts a comment. Lists are comma-separated.
struct RunConfig
{
  Mode mode = Mode::Reconstruct;

  std::string input;
  std::string masks;
  std::string truth;
  std::string output;
  std::string report;
  std::string csv;
  std::string dataset;

  ForwardKind      forward = ForwardKind::Video;
  SpectralGeometry geometry;
  NoiseSpec        noise;

  Algorithm                algorithm = Algorithm::GapTv;
  int                      stages = 100;
  std::string              denoiser = "tv"; // identity | tv | network
  std::vector<std::string> weights;
  double                   gamma = 1.0;
  bool                     scale_by_b = false;
  double                   lambda_tv = 0.5;
  double                   tv_decay = 0.95;
  int                      tv_inner = 20;
  bool                     accelerate = true;

  bool   metrics_psnr = true;
  bool   metrics_ssim = true;
  double peak = 1.0;

  MaskKind    mask_kind = MaskKind::Bernoulli;
  Index       nx = 32;
  Index       ny = 32;
  Index       nb = 8;
  double      mask_p = 0.5;
  Index       crop_x = 0;
  Index       crop_y = 0;
  std::string mother;

  int trials = 100;
  int xi_samples = 10000;
  int threads = 0;

  std::uint64_t seed = 0;

  // Throws InvalidArgument when a mode-specific field is missing or a value
  // is out of range.
  void validate() const;

  bool operator==(RunConfig const &) const;
};

// Sets one field from its text form; unknown keys throw InvalidArgument.
void set_field(RunConfig &cfg, std::string_view key, std::string_view value);

RunConfig   parse_config(std::string_view text, RunConfig base = {});
RunConfig   load_config(std::string const &path, RunConfig base = {});
std::string serialize(RunConfig const &cfg);

std::vector<std::string> config_keys();

} // namespace sci::pipeline
