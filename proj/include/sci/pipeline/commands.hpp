#pragma once

#include "config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sci::pipeline {

// File names that travel with one measurement: for `scene.meas.sct` (or
// `scene.sct`) the stem is `scene`.
struct SceneFiles
{
  std::filesystem::path measurement;
  std::filesystem::path truth;
  std::filesystem::path masks;
  std::filesystem::path meta;
  std::filesystem::path trace;

  static SceneFiles from_output(std::filesystem::path const &output);
};

struct SimulateResult
{
  Frame      measurement;
  Cube       truth;
  Cube       masks; // operator masks (shifted for spectral)
  SceneFiles files;
};

SimulateResult simulate(RunConfig const &cfg, std::ostream &log);

// Runs the configured solver on one measurement. `truth` is in operator
// coordinates and only feeds the per-stage trace.
Reconstruction solve(RunConfig const &cfg, Operator const &op, Frame const &y, std::optional<Cube> truth = std::nullopt);

struct ReconstructResult
{
  Cube                  estimate; // unsheared for spectral data
  Reconstruction        run;
  std::optional<double> psnr;
  std::optional<double> ssim;
};

ReconstructResult reconstruct_run(RunConfig const &cfg, std::ostream &log);

struct SceneRow
{
  std::string name;
  double      psnr = 0.0;
  double      ssim = 0.0;
  double      seconds = 0.0;
};

struct BenchmarkResult
{
  std::vector<SceneRow> rows;
  SceneRow              mean;
};

// Scenes are `<stem>.truth.sct` files in cfg.dataset. Masks come from
// `<stem>.masks.sct`, else `masks.sct` in the same directory, else
// cfg.masks; the measurement from `<stem>.meas.sct` or is simulated.
BenchmarkResult benchmark(RunConfig const &cfg, std::ostream &log);

SceneRow    mean_row(std::vector<SceneRow> const &rows);
std::string format_table(BenchmarkResult const &r);
void        write_csv(std::ostream &os, BenchmarkResult const &r);

// Runs the oracle, operator-norm, Xᵢ and contraction checks; returns true
// when every check passes.
bool verify_theory(RunConfig const &cfg, std::ostream &log);

Cube make_masks(RunConfig const &cfg, std::ostream &log);

} // namespace sci::pipeline
