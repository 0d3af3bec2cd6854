#include "sci/pipeline/commands.hpp"
#include "sci/forward_model.hpp"
#include "sci/metrics.hpp"
#include "sci/pipeline/scenes.hpp"
#include "sci/tensor_file.hpp"
#include "sci/theory.hpp"
#include "sci/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace sci::pipeline {

namespace fs = std::filesystem;

namespace {

bool ends_with(std::string const &s, std::string_view suffix)
{
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string strip(std::string s, std::string_view suffix)
{
  if (ends_with(s, suffix)) { s.resize(s.size() - suffix.size()); }
  return s;
}

std::string fmt_db(double v)
{
  if (std::isinf(v)) { return "inf"; }
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

void write_text(fs::path const &path, std::string const &text)
{
  std::ofstream out(path);
  if (!out) { fail(ErrorKind::Io, "cannot write " + path.string()); }
  out << text;
}

// Geometry with n_lambda taken from the data when the config left it at 1.
SpectralGeometry geometry_for(RunConfig const &cfg, Index channels)
{
  SpectralGeometry g = cfg.geometry;
  if (g.n_lambda == 1) { g.n_lambda = channels; }
  if (g.n_lambda != channels) {
    fail(ErrorKind::ShapeMismatch, "n_lambda = " + std::to_string(g.n_lambda) + " but data has " + std::to_string(channels) + " channels");
  }
  g.validate();
  return g;
}

Cube synthetic_scene(RunConfig const &cfg)
{
  MovingSquare s;
  s.nx = cfg.nx;
  s.ny = cfg.ny;
  s.nb = cfg.nb;
  s.side = std::max<Index>(1, cfg.nx * 12 / 32);
  s.row = cfg.nx * 10 / 32;
  s.col = cfg.ny * 6 / 32;
  return moving_square(s);
}

std::vector<DenoiserStage> stage_denoisers(RunConfig const &cfg, int count)
{
  std::vector<DenoiserStage> out;
  if (cfg.denoiser == "identity") {
    out.assign(static_cast<std::size_t>(count), make_identity());
  } else if (cfg.denoiser == "tv") {
    out.assign(static_cast<std::size_t>(count), make_tv(cfg.lambda_tv, cfg.tv_inner));
  } else if (cfg.denoiser == "network") {
    if (cfg.weights.size() != 1 && cfg.weights.size() != static_cast<std::size_t>(count)) {
      fail(ErrorKind::InvalidArgument, "need 1 or " + std::to_string(count) + " weight files, got " + std::to_string(cfg.weights.size()));
    }
    for (int k = 0; k < count; ++k) {
      auto const &path = cfg.weights.size() == 1 ? cfg.weights.front() : cfg.weights[static_cast<std::size_t>(k)];
      out.push_back(make_network(load_weights(path)));
    }
  } else {
    fail(ErrorKind::InvalidArgument, "unknown denoiser '" + cfg.denoiser + "'");
  }
  return out;
}

void write_trace(fs::path const &path, Reconstruction const &r)
{
  std::ofstream out(path);
  if (!out) { fail(ErrorKind::Io, "cannot write " + path.string()); }
  out << "stage,residual,projection_residual,primal_residual,psnr\n";
  out << std::setprecision(10);
  for (std::size_t k = 0; k < r.trace.stages.size(); ++k) {
    auto const &s = r.trace.stages[k];
    out << k << ',' << s.residual << ',' << s.projection_residual << ',' << s.primal_residual << ',';
    if (s.psnr) { out << fmt_db(*s.psnr); }
    out << '\n';
  }
}

Cube to_scene(RunConfig const &cfg, Cube const &estimate)
{
  if (cfg.forward == ForwardKind::Video) { return estimate; }
  return unshear(estimate, geometry_for(cfg, estimate.nb()));
}

std::optional<Cube> trace_truth(RunConfig const &cfg, std::optional<Cube> const &truth)
{
  if (!truth) { return std::nullopt; }
  if (cfg.forward == ForwardKind::Video) { return truth; }
  return shear(*truth, geometry_for(cfg, truth->nb()));
}

} // namespace

SceneFiles SceneFiles::from_output(fs::path const &output)
{
  std::string const stem = strip(strip(output.string(), ".sct"), ".meas");
  SceneFiles        f;
  f.measurement = output;
  f.truth = stem + ".truth.sct";
  f.masks = stem + ".masks.sct";
  f.meta = stem + ".meta";
  f.trace = stem + ".trace.csv";
  return f;
}

SimulateResult simulate(RunConfig const &cfg, std::ostream &log)
{
  cfg.validate();
  SimulateResult r;
  r.truth = cfg.input == "synthetic" ? synthetic_scene(cfg) : load_cube(cfg.input);

  NoiseSpec noise = cfg.noise;
  noise.seed = cfg.seed;
  SpectralGeometry geom = cfg.geometry;
  if (cfg.forward == ForwardKind::Video) {
    r.masks = load_cube(cfg.masks);
    r.measurement = video_forward(r.truth, r.masks, noise);
  } else {
    Cube const mask = load_cube(cfg.masks);
    if (mask.nb() != 1) { fail(ErrorKind::ShapeMismatch, "spectral mode needs a single 2D mask"); }
    geom = geometry_for(cfg, r.truth.nb());
    Frame const mask2d = mask.slice(0);
    r.measurement = spectral_forward(r.truth, mask2d, geom, noise);
    r.masks = build_shifted_masks(mask2d, geom);
  }

  r.files = SceneFiles::from_output(cfg.output);
  write_tensor(r.files.measurement, r.measurement);
  write_tensor(r.files.truth, r.truth);
  write_tensor(r.files.masks, r.masks);

  std::ostringstream meta;
  meta << "measurement_nx = " << r.measurement.rows() << '\n'
       << "measurement_ny = " << r.measurement.cols() << '\n'
       << "scene_nx = " << r.truth.nx() << '\n'
       << "scene_ny = " << r.truth.ny() << '\n'
       << "scene_nb = " << r.truth.nb() << '\n'
       << "forward = " << to_string(cfg.forward) << '\n'
       << "n_lambda = " << (cfg.forward == ForwardKind::Spectral ? geom.n_lambda : Index{1}) << '\n'
       << "shift_step = " << geom.shift_step << '\n'
       << "noise = " << (noise.kind == NoiseSpec::Kind::None ? "none" : "gaussian") << '\n'
       << "sigma = " << std::setprecision(17) << noise.sigma << '\n'
       << "seed = " << cfg.seed << '\n'
       << "input = " << cfg.input << '\n'
       << "masks = " << cfg.masks << '\n';
  write_text(r.files.meta, meta.str());

  log << "measurement " << r.measurement.rows() << "x" << r.measurement.cols() << " -> " << r.files.measurement.string() << '\n'
      << "truth " << r.truth.dims() << " -> " << r.files.truth.string() << '\n'
      << "masks " << r.masks.dims() << " -> " << r.files.masks.string() << '\n';
  return r;
}

Reconstruction solve(RunConfig const &cfg, Operator const &op, Frame const &y, std::optional<Cube> truth)
{
  if (cfg.algorithm == Algorithm::GapTv) {
    GapTvOptions o;
    o.iterations = cfg.stages;
    o.lambda = cfg.lambda_tv;
    o.decay = cfg.tv_decay;
    o.inner_iterations = cfg.tv_inner;
    o.accelerate = cfg.accelerate;
    o.truth = std::move(truth);
    o.peak = cfg.peak;
    return gap_tv_reconstruct(op, y, o);
  }
  SolverConfig s;
  s.algorithm = cfg.algorithm;
  s.stages = cfg.stages;
  s.denoisers = stage_denoisers(cfg, cfg.algorithm == Algorithm::PnpGap ? 1 : cfg.stages);
  s.gamma = cfg.gamma;
  s.projection_scale = cfg.scale_by_b ? double(op.nb()) : 1.0;
  s.accelerate = cfg.algorithm == Algorithm::PnpGap && cfg.accelerate;
  s.truth = std::move(truth);
  s.peak = cfg.peak;
  return reconstruct(op, y, s);
}

ReconstructResult reconstruct_run(RunConfig const &cfg, std::ostream &log)
{
  cfg.validate();
  Frame const         y = read_frame(cfg.input);
  Operator const      op(load_cube(cfg.masks));
  std::optional<Cube> truth;
  if (!cfg.truth.empty()) { truth = load_cube(cfg.truth); }

  ReconstructResult r;
  r.run = solve(cfg, op, y, trace_truth(cfg, truth));
  r.estimate = to_scene(cfg, r.run.estimate);
  if (truth) {
    require_same_dims(truth->dims(), r.estimate.dims(), "ground truth vs reconstruction");
    if (cfg.metrics_psnr) { r.psnr = psnr(r.estimate, *truth, cfg.peak); }
    if (cfg.metrics_ssim) { r.ssim = ssim(r.estimate, *truth, cfg.peak); }
  }

  SceneFiles const files = SceneFiles::from_output(cfg.output);
  write_tensor(cfg.output, r.estimate);
  fs::path const trace_path = cfg.report.empty() ? files.trace : fs::path(cfg.report);
  write_trace(trace_path, r.run);

  log << "algorithm = " << to_string(cfg.algorithm) << '\n'
      << "stages = " << cfg.stages << '\n'
      << "seconds_per_measurement = " << r.run.seconds << '\n'
      << "final_residual = " << r.run.trace.stages.back().residual << '\n';
  if (r.psnr) { log << "psnr = " << fmt_db(*r.psnr) << '\n'; }
  if (r.ssim) { log << "ssim = " << std::setprecision(4) << std::fixed << *r.ssim << std::defaultfloat << '\n'; }
  log << "estimate -> " << cfg.output << '\n' << "trace -> " << trace_path.string() << '\n';
  return r;
}

SceneRow mean_row(std::vector<SceneRow> const &rows)
{
  if (rows.empty()) { fail(ErrorKind::EmptyDataset, "no scenes to average"); }
  SceneRow m;
  m.name = "average";
  for (auto const &r : rows) {
    m.psnr += r.psnr;
    m.ssim += r.ssim;
    m.seconds += r.seconds;
  }
  double const n = double(rows.size());
  m.psnr /= n;
  m.ssim /= n;
  m.seconds /= n;
  return m;
}

BenchmarkResult benchmark(RunConfig const &cfg, std::ostream &log)
{
  cfg.validate();
  fs::path const dir(cfg.dataset);
  if (!fs::is_directory(dir)) { fail(ErrorKind::Io, "dataset directory " + dir.string() + " does not exist"); }
  std::vector<std::string> stems;
  for (auto const &entry : fs::directory_iterator(dir)) {
    auto const name = entry.path().filename().string();
    if (entry.is_regular_file() && ends_with(name, ".truth.sct")) { stems.push_back(strip(entry.path().string(), ".truth.sct")); }
  }
  if (stems.empty()) { fail(ErrorKind::EmptyDataset, "no *.truth.sct scenes in " + dir.string()); }
  std::sort(stems.begin(), stems.end());

  std::vector<SceneRow> rows(stems.size());
  auto                  run_scene = [&](std::size_t k) {
    std::string const &stem = stems[k];
    Cube const         truth = read_cube(stem + ".truth.sct");
    fs::path           mask_path = stem + ".masks.sct";
    if (!fs::exists(mask_path)) { mask_path = dir / "masks.sct"; }
    if (!fs::exists(mask_path)) {
      if (cfg.masks.empty()) { fail(ErrorKind::Io, "no masks for scene " + stem); }
      mask_path = cfg.masks;
    }
    Operator const op(load_cube(mask_path.string()));
    Frame          y;
    if (fs::exists(stem + ".meas.sct")) {
      y = read_frame(stem + ".meas.sct");
    } else {
      NoiseSpec noise = cfg.noise;
      noise.seed = derive_seed(cfg.seed, k);
      y = video_forward(cfg.forward == ForwardKind::Video ? truth : shear(truth, geometry_for(cfg, truth.nb())), op.masks(), noise);
    }
    auto const rec = solve(cfg, op, y);
    Cube const est = to_scene(cfg, rec.estimate);
    rows[k] = {fs::path(stem).filename().string(), psnr(est, truth, cfg.peak), ssim(est, truth, cfg.peak), rec.seconds};
  };

  unsigned const workers = std::min<unsigned>(cfg.threads > 0 ? unsigned(cfg.threads) : std::max(1u, std::thread::hardware_concurrency()),
                                               static_cast<unsigned>(stems.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr       error;
  std::mutex               error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < stems.size(); k = next++) {
        try {
          run_scene(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) { error = std::current_exception(); }
        }
      }
    });
  }
  for (auto &t : pool) { t.join(); }
  if (error) { std::rethrow_exception(error); }

  BenchmarkResult r;
  r.rows = std::move(rows);
  r.mean = mean_row(r.rows);
  log << format_table(r);
  if (!cfg.csv.empty()) {
    std::ofstream out(cfg.csv);
    if (!out) { fail(ErrorKind::Io, "cannot write " + cfg.csv); }
    write_csv(out, r);
  }
  return r;
}

std::string format_table(BenchmarkResult const &r)
{
  std::size_t width = std::string("average").size();
  for (auto const &row : r.rows) { width = std::max(width, row.name.size()); }
  std::ostringstream os;
  auto               line = [&](SceneRow const &row) {
    os << std::left << std::setw(static_cast<int>(width)) << row.name << "  " << std::right << std::setw(8) << fmt_db(row.psnr) << "  "
       << std::setw(6) << std::fixed << std::setprecision(4) << row.ssim << "  " << std::setw(9) << std::setprecision(3) << row.seconds
       << '\n';
  };
  os << std::left << std::setw(static_cast<int>(width)) << "scene" << "  " << std::right << std::setw(8) << "psnr_db" << "  "
     << std::setw(6) << "ssim" << "  " << std::setw(9) << "seconds" << '\n';
  for (auto const &row : r.rows) { line(row); }
  line(r.mean);
  return os.str();
}

void write_csv(std::ostream &os, BenchmarkResult const &r)
{
  os << "scene,psnr,ssim,seconds\n" << std::setprecision(10);
  auto line = [&](SceneRow const &row) { os << row.name << ',' << row.psnr << ',' << row.ssim << ',' << row.seconds << '\n'; };
  for (auto const &row : r.rows) { line(row); }
  line(r.mean);
}

bool verify_theory(RunConfig const &cfg, std::ostream &log)
{
  cfg.validate();
  bool ok = true;
  auto verdict = [&](std::string const &name, bool pass) {
    log << name << " = " << (pass ? "pass" : "fail") << '\n';
    ok = ok && pass;
  };

  auto const oracle = standard_oracle_suite(cfg.seed);
  log << "oracle_worst_relative_error = " << oracle.worst() << '\n';
  verdict("oracle_suite", oracle.pass());

  double worst_norm = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    Index const   side = 8 << (t % 4);
    Index const   nb = 2 + t % 7;
    std::uint64_t s = derive_seed(cfg.seed, 1000 + std::uint64_t(t));
    worst_norm = std::max(worst_norm, operator_norm(sample_gaussian_operator(side, side, nb, s), 100, s));
    worst_norm = std::max(worst_norm, operator_norm(sample_binary_operator(side, side, nb, s + 1), 100, s + 1));
  }
  log << "operator_norm_max = " << std::setprecision(17) << worst_norm << std::setprecision(6) << '\n';
  verdict("operator_norm_bound", worst_norm <= 1.0 + 1e-8);

  Index const    xi_nx = 8, xi_ny = 16, xi_b = 4;
  Vector<double> e = gaussian_masks(xi_nx, xi_ny, xi_b, derive_seed(cfg.seed, 1)).vec().normalized();
  Vector<double> ep = gaussian_masks(xi_nx, xi_ny, xi_b, derive_seed(cfg.seed, 2)).vec().normalized();
  auto const     xi = xi_statistics(xi_nx, xi_ny, xi_b, e, ep, cfg.xi_samples, derive_seed(cfg.seed, 3));
  write_report(log, xi);
  bool tails_ok = true;
  for (auto const &t : xi.tails) { tails_ok = tails_ok && t.upper <= t.hoeffding && t.lower <= t.hoeffding; }
  verdict("xi_zero_mean", xi.mean_within(3.0));
  verdict("xi_bounded", xi.bound_violations == 0);
  verdict("xi_hoeffding_tails", tails_ok);

  ContractionSettings cs;
  cs.trials = cfg.trials;
  cs.seed = cfg.seed;
  auto const rep = run_contraction_experiment(cs);
  write_report(log, rep);
  verdict("contraction_converged", rep.converged * 100 >= 95 * cs.trials);
  verdict("contraction_monotone", rep.monotone_fraction() >= 0.95);
  if (!cfg.csv.empty()) {
    std::ofstream out(cfg.csv);
    if (!out) { fail(ErrorKind::Io, "cannot write " + cfg.csv); }
    write_csv(out, rep);
  }
  log << "verdict = " << (ok ? "pass" : "fail") << '\n';
  return ok;
}

Cube make_masks(RunConfig const &cfg, std::ostream &log)
{
  cfg.validate();
  Cube m;
  switch (cfg.mask_kind) {
  case MaskKind::Bernoulli: m = bernoulli_masks(cfg.nx, cfg.ny, cfg.nb, cfg.mask_p, cfg.seed); break;
  case MaskKind::Gaussian: m = gaussian_masks(cfg.nx, cfg.ny, cfg.nb, cfg.seed); break;
  case MaskKind::Crop: m = crop_masks(load_cube(cfg.mother), cfg.crop_x, cfg.crop_y, cfg.nx, cfg.ny); break;
  }
  write_tensor(cfg.output, m);
  log << "masks " << m.dims() << " (" << to_string(cfg.mask_kind) << ", mean " << m.vec().mean() << ") -> " << cfg.output << '\n';
  return m;
}

} // namespace sci::pipeline
