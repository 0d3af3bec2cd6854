#include "sci/solvers.hpp"
#include "sci/metrics.hpp"

#include <chrono>
#include <cmath>

namespace sci {

std::string_view to_string(Algorithm a)
{
  switch (a) {
  case Algorithm::GapNet: return "gap_net";
  case Algorithm::AdmmNet: return "admm_net";
  case Algorithm::GapTv: return "gap_tv";
  case Algorithm::PnpGap: return "pnp_gap";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name)
{
  if (name == "gap_net") { return Algorithm::GapNet; }
  if (name == "admm_net") { return Algorithm::AdmmNet; }
  if (name == "gap_tv") { return Algorithm::GapTv; }
  if (name == "pnp_gap") { return Algorithm::PnpGap; }
  fail(ErrorKind::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

void SolverConfig::validate() const
{
  if (stages < 1) { fail(ErrorKind::InvalidArgument, "stages must be >= 1"); }
  switch (algorithm) {
  case Algorithm::GapNet:
  case Algorithm::AdmmNet:
    if (denoisers.size() != static_cast<std::size_t>(stages)) {
      fail(ErrorKind::InvalidArgument, std::string(to_string(algorithm)) + " needs exactly one denoiser per stage");
    }
    break;
  case Algorithm::GapTv:
  case Algorithm::PnpGap:
    if (denoisers.size() != 1) { fail(ErrorKind::InvalidArgument, std::string(to_string(algorithm)) + " needs one shared denoiser"); }
    break;
  }
  for (auto const &d : denoisers) {
    if (!d) { fail(ErrorKind::InvalidArgument, "null denoiser stage"); }
  }
  if (algorithm == Algorithm::AdmmNet && !(gamma > 0.0)) { fail(ErrorKind::NonPositiveGamma, "admm_net requires gamma > 0"); }
  if (!(projection_scale > 0.0)) { fail(ErrorKind::InvalidArgument, "projection_scale must be positive"); }
}

namespace {

struct TraceOptions
{
  std::optional<Cube> const *truth = nullptr;
  double                     peak = 1.0;
  bool                       record_estimates = false;
};

class Recorder
{
public:
  Recorder(Operator const &op, Frame const &y, TraceOptions opts)
    : op_{op}
    , y_{y}
    , opts_{opts}
  {
  }

  StageRecord &add(Cube const &v)
  {
    StageRecord rec;
    rec.residual = (y_ - apply_H(op_, v)).norm();
    if (opts_.truth && opts_.truth->has_value()) {
      auto const &truth = **opts_.truth;
      require_same_dims(truth.dims(), v.dims(), "ground truth vs estimate");
      rec.error = (v.vec() - truth.vec()).norm();
      rec.psnr = psnr(v, truth, opts_.peak);
    }
    if (opts_.record_estimates) { rec.estimate = v; }
    trace_.stages.push_back(std::move(rec));
    return trace_.stages.back();
  }

  ReconTrace take() { return std::move(trace_); }

private:
  Operator const &op_;
  Frame const    &y_;
  TraceOptions    opts_;
  ReconTrace      trace_;
};

double residual_on_exposed(Operator const &op, Frame const &target, Cube const &x)
{
  Vector<double> r = vectorize(target) - vectorize(apply_H(op, x));
  r = op.floored_mask().select(Vector<double>::Zero(r.size()), r);
  return r.norm();
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Reconstruction run_gap(Operator const     &op,
                       Frame const        &y,
                       int                 stages,
                       StageProvider const &provider,
                       double              scale,
                       bool                accelerate,
                       TraceOptions        opts)
{
  auto const t0 = Clock::now();
  Recorder   rec(op, y, opts);
  Cube       v = apply_Ht(op, y);
  rec.add(v);
  Frame target = y;
  for (int k = 1; k <= stages; ++k) {
    Cube const   x = project_to_manifold(op, v, target, scale);
    double const proj_res = residual_on_exposed(op, target, x);
    v = denoise(provider(k), x);
    if (accelerate) { target += y - apply_H(op, v); }
    rec.add(v).projection_residual = proj_res;
  }
  return {std::move(v), rec.take(), seconds_since(t0)};
}

TraceOptions trace_options(SolverConfig const &cfg) { return {&cfg.truth, cfg.peak, cfg.record_estimates}; }

} // namespace

Reconstruction gap_net_reconstruct(Operator const &op, Frame const &y, SolverConfig const &cfg)
{
  cfg.validate();
  if (cfg.denoisers.size() != static_cast<std::size_t>(cfg.stages)) {
    fail(ErrorKind::InvalidArgument, "gap_net needs exactly one denoiser per stage");
  }
  StageProvider provider = [&](int k) -> DenoiserStage const & { return cfg.denoisers[static_cast<std::size_t>(k - 1)]; };
  return run_gap(op, y, cfg.stages, provider, cfg.projection_scale, cfg.accelerate, trace_options(cfg));
}

Reconstruction pnp_gap_reconstruct(Operator const &op, Frame const &y, SolverConfig const &cfg)
{
  cfg.validate();
  if (cfg.denoisers.size() != 1) { fail(ErrorKind::InvalidArgument, "pnp_gap needs one shared denoiser"); }
  StageProvider provider = [&](int) -> DenoiserStage const & { return cfg.denoisers.front(); };
  return run_gap(op, y, cfg.stages, provider, cfg.projection_scale, cfg.accelerate, trace_options(cfg));
}

Reconstruction admm_net_reconstruct(Operator const &op, Frame const &y, SolverConfig const &cfg)
{
  cfg.validate();
  if (cfg.denoisers.size() != static_cast<std::size_t>(cfg.stages)) {
    fail(ErrorKind::InvalidArgument, "admm_net needs exactly one denoiser per stage");
  }
  auto const t0 = Clock::now();
  Recorder   rec(op, y, trace_options(cfg));
  Cube       v = apply_Ht(op, y);
  Cube       u(op.dims());
  rec.add(v);
  for (int k = 1; k <= cfg.stages; ++k) {
    Cube const x = admm_x_update(op, y, v, u, cfg.gamma);
    v = denoise(cfg.denoisers[static_cast<std::size_t>(k - 1)], Cube(x.dims(), x.vec() - u.vec()));
    u.vec() -= x.vec() - v.vec();
    rec.add(v).primal_residual = (x.vec() - v.vec()).norm();
  }
  return {std::move(v), rec.take(), seconds_since(t0)};
}

Reconstruction gap_tv_reconstruct(Operator const &op, Frame const &y, GapTvOptions const &options)
{
  if (options.iterations < 1) { fail(ErrorKind::InvalidArgument, "gap_tv iterations must be >= 1"); }
  if (!(options.lambda >= 0.0)) { fail(ErrorKind::InvalidArgument, "lambda_tv must be >= 0"); }
  if (!(options.decay > 0.0 && options.decay <= 1.0)) { fail(ErrorKind::InvalidArgument, "lambda decay must be in (0, 1]"); }
  std::vector<DenoiserStage> stages;
  stages.reserve(static_cast<std::size_t>(options.iterations));
  for (int k = 0; k < options.iterations; ++k) {
    double const lambda = options.lambda * std::pow(options.decay, k);
    stages.push_back(lambda == 0.0 ? make_identity() : make_tv(lambda, options.inner_iterations));
  }
  StageProvider provider = [&](int k) -> DenoiserStage const & { return stages[static_cast<std::size_t>(k - 1)]; };
  TraceOptions  opts{&options.truth, options.peak, options.record_estimates};
  return run_gap(op, y, options.iterations, provider, 1.0, options.accelerate, opts);
}

Reconstruction gap_tv_reconstruct(Operator const &op, Frame const &y, int iterations, double lambda)
{
  GapTvOptions options;
  options.iterations = iterations;
  options.lambda = lambda;
  return gap_tv_reconstruct(op, y, options);
}

Reconstruction reconstruct(Operator const &op, Frame const &y, SolverConfig const &cfg)
{
  switch (cfg.algorithm) {
  case Algorithm::GapNet: return gap_net_reconstruct(op, y, cfg);
  case Algorithm::AdmmNet: return admm_net_reconstruct(op, y, cfg);
  case Algorithm::GapTv:
  case Algorithm::PnpGap: return pnp_gap_reconstruct(op, y, cfg);
  }
  fail(ErrorKind::InvalidArgument, "unknown algorithm");
}

} // namespace sci
