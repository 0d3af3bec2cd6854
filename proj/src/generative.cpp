#include "sci/generative.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace sci {

namespace {

double activate(Activation a, double z)
{
  switch (a) {
  case Activation::Identity: return z;
  case Activation::Relu: return z > 0.0 ? z : 0.0;
  case Activation::Tanh: return std::tanh(z);
  }
  return z;
}

double activate_derivative(Activation a, double z)
{
  switch (a) {
  case Activation::Identity: return 1.0;
  case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
  case Activation::Tanh: {
    double const t = std::tanh(z);
    return 1.0 - t * t;
  }
  }
  return 1.0;
}

Vector<double> clamp(Vector<double> f, double bound) { return f.cwiseMax(-bound).cwiseMin(bound); }

} // namespace

GenerativeModel GenerativeModel::orthonormal(Matrix<double> basis, CubeDims dims)
{
  if (basis.rows() != dims.size()) { fail(ErrorKind::ShapeMismatch, "basis rows differ from cube size"); }
  if (basis.cols() < 1) { fail(ErrorKind::InvalidArgument, "latent dimension must be >= 1"); }
  Matrix<double> const gram = basis.transpose() * basis;
  if ((gram - Matrix<double>::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff() > 1e-8) {
    fail(ErrorKind::InvalidArgument, "basis columns are not orthonormal");
  }
  GenerativeModel m;
  m.latent_dim_ = basis.cols();
  m.layers_.push_back({std::move(basis), Vector<double>::Zero(dims.size()), Activation::Identity});
  m.dims_ = dims;
  m.orthonormal_ = true;
  m.lipschitz_ = 1.0;
  return m;
}

GenerativeModel GenerativeModel::dense(std::vector<DenseLayer> layers, CubeDims dims)
{
  if (layers.empty()) { fail(ErrorKind::InvalidArgument, "decoder needs at least one layer"); }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    auto const &l = layers[k];
    if (l.bias.size() != l.weight.rows()) { fail(ErrorKind::ShapeMismatch, "decoder bias length differs from layer width"); }
    if (k > 0 && l.weight.cols() != layers[k - 1].weight.rows()) { fail(ErrorKind::ShapeMismatch, "decoder layer chain is inconsistent"); }
  }
  if (layers.back().weight.rows() != dims.size()) { fail(ErrorKind::ShapeMismatch, "decoder output differs from cube size"); }
  if (layers.front().weight.cols() < 1) { fail(ErrorKind::InvalidArgument, "latent dimension must be >= 1"); }
  GenerativeModel m;
  m.latent_dim_ = layers.front().weight.cols();
  m.layers_ = std::move(layers);
  m.dims_ = dims;
  return m;
}

Vector<double> GenerativeModel::decode(Vector<double> const &latent) const
{
  if (latent.size() != latent_dim_) { fail(ErrorKind::ShapeMismatch, "latent length differs from decoder input"); }
  Vector<double> h = latent;
  for (auto const &l : layers_) {
    h = l.weight * h + l.bias;
    if (l.activation != Activation::Identity) { h = h.unaryExpr([&](double z) { return activate(l.activation, z); }); }
  }
  return output_scale_ * h;
}

double GenerativeModel::half_squared_error(Vector<double> const &x, Vector<double> const &latent, Vector<double> *gradient) const
{
  if (x.size() != output_dim()) { fail(ErrorKind::ShapeMismatch, "signal length differs from decoder output"); }
  std::vector<Vector<double>> pre;
  pre.reserve(layers_.size());
  Vector<double> h = latent;
  for (auto const &l : layers_) {
    pre.push_back(l.weight * h + l.bias);
    h = pre.back().unaryExpr([&](double z) { return activate(l.activation, z); });
  }
  Vector<double> const r = output_scale_ * h - x;
  if (gradient) {
    Vector<double> delta = output_scale_ * r;
    for (std::size_t k = layers_.size(); k-- > 0;) {
      auto const &l = layers_[k];
      delta = delta.cwiseProduct(pre[k].unaryExpr([&](double z) { return activate_derivative(l.activation, z); }));
      delta = l.weight.transpose() * delta;
    }
    *gradient = delta;
  }
  return 0.5 * r.squaredNorm();
}

GenerativeModel GenerativeModel::scaled(double s) const
{
  GenerativeModel m = *this;
  m.output_scale_ *= s;
  m.orthonormal_ = orthonormal_ && s == 1.0;
  if (lipschitz_) { m.lipschitz_ = std::abs(s) * *lipschitz_; }
  return m;
}

LatentProjection generative_project(GenerativeModel const &model, Cube const &x, DescentSettings const &settings)
{
  if (x.size() != model.output_dim()) { fail(ErrorKind::ShapeMismatch, "generative_project: cube size differs from decoder output"); }
  LatentProjection out;
  if (model.is_orthonormal()) {
    auto const &q = model.layers().front().weight;
    out.latent = q.transpose() * x.vec();
    out.v = Cube(model.dims(), q * out.latent);
    out.residual = (x.vec() - out.v.vec()).norm();
    out.history = {0.5 * out.residual * out.residual};
    return out;
  }

  if (settings.restarts < 1 || settings.steps < 1 || !(settings.step > 0.0)) {
    fail(ErrorKind::InvalidArgument, "descent settings must have restarts, steps and step > 0");
  }
  double const                           bound = model.latent_bound();
  std::mt19937_64                        rng(settings.seed);
  std::uniform_real_distribution<double> unif(-bound, bound);
  Index const                            eta = model.latent_dim();

  double best = std::numeric_limits<double>::infinity();
  auto   project = [&](Vector<double> f) { return settings.clamp_to_alphabet ? clamp(std::move(f), bound) : f; };

  for (int r = 0; r < settings.restarts; ++r) {
    Vector<double> f(eta);
    if (r == 0) {
      f.setZero();
    } else {
      for (Index k = 0; k < eta; ++k) { f[k] = unif(rng); }
    }
    Vector<double>      grad;
    double              obj = model.half_squared_error(x.vec(), f, &grad);
    double              step = settings.step;
    std::vector<double> history{obj};
    double              pg_norm = std::numeric_limits<double>::infinity();
    for (int s = 0; s < settings.steps; ++s) {
      pg_norm = (f - project(f - grad)).norm();
      if (pg_norm <= settings.gradient_tolerance) { break; }
      bool accepted = false;
      for (int tries = 0; tries < 40 && !accepted; ++tries) {
        Vector<double> trial = project(f - step * grad);
        Vector<double> trial_grad;
        double const   trial_obj = model.half_squared_error(x.vec(), trial, &trial_grad);
        if (trial_obj <= obj) {
          f = std::move(trial);
          grad = std::move(trial_grad);
          obj = trial_obj;
          step *= 1.25;
          accepted = true;
        } else {
          step *= 0.5;
        }
      }
      history.push_back(obj);
      if (!accepted) { break; }
    }
    pg_norm = (f - project(f - grad)).norm();
    if (obj < best) {
      best = obj;
      out.latent = f;
      out.history = std::move(history);
      out.converged = pg_norm <= settings.gradient_tolerance;
    }
  }
  out.v = Cube(model.dims(), model.decode(out.latent));
  out.residual = (x.vec() - out.v.vec()).norm();
  return out;
}

double lipschitz_estimate(GenerativeModel const &model, int samples, std::uint64_t seed)
{
  if (samples < 2) { fail(ErrorKind::InvalidArgument, "lipschitz_estimate needs at least 2 samples"); }
  std::mt19937_64                        rng(seed);
  double const                           bound = model.latent_bound();
  std::uniform_real_distribution<double> unif(-bound, bound);
  Index const                            eta = model.latent_dim();
  auto                                   draw = [&] {
    Vector<double> f(eta);
    for (Index k = 0; k < eta; ++k) { f[k] = unif(rng); }
    return f;
  };
  double estimate = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector<double> const a = draw();
    Vector<double> const b = draw();
    double const         d = (a - b).norm();
    if (d == 0.0) { continue; }
    estimate = std::max(estimate, (model.decode(a) - model.decode(b)).norm() / d);
  }
  return estimate;
}

} // namespace sci
