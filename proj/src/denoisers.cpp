#include "sci/denoisers.hpp"
#include "sci/tv.hpp"

#include <sstream>

namespace sci {

std::string_view to_string(DenoiserKind kind)
{
  switch (kind) {
  case DenoiserKind::Identity: return "identity";
  case DenoiserKind::Tv: return "tv";
  case DenoiserKind::Network: return "network";
  case DenoiserKind::Subspace: return "subspace";
  case DenoiserKind::Generative: return "generative";
  }
  return "unknown";
}

namespace {

class IdentityDenoiser final : public Denoiser
{
public:
  DenoiserKind kind() const override { return DenoiserKind::Identity; }
  Cube         denoise(Cube const &x) const override { return x; }
};

class TvDenoiser final : public Denoiser
{
public:
  TvDenoiser(double lambda, int iterations)
    : lambda_{lambda}
    , iterations_{iterations}
  {
    if (!(lambda >= 0.0)) { fail(ErrorKind::InvalidArgument, "lambda_tv must be >= 0"); }
    if (iterations < 1) { fail(ErrorKind::InvalidArgument, "TV iterations must be >= 1"); }
  }

  DenoiserKind kind() const override { return DenoiserKind::Tv; }
  Cube         denoise(Cube const &x) const override { return tv_denoise(x, lambda_, iterations_); }
  std::string  describe() const override
  {
    std::ostringstream s;
    s << "tv(lambda=" << lambda_ << ", iters=" << iterations_ << ")";
    return s.str();
  }

private:
  double lambda_;
  int    iterations_;
};

class SubspaceDenoiser final : public Denoiser
{
public:
  explicit SubspaceDenoiser(Matrix<double> basis)
    : basis_(std::move(basis))
  {
    if (basis_.cols() < 1) { fail(ErrorKind::InvalidArgument, "subspace basis needs at least one column"); }
  }

  DenoiserKind kind() const override { return DenoiserKind::Subspace; }
  Cube         denoise(Cube const &x) const override
  {
    if (x.size() != basis_.rows()) { fail(ErrorKind::ShapeMismatch, "subspace basis does not match cube size"); }
    Vector<double> const coeffs = basis_.transpose() * x.vec();
    return Cube(x.dims(), basis_ * coeffs);
  }
  std::string describe() const override { return "subspace(eta=" + std::to_string(basis_.cols()) + ")"; }

private:
  Matrix<double> basis_;
};

class NetworkDenoiser final : public Denoiser
{
public:
  explicit NetworkDenoiser(NetworkWeights w)
    : weights_(std::move(w))
  {
  }

  DenoiserKind kind() const override { return DenoiserKind::Network; }
  Cube         denoise(Cube const &x) const override { return run_network(weights_, x); }
  std::string  describe() const override
  {
    return "network(stage=" + std::to_string(weights_.stage) + ", layers=" + std::to_string(weights_.layers.size()) + ")";
  }

private:
  NetworkWeights weights_;
};

class GenerativeDenoiser final : public Denoiser
{
public:
  GenerativeDenoiser(GenerativeModel model, DescentSettings settings)
    : model_(std::move(model))
    , settings_{settings}
  {
  }

  DenoiserKind kind() const override { return DenoiserKind::Generative; }
  Cube         denoise(Cube const &x) const override { return generative_project(model_, x, settings_).v; }
  std::string  describe() const override { return "generative(eta=" + std::to_string(model_.latent_dim()) + ")"; }

private:
  GenerativeModel model_;
  DescentSettings settings_;
};

} // namespace

DenoiserStage make_identity() { return std::make_shared<IdentityDenoiser>(); }
DenoiserStage make_tv(double lambda, int iterations) { return std::make_shared<TvDenoiser>(lambda, iterations); }
DenoiserStage make_subspace(Matrix<double> basis) { return std::make_shared<SubspaceDenoiser>(std::move(basis)); }
DenoiserStage make_network(NetworkWeights weights) { return std::make_shared<NetworkDenoiser>(std::move(weights)); }
DenoiserStage make_generative(GenerativeModel model, DescentSettings settings)
{
  return std::make_shared<GenerativeDenoiser>(std::move(model), settings);
}

} // namespace sci
