#pragma once

#include "generative.hpp"
#include "network.hpp"
#include "tensor.hpp"

#include <memory>
#include <string>

namespace sci {

enum class DenoiserKind
{
  Identity,
  Tv,
  Network,
  Subspace,
  Generative,
};

std::string_view to_string(DenoiserKind kind);

// One stage denoiser D_k. Implementations are immutable after construction
// and denoise() is pure, so a stage can be shared across threads.
class Denoiser
{
public:
  virtual ~Denoiser() = default;

  virtual DenoiserKind kind() const = 0;
  virtual Cube         denoise(Cube const &x) const = 0;
  virtual std::string  describe() const { return std::string(to_string(kind())); }
};

using DenoiserStage = std::shared_ptr<Denoiser const>;

DenoiserStage make_identity();
DenoiserStage make_tv(double lambda, int iterations);
// Orthogonal projector Q Qᵀ onto the span of orthonormal columns of `basis`.
DenoiserStage make_subspace(Matrix<double> basis);
DenoiserStage make_network(NetworkWeights weights);
DenoiserStage make_generative(GenerativeModel model, DescentSettings settings = {});

inline Cube denoise(DenoiserStage const &stage, Cube const &x) { return stage->denoise(x); }

} // namespace sci
