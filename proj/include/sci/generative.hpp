#pragma once

#include "tensor.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sci {

enum class Activation
{
  Identity,
  Relu,
  Tanh,
};

struct DenseLayer
{
  Matrix<double> weight;
  Vector<double> bias;
  Activation     activation = Activation::Identity;
};

// Decoder g : ℝ^η → ℝ^{nB}, either an orthonormal linear basis or a small
// dense stack. Latents live in the alphabet [−latent_bound, latent_bound]^η.
class GenerativeModel
{
public:
  // Columns of `basis` must be orthonormal (tolerance 1e-8).
  static GenerativeModel orthonormal(Matrix<double> basis, CubeDims dims);
  static GenerativeModel dense(std::vector<DenseLayer> layers, CubeDims dims);

  Index           latent_dim() const { return latent_dim_; }
  Index           output_dim() const { return dims_.size(); }
  CubeDims const &dims() const { return dims_; }
  bool            is_orthonormal() const { return orthonormal_; }
  double          latent_bound() const { return latent_bound_; }

  std::vector<DenseLayer> const &layers() const { return layers_; }

  // Declared Lipschitz constant; exactly 1 for an orthonormal basis.
  std::optional<double> declared_lipschitz() const { return lipschitz_; }

  Vector<double> decode(Vector<double> const &latent) const;

  // ½‖x − g(f)‖² and its gradient with respect to f.
  double half_squared_error(Vector<double> const &x, Vector<double> const &latent, Vector<double> *gradient) const;

  // Returns s·g.
  GenerativeModel scaled(double s) const;

private:
  GenerativeModel() = default;

  std::vector<DenseLayer> layers_;
  CubeDims                dims_;
  Index                   latent_dim_ = 0;
  bool                    orthonormal_ = false;
  double                  latent_bound_ = 1.0;
  double                  output_scale_ = 1.0;
  std::optional<double>   lipschitz_;
};

struct DescentSettings
{
  int           restarts = 8;
  double        step = 1e-2;
  int           steps = 500;
  std::uint64_t seed = 0;
  bool          clamp_to_alphabet = true;
  double        gradient_tolerance = 1e-6;
};

struct LatentProjection
{
  Cube           v;
  Vector<double> latent;
  double         residual = 0.0; // ‖x − g(f)‖₂
  bool           converged = true;
  // ½‖x − g(f)‖² per descent step of the winning restart.
  std::vector<double> history;
};

// v = g(f), f = argmin ‖x − g(f)‖. Closed form fᵀ = Qᵀx for an orthonormal
// basis; otherwise monotone projected gradient descent with backtracking and
// random restarts, keeping the best. `converged` is false when the winning
// restart ends with a projected gradient above tolerance.
LatentProjection generative_project(GenerativeModel const &model, Cube const &x, DescentSettings const &settings = {});

// Max of ‖g(f) − g(f′)‖/‖f − f′‖ over random pairs in the alphabet; a lower
// bound on the true Lipschitz constant.
double lipschitz_estimate(GenerativeModel const &model, int samples, std::uint64_t seed);

} // namespace sci
