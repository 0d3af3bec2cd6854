#pragma once

#include "sci_operator.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sci {

// Deterministic per-trial seed from a root seed.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

// Masks with i.i.d. N(0,1) entries.
SciOperator<double> sample_gaussian_operator(Index nx, Index ny, Index nb, std::uint64_t seed);
// Masks with i.i.d. Bernoulli(p) entries.
SciOperator<double> sample_binary_operator(Index nx, Index ny, Index nb, std::uint64_t seed, double p = 0.5);

// Random nB × η matrix with orthonormal columns.
Matrix<double> random_orthonormal_basis(Index rows, Index cols, std::uint64_t seed);

struct StageParams
{
  double eta = 1.0;   // latent dimension
  double L = 1.0;     // Lipschitz constant of g_k
  double delta = 0.0; // covering distortion
};

struct BoundParams
{
  Index                    n = 0; // pixels per frame
  Index                    B = 1;
  double                   zeta = 0.5;
  double                   lambda = 0.1;
  double                   rho = 2.0;
  std::vector<StageParams> stages;

  double nb() const { return static_cast<double>(n) * static_cast<double>(B); }
};

// L δ^ζ √(η/nB)
double gamma_covering(double L, double delta, double zeta, double eta, double nb);
// L 2^{-bits} √η / (δ √nB)
double gamma_quantized(double L, int bits, double eta, double delta, double nb);
// ⌈(1 − ζ) log₂(1/δ)⌉
int quantization_bits(double delta, double zeta);

double gamma_k(BoundParams const &p, std::size_t k);

// 2(1 + 2B)(γ(1 + 1/(1 − γ)))^½, for 0 ≤ γ < 1.
double alpha_k(double gamma, Index B);

// Σ_k exp(−2λ²nδ⁴(1 − γ)⁴/(4B²ρ⁴) + 2 ln2((1 − ζ)log₂(1/δ) + 1)η), clamped
// to [0, 1], summed over every stage in `p`.
double failure_probability(BoundParams const &p);

// Uniform mid-rise quantizer with 2^bits cells on [−1, 1].
Vector<double> quantize_latent(Vector<double> const &f, int bits);

struct XiTail
{
  double lambda = 0.0;
  double upper = 0.0; // P(ΣXᵢ ≥ λ)
  double lower = 0.0; // P(ΣXᵢ ≤ −λ)
  double hoeffding = 0.0;
};

struct XiReport
{
  int                 samples = 0;
  double              mean = 0.0;
  double              standard_error = 0.0;
  double              max_abs = 0.0;
  long                bound_checks = 0;
  long                bound_violations = 0;
  double              max_bound_ratio = 0.0; // max |Xᵢ − Σee′| / bound
  std::vector<XiTail> tails;

  bool mean_within(double n_se) const;
};

// Xᵢ = Σ_b e_bi e′_bi − (B/Rᵢ)(Σ_b D_bi e_bi)(Σ_b D_bi e′_bi) over fresh
// Gaussian operators. e and e′ are cube-ordered (block b = channel b) and
// must have unit norm.
XiReport xi_statistics(Index                      nx,
                       Index                      ny,
                       Index                      nb,
                       Vector<double> const      &e,
                       Vector<double> const      &e_prime,
                       int                        samples,
                       std::uint64_t              seed,
                       std::vector<double> const &lambdas = {0.1, 0.5, 1.0});

double hoeffding_bound(Index nb, Vector<double> const &e, Vector<double> const &e_prime, double lambda);

struct ContractionSettings
{
  Index         nx = 16;
  Index         ny = 16;
  Index         B = 4;
  Index         eta = 5;
  int           stages = 30;
  int           trials = 100;
  double        zeta = 0.9;
  double        lambda = 0.1;
  double        delta = 1e-3; // surrogate for the exact-subspace δ = 0
  double        rho = 2.0;
  double        tolerance = 1e-6;
  // Errors closer than this (relative to ‖x*‖) count as equal.
  double        roundoff = 1e-12;
  std::uint64_t seed = 2020;
};

struct StageSample
{
  int    trial = 0;
  int    stage = 0;
  double error = 0.0;        // ‖v⁽ᵏ⁾ − x*‖
  double tilde_error = 0.0;  // ‖v⁽ᵏ⁾ − ṽ_k‖
  double ratio = 0.0;        // error / previous error (0 for stage 0)
  double bound = 0.0;        // right-hand side of the stage bound, normalized
  bool   checked = false;    // preconditions held
  bool   violated = false;
};

struct ContractionReport
{
  ContractionSettings settings;
  double              gamma = 0.0;
  double              alpha = 0.0;
  double              failure_probability = 0.0;
  int                 converged = 0;
  long                transitions = 0;
  long                monotone = 0;
  long                ratio_samples = 0;
  long                ratio_below_one = 0;
  long                bound_checks = 0;
  long                bound_violations = 0;
  double              max_ratio = 0.0; // over stages k >= 2
  double              first_stage_max_ratio = 0.0;
  double              median_ratio = 0.0;
  double              max_final_relative_error = 0.0;
  double              seconds = 0.0;
  std::vector<StageSample> samples;

  double monotone_fraction() const { return transitions ? double(monotone) / double(transitions) : 1.0; }
  double below_one_fraction() const { return ratio_samples ? double(ratio_below_one) / double(ratio_samples) : 1.0; }
  double violation_fraction() const { return bound_checks ? double(bound_violations) / double(bound_checks) : 0.0; }
};

// Trial `trial` of the experiment: Gaussian masks, an orthonormal basis and
// x* = Qf with f uniform on [−1, 1]^η, noiseless y = Hx*.
struct ContractionInstance
{
  SciOperator<double> op;
  Matrix<double>      basis;
  Cube                truth;
  Frame               y;
};
ContractionInstance contraction_instance(ContractionSettings const &settings, int trial);

// GAP-net with oracle subspace denoisers (orthonormal linear decoders over a
// shared η-dim subspace) on Gaussian masks with the scale-B projection.
ContractionReport run_contraction_experiment(ContractionSettings const &settings);

void write_report(std::ostream &os, ContractionReport const &r);
void write_csv(std::ostream &os, ContractionReport const &r);
void write_report(std::ostream &os, XiReport const &r);

} // namespace sci
