#include "sci/theory.hpp"
#include "sci/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace sci {

std::uint64_t splitmix64(std::uint64_t x)
{
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) { return splitmix64(root ^ splitmix64(stream)); }

SciOperator<double> sample_gaussian_operator(Index nx, Index ny, Index nb, std::uint64_t seed)
{
  std::mt19937_64                  rng(seed);
  std::normal_distribution<double> gauss;
  Cube                             masks(nx, ny, nb);
  for (Index k = 0; k < masks.size(); ++k) { masks.vec()[k] = gauss(rng); }
  return SciOperator<double>(std::move(masks));
}

SciOperator<double> sample_binary_operator(Index nx, Index ny, Index nb, std::uint64_t seed, double p)
{
  std::mt19937_64             rng(seed);
  std::bernoulli_distribution coin(p);
  Cube                        masks(nx, ny, nb);
  for (Index k = 0; k < masks.size(); ++k) { masks.vec()[k] = coin(rng) ? 1.0 : 0.0; }
  return SciOperator<double>(std::move(masks));
}

Matrix<double> random_orthonormal_basis(Index rows, Index cols, std::uint64_t seed)
{
  if (cols < 1 || cols > rows) { fail(ErrorKind::InvalidArgument, "basis needs 1 <= cols <= rows"); }
  std::mt19937_64                  rng(seed);
  std::normal_distribution<double> gauss;
  Matrix<double>                   g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) { g(i, j) = gauss(rng); }
  }
  Eigen::HouseholderQR<Matrix<double>> qr(g);
  return qr.householderQ() * Matrix<double>::Identity(rows, cols);
}

double gamma_covering(double L, double delta, double zeta, double eta, double nb)
{
  return L * std::pow(delta, zeta) * std::sqrt(eta / nb);
}

double gamma_quantized(double L, int bits, double eta, double delta, double nb)
{
  if (!(delta > 0.0)) { fail(ErrorKind::InvalidArgument, "gamma_quantized needs delta > 0"); }
  return L * std::ldexp(1.0, -bits) * std::sqrt(eta) / (delta * std::sqrt(nb));
}

int quantization_bits(double delta, double zeta)
{
  if (!(delta > 0.0)) { fail(ErrorKind::InvalidArgument, "quantization_bits needs delta > 0"); }
  return static_cast<int>(std::ceil((1.0 - zeta) * std::log2(1.0 / delta)));
}

double gamma_k(BoundParams const &p, std::size_t k)
{
  auto const &s = p.stages.at(k);
  return gamma_covering(s.L, s.delta, p.zeta, s.eta, p.nb());
}

double alpha_k(double gamma, Index B)
{
  if (!(gamma >= 0.0 && gamma < 1.0)) { fail(ErrorKind::GammaOutOfRange, "alpha_k needs 0 <= gamma < 1, got " + std::to_string(gamma)); }
  return 2.0 * (1.0 + 2.0 * double(B)) * std::sqrt(gamma * (1.0 + 1.0 / (1.0 - gamma)));
}

double failure_probability(BoundParams const &p)
{
  double sum = 0.0;
  for (std::size_t k = 0; k < p.stages.size(); ++k) {
    auto const  &s = p.stages[k];
    double const g = gamma_k(p, k);
    if (!(g < 1.0)) { fail(ErrorKind::GammaOutOfRange, "stage " + std::to_string(k) + " has gamma >= 1"); }
    if (!(s.delta > 0.0)) { return 1.0; }
    double const d4 = std::pow(s.delta, 4);
    double const concentration = 2.0 * p.lambda * p.lambda * double(p.n) * d4 * std::pow(1.0 - g, 4) /
                                 (4.0 * double(p.B * p.B) * std::pow(p.rho, 4));
    double const entropy = 2.0 * std::numbers::ln2 * ((1.0 - p.zeta) * std::log2(1.0 / s.delta) + 1.0) * s.eta;
    sum += std::exp(entropy - concentration);
    if (sum >= 1.0) { return 1.0; }
  }
  return std::clamp(sum, 0.0, 1.0);
}

Vector<double> quantize_latent(Vector<double> const &f, int bits)
{
  if (bits < 1 || bits > 52) { fail(ErrorKind::InvalidArgument, "bits must be in [1, 52]"); }
  double const width = std::ldexp(2.0, -bits);
  double const cells = std::ldexp(1.0, bits);
  Vector<double> q(f.size());
  for (Index k = 0; k < f.size(); ++k) {
    double const v = f[k];
    if (!(std::abs(v) <= 1.0)) { fail(ErrorKind::OutOfAlphabet, "latent entry " + std::to_string(k) + " outside [-1, 1]"); }
    double const cell = std::min(std::floor((v + 1.0) / width), cells - 1.0);
    q[k] = -1.0 + (cell + 0.5) * width;
  }
  return q;
}

bool XiReport::mean_within(double n_se) const
{
  if (standard_error == 0.0) { return std::abs(mean) <= 1e-12; }
  return std::abs(mean) <= n_se * standard_error;
}

double hoeffding_bound(Index nb, Vector<double> const &e, Vector<double> const &e_prime, double lambda)
{
  Index const    n = e.size() / nb;
  Vector<double> a = Vector<double>::Zero(n), c = Vector<double>::Zero(n);
  for (Index b = 0; b < nb; ++b) {
    a += e.segment(b * n, n).cwiseAbs2();
    c += e_prime.segment(b * n, n).cwiseAbs2();
  }
  double const denom = 4.0 * double(nb * nb) * a.dot(c);
  if (denom == 0.0) { return 0.0; }
  return std::exp(-2.0 * lambda * lambda / denom);
}

XiReport xi_statistics(Index                      nx,
                       Index                      ny,
                       Index                      nb,
                       Vector<double> const      &e,
                       Vector<double> const      &e_prime,
                       int                        samples,
                       std::uint64_t              seed,
                       std::vector<double> const &lambdas)
{
  Index const n = nx * ny;
  if (e.size() != n * nb || e_prime.size() != n * nb) { fail(ErrorKind::ShapeMismatch, "xi_statistics: vectors must have length nB"); }
  if (std::abs(e.norm() - 1.0) > 1e-9 || std::abs(e_prime.norm() - 1.0) > 1e-9) {
    fail(ErrorKind::InvalidArgument, "xi_statistics: e and e' must be unit vectors");
  }
  if (samples < 2) { fail(ErrorKind::InvalidArgument, "xi_statistics needs at least 2 samples"); }

  // Per-pixel constants: Σ_b e e′ and the bound B‖e_i‖‖e′_i‖.
  Vector<double> cross = Vector<double>::Zero(n), ea = Vector<double>::Zero(n), ec = Vector<double>::Zero(n);
  for (Index b = 0; b < nb; ++b) {
    cross += e.segment(b * n, n).cwiseProduct(e_prime.segment(b * n, n));
    ea += e.segment(b * n, n).cwiseAbs2();
    ec += e_prime.segment(b * n, n).cwiseAbs2();
  }
  Vector<double> const bound = double(nb) * ea.cwiseSqrt().cwiseProduct(ec.cwiseSqrt());

  XiReport out;
  out.samples = samples;
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(samples));
  Matrix<double> d(nb, n);
  for (int s = 0; s < samples; ++s) {
    std::mt19937_64                  rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    std::normal_distribution<double> gauss;
    for (Index b = 0; b < nb; ++b) {
      for (Index i = 0; i < n; ++i) { d(b, i) = gauss(rng); }
    }
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      double r = 0.0, de = 0.0, dep = 0.0;
      for (Index b = 0; b < nb; ++b) {
        double const v = d(b, i);
        r += v * v;
        de += v * e[b * n + i];
        dep += v * e_prime[b * n + i];
      }
      double const x = cross[i] - double(nb) / r * de * dep;
      double const dev = std::abs(x - cross[i]);
      ++out.bound_checks;
      if (dev > bound[i] * (1.0 + 1e-12) + 1e-300) { ++out.bound_violations; }
      if (bound[i] > 0.0) { out.max_bound_ratio = std::max(out.max_bound_ratio, dev / bound[i]); }
      total += x;
    }
    sums.push_back(total);
  }

  double mean = 0.0;
  for (double v : sums) { mean += v; }
  mean /= samples;
  double var = 0.0;
  for (double v : sums) {
    var += (v - mean) * (v - mean);
    out.max_abs = std::max(out.max_abs, std::abs(v));
  }
  var /= (samples - 1);
  out.mean = mean;
  out.standard_error = std::sqrt(var / samples);

  for (double lambda : lambdas) {
    XiTail t;
    t.lambda = lambda;
    long up = 0, lo = 0;
    for (double v : sums) {
      if (v >= lambda) { ++up; }
      if (v <= -lambda) { ++lo; }
    }
    t.upper = double(up) / samples;
    t.lower = double(lo) / samples;
    t.hoeffding = hoeffding_bound(nb, e, e_prime, lambda);
    out.tails.push_back(t);
  }
  return out;
}

ContractionInstance contraction_instance(ContractionSettings const &s, int trial)
{
  std::uint64_t const ts = derive_seed(s.seed, static_cast<std::uint64_t>(trial));
  auto                op = sample_gaussian_operator(s.nx, s.ny, s.B, derive_seed(ts, 0));
  Matrix<double>      q = random_orthonormal_basis(s.nx * s.ny * s.B, s.eta, derive_seed(ts, 1));

  std::mt19937_64                        rng(derive_seed(ts, 2));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector<double>                         f(s.eta);
  for (Index k = 0; k < s.eta; ++k) { f[k] = unif(rng); }
  Cube  truth(op.dims(), q * f);
  Frame y = apply_H(op, truth);
  return {std::move(op), std::move(q), std::move(truth), std::move(y)};
}

ContractionReport run_contraction_experiment(ContractionSettings const &s)
{
  if (s.stages < 1 || s.trials < 1) { fail(ErrorKind::InvalidArgument, "contraction experiment needs stages, trials >= 1"); }
  Index const  n = s.nx * s.ny;
  double const nb = double(n * s.B);
  auto const   t0 = std::chrono::steady_clock::now();

  ContractionReport rep;
  rep.settings = s;
  rep.gamma = gamma_covering(1.0, s.delta, s.zeta, double(s.eta), nb);
  rep.alpha = alpha_k(rep.gamma, s.B);
  if (!(s.lambda > 0.0 && s.lambda < 0.5 - rep.alpha)) {
    fail(ErrorKind::InvalidArgument, "lambda must lie in (0, 0.5 - alpha) = (0, " + std::to_string(0.5 - rep.alpha) + ")");
  }
  BoundParams tp;
  tp.n = n;
  tp.B = s.B;
  tp.zeta = s.zeta;
  tp.lambda = s.lambda;
  tp.rho = s.rho;
  tp.stages.assign(static_cast<std::size_t>(std::max(1, s.stages - 1)), StageParams{double(s.eta), 1.0, s.delta});
  rep.failure_probability = failure_probability(tp);

  double const sqrt_nb = std::sqrt(nb);
  double const factor = s.lambda + rep.alpha;
  std::vector<double> ratios;

  for (int t = 0; t < s.trials; ++t) {
    auto                 inst = contraction_instance(s, t);
    auto const          &op = inst.op;
    auto const          &truth = inst.truth;
    Matrix<double>       q = std::move(inst.basis);
    Vector<double> const tilde = q * (q.transpose() * truth.vec());
    double const         truth_norm = truth.vec().norm();

    SolverConfig cfg;
    cfg.algorithm = Algorithm::GapNet;
    cfg.stages = s.stages;
    cfg.denoisers.assign(static_cast<std::size_t>(s.stages), make_subspace(std::move(q)));
    cfg.projection_scale = double(s.B);
    cfg.record_estimates = true;
    cfg.truth = truth;
    auto const rec = gap_net_reconstruct(op, inst.y, cfg);

    auto const &st = rec.trace.stages;
    double      prev_tilde = 0.0;
    for (std::size_t k = 0; k < st.size(); ++k) {
      StageSample smp;
      smp.trial = t;
      smp.stage = static_cast<int>(k);
      smp.error = *st[k].error;
      smp.tilde_error = (st[k].estimate->vec() - tilde).norm();
      if (k > 0) {
        double const prev = *st[k - 1].error;
        smp.ratio = prev > 0.0 ? smp.error / prev : 0.0;
        if (k == 1) { rep.first_stage_max_ratio = std::max(rep.first_stage_max_ratio, smp.ratio); }
        if (k >= 2 && prev > s.tolerance * truth_norm) {
          ratios.push_back(smp.ratio);
          ++rep.ratio_samples;
          if (smp.ratio < 1.0) { ++rep.ratio_below_one; }
        }
        if (k >= 3) {
          ++rep.transitions;
          if (smp.error <= prev + s.roundoff * truth_norm) { ++rep.monotone; }
        }
        smp.bound = 2.0 * factor / sqrt_nb * prev_tilde + factor * 2.0 * s.delta + 2.0 * double(s.B) * s.delta;
        double const prev_to_tilde = (st[k - 1].estimate->vec() - tilde).norm() / sqrt_nb;
        // v⁽⁰⁾ = Hᵀy is not a decoder output, so the bound starts at stage 2.
        smp.checked = k >= 2 && smp.tilde_error / sqrt_nb >= s.delta && prev_to_tilde >= s.delta;
        if (smp.checked) {
          ++rep.bound_checks;
          smp.violated = smp.tilde_error / sqrt_nb > smp.bound * (1.0 + 1e-12);
          if (smp.violated) { ++rep.bound_violations; }
        }
      }
      prev_tilde = smp.tilde_error;
      rep.samples.push_back(smp);
    }
    double const final_rel = *st.back().error / truth_norm;
    rep.max_final_relative_error = std::max(rep.max_final_relative_error, final_rel);
    if (final_rel <= s.tolerance) { ++rep.converged; }
  }

  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    rep.max_ratio = ratios.back();
    rep.median_ratio = ratios[ratios.size() / 2];
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

void write_report(std::ostream &os, ContractionReport const &r)
{
  auto const &s = r.settings;
  os << "n=" << s.nx * s.ny << '\n'
     << "B=" << s.B << '\n'
     << "eta=" << s.eta << '\n'
     << "stages=" << s.stages << '\n'
     << "trials=" << s.trials << '\n'
     << "zeta=" << s.zeta << '\n'
     << "lambda=" << s.lambda << '\n'
     << "delta=" << s.delta << '\n'
     << "seed=" << s.seed << '\n'
     << "gamma=" << r.gamma << '\n'
     << "alpha=" << r.alpha << '\n'
     << "contraction_factor=" << 2.0 * (s.lambda + r.alpha) << '\n'
     << "failure_probability=" << r.failure_probability << '\n'
     << "converged=" << r.converged << '\n'
     << "max_final_relative_error=" << r.max_final_relative_error << '\n'
     << "monotone_fraction=" << r.monotone_fraction() << '\n'
     << "ratio_below_one_fraction=" << r.below_one_fraction() << '\n'
     << "median_ratio=" << r.median_ratio << '\n'
     << "max_ratio=" << r.max_ratio << '\n'
     << "first_stage_max_ratio=" << r.first_stage_max_ratio << '\n'
     << "bound_checks=" << r.bound_checks << '\n'
     << "bound_violations=" << r.bound_violations << '\n'
     << "violation_fraction=" << r.violation_fraction() << '\n'
     << "seconds=" << r.seconds << '\n';
}

void write_csv(std::ostream &os, ContractionReport const &r)
{
  os << "trial,stage,error,tilde_error,ratio,bound,checked,violated\n";
  for (auto const &s : r.samples) {
    os << s.trial << ',' << s.stage << ',' << s.error << ',' << s.tilde_error << ',' << s.ratio << ',' << s.bound << ','
       << int(s.checked) << ',' << int(s.violated) << '\n';
  }
}

void write_report(std::ostream &os, XiReport const &r)
{
  os << "samples=" << r.samples << '\n'
     << "mean=" << r.mean << '\n'
     << "standard_error=" << r.standard_error << '\n'
     << "bound_checks=" << r.bound_checks << '\n'
     << "bound_violations=" << r.bound_violations << '\n'
     << "max_bound_ratio=" << r.max_bound_ratio << '\n';
  for (auto const &t : r.tails) {
    os << "tail_upper@" << t.lambda << '=' << t.upper << '\n'
       << "tail_lower@" << t.lambda << '=' << t.lower << '\n'
       << "hoeffding@" << t.lambda << '=' << t.hoeffding << '\n';
  }
}

} // namespace sci
