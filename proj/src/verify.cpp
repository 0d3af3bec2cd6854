#include "sci/verify.hpp"
#include "sci/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sci {

double finite_diff_check(Objective const &objective, Vector<double> const &point, double eps)
{
  if (!(eps > 0.0)) { fail(ErrorKind::InvalidArgument, "finite_diff_check needs eps > 0"); }
  Vector<double> grad;
  objective(point, &grad);
  if (grad.size() != point.size()) { fail(ErrorKind::ShapeMismatch, "objective gradient has the wrong length"); }
  double         worst = 0.0;
  Vector<double> p = point;
  for (Index k = 0; k < point.size(); ++k) {
    p[k] = point[k] + eps;
    double const up = objective(p, nullptr);
    p[k] = point[k] - eps;
    double const down = objective(p, nullptr);
    p[k] = point[k];
    double const fd = (up - down) / (2.0 * eps);
    worst = std::max(worst, std::abs(fd - grad[k]) / std::max(1.0, std::abs(grad[k])));
  }
  return worst;
}

bool OracleReport::pass() const
{
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](auto const &c) { return c.pass; });
}

double OracleReport::worst() const
{
  double w = 0.0;
  for (auto const &c : checks) { w = std::max(w, c.relative_error); }
  return w;
}

namespace {

double relative(Vector<double> const &got, Vector<double> const &want)
{
  double const scale = want.norm();
  return (got - want).norm() / (scale > 0.0 ? scale : 1.0);
}

Vector<double> random_vector(Index size, std::mt19937_64 &rng)
{
  std::normal_distribution<double> gauss;
  Vector<double>                   v(size);
  for (Index k = 0; k < size; ++k) { v[k] = gauss(rng); }
  return v;
}

} // namespace

OracleReport dense_oracle_suite(SciOperator<double> const &op, std::uint64_t seed, double tolerance)
{
  Matrix<double> const h = build_dense(op);
  Index const          n = op.pixels();
  auto const           dims = op.dims();
  std::mt19937_64      rng(seed);

  OracleReport rep;
  rep.tolerance = tolerance;
  std::string const tag = " (n=" + std::to_string(n) + ", B=" + std::to_string(op.nb()) + ")";
  auto              add = [&](std::string name, double err) { rep.checks.push_back({name + tag, err, err <= tolerance}); };

  Cube const x(dims, random_vector(dims.size(), rng));
  add("apply_H", relative(vectorize(apply_H(op, x)), h * x.vec()));

  Vector<double> const yv = random_vector(n, rng);
  Frame const          y = unvectorize(yv, CubeDims{dims.nx, dims.ny, 1}).slice(0);
  add("apply_Ht", relative(apply_Ht(op, y).vec(), h.transpose() * yv));

  Matrix<double> const hht = h * h.transpose();
  add("r_diagonal", relative(op.r_unfloored(), hht.diagonal()));

  Cube const           v(dims, random_vector(dims.size(), rng));
  Vector<double> const proj = v.vec() + h.transpose() * hht.ldlt().solve(yv - h * v.vec());
  add("project_to_manifold", relative(project_to_manifold(op, v, y).vec(), proj));

  Cube const           u(dims, random_vector(dims.size(), rng));
  double const         gamma = 0.5;
  Matrix<double> const lhs = h.transpose() * h + gamma * Matrix<double>::Identity(dims.size(), dims.size());
  Vector<double> const xs = lhs.ldlt().solve(h.transpose() * yv + gamma * (v.vec() + u.vec()));
  add("admm_x_update", relative(admm_x_update(op, y, v, u, gamma).vec(), xs));
  return rep;
}

OracleReport standard_oracle_suite(std::uint64_t seed, double tolerance)
{
  OracleReport all;
  all.tolerance = tolerance;
  for (Index side : {2, 3, 4}) {
    auto const op = sample_gaussian_operator(side, side, side, derive_seed(seed, static_cast<std::uint64_t>(side)));
    auto       rep = dense_oracle_suite(op, derive_seed(seed, 100 + static_cast<std::uint64_t>(side)), tolerance);
    all.checks.insert(all.checks.end(), rep.checks.begin(), rep.checks.end());
  }
  return all;
}

} // namespace sci
