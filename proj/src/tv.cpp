#include "sci/tv.hpp"

namespace sci {

namespace {

void gradient(Frame const &u, Frame &gx, Frame &gy)
{
  Index const nx = u.rows();
  Index const ny = u.cols();
  gx.setZero(nx, ny);
  gy.setZero(nx, ny);
  if (nx > 1) { gx.topRows(nx - 1) = u.bottomRows(nx - 1) - u.topRows(nx - 1); }
  if (ny > 1) { gy.leftCols(ny - 1) = u.rightCols(ny - 1) - u.leftCols(ny - 1); }
}

// Negative adjoint of the forward-difference gradient.
Frame divergence(Frame const &px, Frame const &py)
{
  Index const nx = px.rows();
  Index const ny = px.cols();
  Frame       d = Frame::Zero(nx, ny);
  if (nx > 1) {
    d.topRows(nx - 1) += px.topRows(nx - 1);
    d.bottomRows(nx - 1) -= px.topRows(nx - 1);
  }
  if (ny > 1) {
    d.leftCols(ny - 1) += py.leftCols(ny - 1);
    d.rightCols(ny - 1) -= py.leftCols(ny - 1);
  }
  return d;
}

} // namespace

double anisotropic_tv(Eigen::Ref<Frame const> const &u)
{
  double      tv = 0.0;
  Index const nx = u.rows();
  Index const ny = u.cols();
  if (nx > 1) { tv += (u.bottomRows(nx - 1) - u.topRows(nx - 1)).cwiseAbs().sum(); }
  if (ny > 1) { tv += (u.rightCols(ny - 1) - u.leftCols(ny - 1)).cwiseAbs().sum(); }
  return tv;
}

double tv_objective(Eigen::Ref<Frame const> const &u, Eigen::Ref<Frame const> const &f, double lambda)
{
  return 0.5 * (u - f).squaredNorm() + lambda * anisotropic_tv(u);
}

Frame tv_denoise_frame(Eigen::Ref<Frame const> const &f, double lambda, int iterations, TvReport *report)
{
  if (!(lambda >= 0.0)) { fail(ErrorKind::InvalidArgument, "lambda_tv must be >= 0"); }
  if (iterations < 1) { fail(ErrorKind::InvalidArgument, "TV iterations must be >= 1"); }
  Frame const input = f;
  if (lambda == 0.0) {
    if (report) { report->objective.assign(static_cast<std::size_t>(iterations), 0.0); }
    return input;
  }

  Index const nx = input.rows();
  Index const ny = input.cols();
  Frame       px = Frame::Zero(nx, ny);
  Frame       py = Frame::Zero(nx, ny);
  Frame       gx, gy;
  Frame       best = input;
  double      best_obj = tv_objective(best, input, lambda);
  double const step = 1.0 / (8.0 * lambda);

  if (report) {
    report->objective.clear();
    report->objective.reserve(static_cast<std::size_t>(iterations));
  }
  for (int it = 0; it < iterations; ++it) {
    Frame const u = input + lambda * divergence(px, py);
    gradient(u, gx, gy);
    px = (px + step * gx).cwiseMax(-1.0).cwiseMin(1.0);
    py = (py + step * gy).cwiseMax(-1.0).cwiseMin(1.0);
    Frame const  next = input + lambda * divergence(px, py);
    double const obj = tv_objective(next, input, lambda);
    if (obj <= best_obj) {
      best = next;
      best_obj = obj;
    }
    if (report) { report->objective.push_back(best_obj); }
  }
  return best;
}

Cube tv_denoise(Cube const &x, double lambda, int iterations, std::vector<TvReport> *reports)
{
  Cube out(x.dims());
  if (reports) { reports->assign(static_cast<std::size_t>(x.nb()), {}); }
  for (Index b = 0; b < x.nb(); ++b) {
    out.slice(b) = tv_denoise_frame(x.slice(b), lambda, iterations, reports ? &(*reports)[static_cast<std::size_t>(b)] : nullptr);
  }
  return out;
}

} // namespace sci
