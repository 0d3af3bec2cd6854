#include "sci/metrics.hpp"

#include <cmath>

namespace sci {

namespace {

double psnr_from_mse(double m, double peak)
{
  if (!(peak > 0.0)) { fail(ErrorKind::InvalidArgument, "psnr peak must be positive"); }
  if (m == 0.0) { return kPsnrIdentical; }
  return 10.0 * std::log10(peak * peak / m);
}

Vector<double> gaussian_window(Index size, double sigma)
{
  Vector<double> w(size);
  double const   c = 0.5 * double(size - 1);
  for (Index k = 0; k < size; ++k) { w[k] = std::exp(-0.5 * (k - c) * (k - c) / (sigma * sigma)); }
  return w / w.sum();
}

// Separable "valid" filtering with window wx (along rows) and wy (along cols).
Frame filter_valid(Frame const &f, Vector<double> const &wx, Vector<double> const &wy)
{
  Index const ox = f.rows() - wx.size() + 1;
  Index const oy = f.cols() - wy.size() + 1;
  Frame       tmp(ox, f.cols());
  for (Index i = 0; i < ox; ++i) { tmp.row(i) = wx.transpose() * f.middleRows(i, wx.size()); }
  Frame out(ox, oy);
  for (Index j = 0; j < oy; ++j) { out.col(j) = tmp.middleCols(j, wy.size()) * wy; }
  return out;
}

Index window_size(Index extent) { return std::min<Index>(11, extent % 2 == 1 ? extent : extent - 1); }

} // namespace

double mse(Cube const &a, Cube const &b)
{
  require_same_dims(a.dims(), b.dims(), "mse");
  return a.size() ? (a.vec() - b.vec()).squaredNorm() / double(a.size()) : 0.0;
}

double psnr(Cube const &a, Cube const &b, double peak) { return psnr_from_mse(mse(a, b), peak); }

double psnr(Frame const &a, Frame const &b, double peak)
{
  if (a.rows() != b.rows() || a.cols() != b.cols()) { fail(ErrorKind::ShapeMismatch, "psnr frames differ in shape"); }
  return psnr_from_mse(a.size() ? (a - b).squaredNorm() / double(a.size()) : 0.0, peak);
}

double ssim(Frame const &a, Frame const &b, double peak)
{
  if (a.rows() != b.rows() || a.cols() != b.cols()) { fail(ErrorKind::ShapeMismatch, "ssim frames differ in shape"); }
  if (a.size() == 0) { fail(ErrorKind::ShapeMismatch, "ssim of empty frame"); }
  double const         c1 = (0.01 * peak) * (0.01 * peak);
  double const         c2 = (0.03 * peak) * (0.03 * peak);
  Vector<double> const wx = gaussian_window(window_size(a.rows()), 1.5);
  Vector<double> const wy = gaussian_window(window_size(a.cols()), 1.5);

  Frame const mu_a = filter_valid(a, wx, wy);
  Frame const mu_b = filter_valid(b, wx, wy);
  Frame const saa = filter_valid(a.cwiseProduct(a), wx, wy) - mu_a.cwiseProduct(mu_a);
  Frame const sbb = filter_valid(b.cwiseProduct(b), wx, wy) - mu_b.cwiseProduct(mu_b);
  Frame const sab = filter_valid(a.cwiseProduct(b), wx, wy) - mu_a.cwiseProduct(mu_b);

  auto const num = (2.0 * mu_a.array() * mu_b.array() + c1) * (2.0 * sab.array() + c2);
  auto const den = (mu_a.array().square() + mu_b.array().square() + c1) * (saa.array() + sbb.array() + c2);
  return (num / den).mean();
}

double ssim(Cube const &a, Cube const &b, double peak)
{
  require_same_dims(a.dims(), b.dims(), "ssim");
  double total = 0.0;
  for (Index k = 0; k < a.nb(); ++k) { total += ssim(Frame(a.slice(k)), Frame(b.slice(k)), peak); }
  return a.nb() ? total / double(a.nb()) : 1.0;
}

double rmse_loss(Cube const &truth, Cube const &estimate)
{
  require_same_dims(truth.dims(), estimate.dims(), "rmse_loss");
  return (truth.vec() - estimate.vec()).norm();
}

double weighted_loss(Cube const                  &truth,
                     Cube const                  &last,
                     Cube const                  &second_last,
                     Cube const                  &third_last,
                     std::array<double, 3> const &betas)
{
  return betas[0] * rmse_loss(truth, last) + betas[1] * rmse_loss(truth, second_last) + betas[2] * rmse_loss(truth, third_last);
}

} // namespace sci
