// Weight files and expected outputs were produced by tests/data/golden/make_golden.py,
// which runs its own numpy forward pass.
#include "sci/network.hpp"
#include "sci/tensor_file.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace sci;

namespace {

Cube sample(RawTensor const &t, std::size_t s)
{
  Index const nb = Index(t.dims[1]);
  Index const nx = Index(t.dims[2]);
  Index const ny = Index(t.dims[3]);
  Cube        c(nx, ny, nb);
  std::size_t const base = s * std::size_t(nb * nx * ny);
  for (Index b = 0; b < nb; ++b) {
    for (Index i = 0; i < nx; ++i) {
      for (Index j = 0; j < ny; ++j) { c(i, j, b) = t.data[base + std::size_t((b * nx + i) * ny + j)]; }
    }
  }
  return c;
}

double worst_error(std::string const &net, std::string const &expected)
{
  auto const      dir = test::data_dir() / "golden";
  NetworkWeights  w = load_weights(dir / net);
  RawTensor const in = read_tensor(dir / "inputs.sct");
  RawTensor const want = read_tensor(dir / expected);
  REQUIRE(in.dims.size() == 4);
  REQUIRE(in.dims == want.dims);
  double worst = 0.0;
  for (std::size_t s = 0; s < in.dims[0]; ++s) {
    Cube const got = run_network(w, sample(in, s));
    Cube const ref = sample(want, s);
    worst = std::max(worst, (got.vec() - ref.vec()).cwiseAbs().maxCoeff());
  }
  return worst;
}

} // namespace

TEST_CASE("golden weight files re-encode byte for byte")
{
  for (char const *name : {"conv_net.scw", "affine_net.scw"}) {
    CAPTURE(name);
    auto const bytes = wire::slurp(test::data_dir() / "golden" / name);
    CHECK(encode_weights(decode_weights(bytes)) == bytes);
  }
  CHECK(load_weights(test::data_dir() / "golden" / "conv_net.scw").stage == 3);
  CHECK(load_weights(test::data_dir() / "golden" / "affine_net.scw").stage == 1);
}

TEST_CASE("conv network matches the reference outputs")
{
  CHECK(worst_error("conv_net.scw", "conv_expected.sct") <= 1e-5);
}

TEST_CASE("affine network matches the reference outputs")
{
  CHECK(worst_error("affine_net.scw", "affine_expected.sct") <= 1e-5);
}
