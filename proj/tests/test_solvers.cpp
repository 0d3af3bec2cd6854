#include "sci/metrics.hpp"
#include "sci/pipeline/scenes.hpp"
#include "sci/solvers.hpp"
#include "sci/theory.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace sci;
using test::Mat;
using test::Vec;

namespace {

struct SubspaceInstance
{
  Operator op;
  Cube     truth;
  Frame    y;
  Mat      basis;
};

SubspaceInstance subspace_instance(Index side, Index nb, Index eta, std::uint64_t seed)
{
  Operator   op = sample_gaussian_operator(side, side, nb, seed);
  Mat const  q = random_orthonormal_basis(side * side * nb, eta, seed + 1);
  Vec const  f = test::gaussian_cube({eta, 1, 1}, seed + 2).vec();
  Cube const truth(op.dims(), q * f);
  Frame      y = apply_H(op, truth);
  return {std::move(op), truth, std::move(y), q};
}

SolverConfig oracle_config(Algorithm a, int stages, Mat const &q, double scale)
{
  SolverConfig cfg;
  cfg.algorithm = a;
  cfg.stages = stages;
  cfg.denoisers.assign(std::size_t(stages), make_subspace(q));
  cfg.projection_scale = scale;
  return cfg;
}

double rel_error(Cube const &a, Cube const &b) { return (a.vec() - b.vec()).norm() / b.vec().norm(); }

} // namespace

TEST_CASE("algorithm names round-trip")
{
  for (Algorithm a : {Algorithm::GapNet, Algorithm::AdmmNet, Algorithm::GapTv, Algorithm::PnpGap}) {
    CHECK(parse_algorithm(to_string(a)) == a);
  }
  CHECK_THROWS_AS(parse_algorithm("gap"), Error);
}

TEST_CASE("solver configuration checks")
{
  SolverConfig cfg;
  cfg.stages = 3;
  cfg.denoisers.assign(2, make_identity());
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.denoisers.assign(3, make_identity());
  CHECK_NOTHROW(cfg.validate());
  cfg.algorithm = Algorithm::AdmmNet;
  cfg.gamma = 0.0;
  try {
    cfg.validate();
    FAIL("expected NonPositiveGamma");
  } catch (Error const &e) {
    CHECK(e.kind() == ErrorKind::NonPositiveGamma);
  }
  cfg.algorithm = Algorithm::PnpGap;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.denoisers.resize(1);
  CHECK_NOTHROW(cfg.validate());
  cfg.projection_scale = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("one frame, one stage recovers the scene exactly")
{
  Cube const  masks = test::random_cube({6, 5, 1}, 1, 0.2, 1.0);
  Operator    op(masks);
  Cube const  truth = test::random_cube(masks.dims(), 2);
  Frame const y = apply_H(op, truth);
  SolverConfig cfg;
  cfg.denoisers = {make_identity()};
  auto const r = gap_net_reconstruct(op, y, cfg);
  CHECK(rel_error(r.estimate, truth) <= 1e-12);
  REQUIRE(r.trace.stages.size() == 2);
}

TEST_CASE("identity GAP stays on the manifold after one stage")
{
  Operator     op(test::random_cube({4, 4, 3}, 3, 0.1, 1.0));
  Frame const  y = test::random_frame(4, 4, 4);
  SolverConfig cfg;
  cfg.stages = 6;
  cfg.denoisers.assign(6, make_identity());
  cfg.record_estimates = true;
  auto const r = gap_net_reconstruct(op, y, cfg);
  REQUIRE(r.trace.stages.size() == 7);
  Cube const &first = *r.trace.stages[1].estimate;
  for (std::size_t k = 2; k < 7; ++k) { CHECK(rel_error(*r.trace.stages[k].estimate, first) <= 1e-13); }
  CHECK(r.trace.stages[1].residual <= 1e-12 * y.norm());
  CHECK(rel_error(first, project_to_manifold(op, apply_Ht(op, y), y)) <= 1e-14);
}

TEST_CASE("trace bookkeeping")
{
  auto         inst = subspace_instance(6, 2, 3, 5);
  SolverConfig cfg = oracle_config(Algorithm::GapNet, 9, inst.basis, 1.0);
  cfg.truth = inst.truth;
  auto const r = reconstruct(inst.op, inst.y, cfg);
  REQUIRE(r.trace.stages.size() == 10);
  CHECK(r.trace.stages[0].projection_residual == 0.0);
  CHECK(r.trace.stages[0].error.has_value());
  CHECK(*r.trace.stages[0].error == doctest::Approx((apply_Ht(inst.op, inst.y).vec() - inst.truth.vec()).norm()));
  for (std::size_t k = 1; k < 10; ++k) {
    CHECK(r.trace.stages[k].projection_residual <= 1e-10 * inst.y.norm());
    CHECK(r.trace.stages[k].psnr.has_value());
  }
  CHECK(r.seconds >= 0.0);
}

TEST_CASE("oracle subspace GAP-net converges to the truth")
{
  SUBCASE("n = 64, Euclidean projection")
  {
    auto       inst = subspace_instance(8, 4, 5, 7);
    auto const r = gap_net_reconstruct(inst.op, inst.y, oracle_config(Algorithm::GapNet, 200, inst.basis, 1.0));
    CHECK(rel_error(r.estimate, inst.truth) <= 1e-6);
  }
  SUBCASE("n = 256, scale B")
  {
    auto         inst = subspace_instance(16, 4, 5, 8);
    SolverConfig cfg = oracle_config(Algorithm::GapNet, 30, inst.basis, 4.0);
    cfg.truth = inst.truth;
    auto const r = gap_net_reconstruct(inst.op, inst.y, cfg);
    CHECK(rel_error(r.estimate, inst.truth) <= 1e-6);
    // more stages never end further away
    double prev = *r.trace.stages[2].error;
    bool   mono = true;
    for (std::size_t k = 3; k < r.trace.stages.size(); ++k) {
      double const e = *r.trace.stages[k].error;
      mono = mono && e <= prev + 1e-12 * inst.truth.vec().norm();
      prev = e;
    }
    CHECK(mono);
  }
}

TEST_CASE("a zero measurement reconstructs to zero")
{
  Operator    op(test::random_cube({8, 8, 4}, 9, 0.0, 1.0));
  Frame const y = Frame::Zero(8, 8);
  CHECK(gap_tv_reconstruct(op, y, 10, 0.5).estimate.vec().cwiseAbs().maxCoeff() == 0.0);
  auto         inst = subspace_instance(8, 4, 5, 10);
  SolverConfig cfg = oracle_config(Algorithm::AdmmNet, 5, inst.basis, 1.0);
  CHECK(admm_net_reconstruct(inst.op, Frame(Frame::Zero(8, 8)), cfg).estimate.vec().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ADMM with tiny gamma and one identity stage equals one GAP stage")
{
  Operator     op(test::random_cube({5, 5, 3}, 11, 0.2, 1.0));
  Frame const  y = test::random_frame(5, 5, 12);
  SolverConfig gap;
  gap.denoisers = {make_identity()};
  SolverConfig admm = gap;
  admm.algorithm = Algorithm::AdmmNet;
  admm.gamma = 1e-9;
  auto const a = gap_net_reconstruct(op, y, gap);
  auto const b = admm_net_reconstruct(op, y, admm);
  CHECK(rel_error(b.estimate, a.estimate) <= 1e-6);
}

TEST_CASE("ADMM primal residual vanishes on oracle instances")
{
  ContractionSettings const s;
  int                       by_50 = 0, by_100 = 0;
  for (int t = 0; t < s.trials; ++t) {
    auto const   inst = contraction_instance(s, t);
    SolverConfig cfg = oracle_config(Algorithm::AdmmNet, 100, inst.basis, 1.0);
    cfg.gamma = double(s.B);
    auto const r = admm_net_reconstruct(inst.op, inst.y, cfg);
    by_50 += r.trace.stages[50].primal_residual <= 1e-6 ? 1 : 0;
    by_100 += r.trace.stages[100].primal_residual <= 1e-6 ? 1 : 0;
  }
  MESSAGE("primal residual <= 1e-6: " << by_50 << "/" << s.trials << " by stage 50, " << by_100 << "/" << s.trials << " by stage 100");
  CHECK(by_100 == s.trials);
}

TEST_CASE("GAP-net and ADMM-net agree on oracle instances")
{
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    auto         inst = subspace_instance(16, 4, 5, 2000 + t);
    auto const   g = gap_net_reconstruct(inst.op, inst.y, oracle_config(Algorithm::GapNet, 30, inst.basis, 4.0));
    SolverConfig admm = oracle_config(Algorithm::AdmmNet, 100, inst.basis, 1.0);
    admm.gamma = 4.0;
    auto const a = admm_net_reconstruct(inst.op, inst.y, admm);
    worst = std::max(worst, rel_error(a.estimate, g.estimate));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("GAP-TV")
{
  Cube const  truth = pipeline::moving_square();
  Operator    op(pipeline::bernoulli_masks(32, 32, 8, 0.5, 42));
  Frame const y = apply_H(op, truth);

  SUBCASE("lambda 0 is identity GAP")
  {
    GapTvOptions o;
    o.iterations = 8;
    o.lambda = 0.0;
    auto const   tv = gap_tv_reconstruct(op, y, o);
    SolverConfig cfg;
    cfg.algorithm = Algorithm::PnpGap;
    cfg.stages = 8;
    cfg.accelerate = true;
    cfg.denoisers = {make_identity()};
    auto const id = pnp_gap_reconstruct(op, y, cfg);
    CHECK(rel_error(tv.estimate, id.estimate) <= 1e-14);
  }
  SUBCASE("moving square reaches 25 dB and beats the initial estimate by 5 dB")
  {
    GapTvOptions o;
    o.iterations = 100;
    o.truth = truth;
    auto const   r = gap_tv_reconstruct(op, y, o);
    double const init = psnr(apply_Ht(op, y), truth);
    double const init_proj = psnr(project_to_manifold(op, apply_Ht(op, y), y), truth);
    double const final_psnr = psnr(r.estimate, truth);
    MESSAGE("GAP-TV " << final_psnr << " dB, projected init " << init_proj << " dB");
    CHECK(final_psnr >= 25.0);
    CHECK(final_psnr >= init_proj + 5.0);
    CHECK(final_psnr >= init + 5.0);
    CHECK(r.trace.stages.size() == 101);
    CHECK(*r.trace.stages.back().psnr == doctest::Approx(final_psnr));
  }
  SUBCASE("more iterations do not lose quality")
  {
    double prev = -1.0;
    for (int k : {5, 20, 60}) {
      double const p = psnr(gap_tv_reconstruct(op, y, k, 0.5).estimate, truth);
      CHECK(p >= prev - 0.1);
      prev = p;
    }
  }
  SUBCASE("bad options")
  {
    CHECK_THROWS_AS(gap_tv_reconstruct(op, y, 0, 0.5), Error);
    CHECK_THROWS_AS(gap_tv_reconstruct(op, y, 5, -1.0), Error);
  }
}
