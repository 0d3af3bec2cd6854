#include "sci/theory.hpp"
#include "sci/verify.hpp"
#include "support.hpp"

#include <doctest.h>

#include <chrono>

using namespace sci;
using test::Mat;
using test::Vec;

TEST_CASE("finite-difference check")
{
  Mat const a = test::gaussian_cube({4, 4, 1}, 1).vec().reshaped(4, 4);
  Mat const spd = a * a.transpose() + Mat::Identity(4, 4);
  Vec const p = test::gaussian_cube({4, 1, 1}, 2).vec();

  Objective good = [&](Vec const &x, Vec *g) {
    if (g) { *g = spd * x; }
    return 0.5 * x.dot(spd * x);
  };
  Objective bad = [&](Vec const &x, Vec *g) {
    if (g) { *g = 1.1 * spd * x; }
    return 0.5 * x.dot(spd * x);
  };
  CHECK(finite_diff_check(good, p) <= 1e-7);
  CHECK(finite_diff_check(bad, p) >= 1e-2);
}

TEST_CASE("dense oracle suite")
{
  SUBCASE("each standard instance passes at 1e-10 in under a second")
  {
    auto const   t0 = std::chrono::steady_clock::now();
    auto const   r = standard_oracle_suite(7, 1e-10);
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(r.pass());
    CHECK(r.worst() <= 1e-10);
    CHECK(r.checks.size() == 15);
    CHECK(secs < 1.0);
  }
  SUBCASE("binary masks with a dark pixel")
  {
    Cube m = sample_binary_operator(4, 4, 3, 9).masks();
    for (Index b = 0; b < 3; ++b) { m(0, 0, b) = 0.0; }
    auto const r = dense_oracle_suite(SciOperator<double>(m), 3);
    for (auto const &c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
  }
  SUBCASE("a zero tolerance cannot pass everything")
  {
    auto const r = dense_oracle_suite(sample_gaussian_operator(3, 3, 3, 4), 5, 0.0);
    CHECK(r.worst() > 0.0);
    CHECK_FALSE(r.pass());
  }
}
