#pragma once

#include "sci_operator.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sci {

// f(x), writing ∇f(x) into the second argument when it is non-null.
using Objective = std::function<double(Vector<double> const &, Vector<double> *)>;

// Max over coordinates of |central difference − analytic| / max(1, |analytic|).
double finite_diff_check(Objective const &objective, Vector<double> const &point, double eps = 1e-5);

struct OracleCheck
{
  std::string name;
  double      relative_error = 0.0;
  bool        pass = false;
};

struct OracleReport
{
  std::vector<OracleCheck> checks;
  double                   tolerance = 1e-10;

  bool   pass() const;
  double worst() const;
};

// apply_H, apply_Ht, r_diagonal, project_to_manifold and admm_x_update
// against the explicitly assembled H on random inputs.
OracleReport dense_oracle_suite(SciOperator<double> const &op, std::uint64_t seed = 7, double tolerance = 1e-10);

// The three standard instances (n, B) = (4, 2), (9, 3), (16, 4) with
// Gaussian masks.
OracleReport standard_oracle_suite(std::uint64_t seed = 7, double tolerance = 1e-10);

} // namespace sci
