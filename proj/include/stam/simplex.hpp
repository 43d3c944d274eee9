#pragma once

#include <Eigen/Dense>
#include <vector>

namespace stam {

// Dense two-phase primal simplex for  max c.x  s.t.  A x = b, x >= 0,
// with Bland's rule. Small problems only (the FSA polytope has n rows and
// 2^n - 1 columns); not a general-purpose LP solver.
struct SimplexResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::optimal;
  double objective = 0.0;
  Eigen::VectorXd x;
  std::vector<int> basis;  // structural column per row, -1 for artificial
};

SimplexResult simplex_maximize(const Eigen::MatrixXd& a,
                               const Eigen::VectorXd& b,
                               const Eigen::VectorXd& c);

}  // namespace stam
