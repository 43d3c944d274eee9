#include "stam/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stam {

namespace {

constexpr double kEps = 1e-9;

struct Tableau {
  Eigen::MatrixXd t;        // m x (ncols + 1), last column = rhs
  std::vector<int> basis;   // column currently basic in each row
  int ncols = 0;

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }
};

// Runs simplex iterations for the given cost vector (maximization).
// `allowed` masks columns permitted to enter. Returns false on unbounded.
bool iterate(Tableau& tab, const Eigen::VectorXd& cost,
             const std::vector<bool>& allowed) {
  const int m = static_cast<int>(tab.t.rows());
  for (;;) {
    // reduced costs: c_j - c_B . B^{-1} A_j
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    for (int r = 0; r < m; ++r) y(r) = cost(tab.basis[r]);
    int entering = -1;
    for (int j = 0; j < tab.ncols; ++j) {
      if (!allowed[j]) continue;
      const double reduced = cost(j) - y.dot(tab.t.col(j));
      if (reduced > kEps) {  // Bland: first improving index
        entering = j;
        break;
      }
    }
    if (entering < 0) return true;
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      const double a = tab.t(r, entering);
      if (a > kEps) {
        const double ratio = tab.t(r, tab.ncols) / a;
        if (ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps &&
             (leave < 0 || tab.basis[r] < tab.basis[leave]))) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) return false;
    tab.pivot(leave, entering);
  }
}

}  // namespace

SimplexResult simplex_maximize(const Eigen::MatrixXd& a,
                               const Eigen::VectorXd& b,
                               const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("simplex: inconsistent dimensions");

  Tableau tab;
  tab.ncols = n + m;  // structural + artificial
  tab.t.resize(m, tab.ncols + 1);
  tab.t.leftCols(n) = a;
  tab.t.middleCols(n, m) = Eigen::MatrixXd::Identity(m, m);
  tab.t.col(tab.ncols) = b;
  for (int r = 0; r < m; ++r) {
    if (tab.t(r, tab.ncols) < 0.0) tab.t.row(r) *= -1.0;
    tab.basis.push_back(n + r);
  }

  // Phase 1: drive artificials to zero.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(tab.ncols);
  phase1.segment(n, m).setConstant(-1.0);
  std::vector<bool> all(static_cast<std::size_t>(tab.ncols), true);
  iterate(tab, phase1, all);

  double artificial_sum = 0.0;
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] >= n) artificial_sum += tab.t(r, tab.ncols);
  SimplexResult res;
  if (artificial_sum > 1e-7) {
    res.status = SimplexResult::Status::infeasible;
    return res;
  }
  // Pivot residual zero-level artificials out where a structural column allows.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.t(r, j)) > kEps) {
        tab.pivot(r, j);
        break;
      }
    }
  }

  // Phase 2: artificials barred from entering.
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(tab.ncols);
  cost.head(n) = c;
  std::vector<bool> structural(static_cast<std::size_t>(tab.ncols), false);
  for (int j = 0; j < n; ++j) structural[j] = true;
  if (!iterate(tab, cost, structural)) {
    res.status = SimplexResult::Status::unbounded;
    return res;
  }

  res.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < n) res.x(tab.basis[r]) = tab.t(r, tab.ncols);
  res.objective = c.dot(res.x);
  res.basis.assign(m, -1);
  for (int r = 0; r < m; ++r)
    res.basis[r] = tab.basis[r] < n ? tab.basis[r] : -1;
  return res;
}

}  // namespace stam
