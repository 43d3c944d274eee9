// Test-only oracles, independent of the library implementation paths they
// cross-check.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "stam/density1d.hpp"
#include "stam/subsets.hpp"

namespace stam::test {

// Direct O(n m) convolution, the oracle for the FFT path.
inline std::vector<double> direct_convolution(const std::vector<double>& a,
                                              const std::vector<double>& b,
                                              double dx) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j] * dx;
  return out;
}

// Double-precision vertex enumeration of the fractional-partition polytope
// via Eigen rank tests; independent of the rational path.
inline void float_vertices_rec(int n, std::vector<SubsetMask>& chosen,
                               SubsetMask next,
                               std::vector<std::map<SubsetMask, double>>& out) {
  const SubsetMask top = full_mask(n);
  for (SubsetMask s = next; s <= top; ++s) {
    chosen.push_back(s);
    const int k = static_cast<int>(chosen.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, k);
    for (int row = 0; row < n; ++row)
      for (int col = 0; col < k; ++col)
        m(row, col) = contains(chosen[col], row + 1) ? 1.0 : 0.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);
    if (lu.rank() == k) {
      const Eigen::VectorXd beta = (m.transpose() * m)
                                       .ldlt()
                                       .solve(m.transpose() *
                                              Eigen::VectorXd::Ones(n));
      const double residual = (m * beta - Eigen::VectorXd::Ones(n)).norm();
      bool positive = residual < 1e-9;
      for (int j = 0; j < k && positive; ++j) positive = beta(j) > 1e-9;
      if (positive) {
        std::map<SubsetMask, double> v;
        for (int j = 0; j < k; ++j) v[chosen[j]] = beta(j);
        out.push_back(std::move(v));
      }
      if (k < n) float_vertices_rec(n, chosen, s + 1, out);
    }
    chosen.pop_back();
  }
}

inline std::vector<std::map<SubsetMask, double>> float_vertex_oracle(int n) {
  std::vector<std::map<SubsetMask, double>> out;
  std::vector<SubsetMask> chosen;
  float_vertices_rec(n, chosen, 1, out);
  return out;
}

// Random mixture of a few Gaussians: smooth, strictly positive, normalized.
inline GridDensity random_smooth_density(std::mt19937_64& rng,
                                         double dx = 1e-3) {
  std::uniform_real_distribution<double> center(-1.0, 1.0);
  std::uniform_real_distribution<double> spread(0.3, 1.5);
  std::uniform_real_distribution<double> mass(0.2, 1.0);
  const int bumps = 2 + static_cast<int>(rng() % 3);
  std::vector<double> mu(bumps), var(bumps), w(bumps);
  double total = 0.0;
  for (int b = 0; b < bumps; ++b) {
    mu[b] = center(rng);
    var[b] = spread(rng);
    w[b] = mass(rng);
    total += w[b];
  }
  const double half = 10.0;
  const std::size_t count = static_cast<std::size_t>(2 * half / dx) + 1;
  std::vector<double> pdf(count);
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = -half + dx * static_cast<double>(i);
    double p = 0.0;
    for (int b = 0; b < bumps; ++b)
      p += w[b] / total *
           std::exp(-(x - mu[b]) * (x - mu[b]) / (2.0 * var[b])) /
           std::sqrt(2.0 * M_PI * var[b]);
    pdf[i] = p;
    sum += p;
  }
  sum -= 0.5 * (pdf.front() + pdf.back());
  for (double& p : pdf) p /= sum * dx;
  return GridDensity(-half, dx, std::move(pdf));
}

}  // namespace stam::test
