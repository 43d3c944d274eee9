#pragma once

#include <span>
#include <vector>

#include "stam/set_function.hpp"

namespace stam {

//! Probability density sampled on a uniform grid x0 + k*dx. Trapezoid mass
//! must be 1 within 1e-6; values nonnegative and finite. All entropies are
//! in nats (natural log throughout); entropy power is e^{2h}.
class GridDensity {
 public:
  GridDensity(double x0, double dx, std::vector<double> pdf);

  // Centered Gaussian, support +-12 sigma.
  static GridDensity gaussian(double variance, double dx = 1e-3,
                              double mean = 0.0);
  // Uniform on [a, b]. Interval endpoints fall halfway between samples, which
  // makes both the trapezoid mass and the entropy grid-exact for steps.
  static GridDensity uniform(double a, double b, double dx = 1e-3);
  // Laplace with the given scale (variance 2*scale^2), support +-40 scale.
  static GridDensity laplace(double scale, double dx = 1e-3);

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  std::size_t size() const { return pdf_.size(); }
  const std::vector<double>& pdf() const { return pdf_; }
  double xmax() const { return x0_ + dx_ * (pdf_.size() - 1); }

  double mass() const;      // trapezoid integral
  double mean() const;
  double variance() const;

  GridDensity scaled(double b) const;  // density of bX, b > 0

  // |FFT-convolution mass error| recorded when this density was produced by
  // convolve(); 0 for directly constructed densities.
  double renormalization_correction() const { return renorm_; }

 private:
  friend GridDensity convolve(const GridDensity&, const GridDensity&);
  double x0_ = 0.0, dx_ = 0.0;
  std::vector<double> pdf_;
  double renorm_ = 0.0;
};

double entropy(const GridDensity& f);        // -integral f ln f, 0 ln 0 = 0
double entropy_power(const GridDensity& f);  // e^{2 h}

// Density of X + Y via FFT; grids must share dx. The output is renormalized
// and the correction is logged on the result (must stay below 1e-6).
GridDensity convolve(const GridDensity& f, const GridDensity& g);

// I(X) computed as 4 * integral of ((sqrt f)')^2, central differences.
// Throws if f vanishes strictly inside its numerical support.
double fisher_information(const GridDensity& f);

// Cross-check form: integral of f'^2 / f.
double fisher_information_ratio_form(const GridDensity& f);

// N(X) I(X); at least 2*pi*e for any density, equality iff Gaussian.
double ni_product(const GridDensity& f);

struct DeBruijnRow {
  double eps = 0.0;
  double slope_h = 0.0;  // [h(X + sqrt(eps) Z) - h(X)] / eps -> I(X)/2
  double slope_n = 0.0;  // [N(X + sqrt(eps) Z) - N(X)] / eps -> N(X) I(X)
};

struct DeBruijnReport {
  double entropy = 0.0;
  double epower = 0.0;
  double fisher = 0.0;
  double half_fisher = 0.0;
  double ni = 0.0;
  std::vector<DeBruijnRow> rows;
};

// Finite-difference probe of the smoothing derivative; eps below 4 dx^2 is
// rejected (the grid cannot resolve the added Gaussian).
DeBruijnReport de_bruijn_check(const GridDensity& f,
                               std::span<const double> eps_list);

// nu(s) = N(sum_{i in s} X_i) for independent X_i with the given densities.
// Shared dx required; n <= 8. Partial convolutions are reused across subsets.
SetFunction nu_from_densities(std::span<const GridDensity> fs);

// N(X+Y+Z) + N(X) - N(X+Y) - N(X+Z); the first argument is the pivot
// appearing in all four terms. A negative value certifies that entropy
// power is not supermodular on this triple.
double q_sup_gap(const GridDensity& x, const GridDensity& y,
                 const GridDensity& z);

// Canonical log-concave, non-Gaussian test density.
GridDensity smoothed_laplace(double scale, double smoothing_variance,
                             double dx = 1e-3);

}  // namespace stam
