#pragma once

#include <span>
#include <vector>

#include "stam/density1d.hpp"

namespace stam {

struct Interval {
  double left = 0.0;
  double width = 0.0;
  double weight = 0.0;
};

//! Mixture of uniform densities on pairwise disjoint intervals.
class IntervalMixture {
 public:
  explicit IntervalMixture(std::vector<Interval> parts);

  // Intervals (2^k, 2^k + a_k) with weight a_k, k = 1..N; the a_k are
  // nonnegative and sum to 1, so the mixture is uniform on a length-1 set.
  static IntervalMixture dyadic(std::span<const double> a);

  const std::vector<Interval>& parts() const { return parts_; }
  double pdf(double x) const;
  double entropy() const;  // exact: sum w ln(width / w)
  double min_left() const;
  double max_right() const;

  IntervalMixture scaled(double b) const;  // mixture of bX

  // Sampled so that every interval edge falls halfway between grid points;
  // requires dx to divide every width and edge offset (dyadic mixtures with
  // equal widths satisfy this for dx = width / k). Grid mass and entropy are
  // then exact, not just O(dx) approximations.
  GridDensity to_grid(double dx) const;

 private:
  std::vector<Interval> parts_;  // sorted by left endpoint
};

//! Density made of linear segments, zero between them. Jumps at segment ends
//! are allowed, so both step mixtures and their (continuous) convolutions fit.
//! Supports exact entropy and closed-form Gaussian smoothing.
class PiecewiseLinear {
 public:
  struct Segment {
    double x0 = 0.0, x1 = 0.0;  // x0 < x1
    double y0 = 0.0, y1 = 0.0;  // density at the two ends, linear between
  };

  // Segments sorted and non-overlapping (touching endpoints allowed).
  explicit PiecewiseLinear(std::vector<Segment> segments);

  static PiecewiseLinear steps(const IntervalMixture& f);
  static PiecewiseLinear self_convolution(const IntervalMixture& f);

  const std::vector<Segment>& segments() const { return segs_; }
  double mass() const;
  double pdf(double x) const;    // value at segment edges taken from the segment
  double entropy_exact() const;  // per-segment t ln t antiderivative

  // pdf of X + N(0, var), closed form per segment.
  double smoothed_pdf(double x, double var) const;

  // h(X + N(0, var)); var = 0 falls back to entropy_exact(). Quadrature runs
  // only on windows around segment endpoints, the smooth remainder is
  // integrated in closed form, so cost does not grow with lump separation.
  double smoothed_entropy(double var) const;

 private:
  std::vector<Segment> segs_;
};

//! Weights a_1..a_N of the dyadic interval mixture; sum to 1.
struct BcWeights {
  std::vector<double> a;

  explicit BcWeights(std::vector<double> weights);
  std::vector<double> partial_sums() const;  // s_n = a_1 + ... + a_n
};

// Closed form for the self-convolution entropy h(X + X') of the dyadic
// mixture with weights a (nats):
//   -2 ln2 + 2 ln2 sum s_n a_n + sum (n - 1/2) a_n^2
//   + sum a_n^2 ln(1/a_n) + 2 sum_{n>=2} s_{n-1} a_n ln(1/a_n).
double bc_entropy_formula(const BcWeights& a);

// Independent route: build the exact piecewise-linear self-convolution and
// integrate -p ln p segment by segment. N <= 12.
double bc_selfconv_entropy_exact(const BcWeights& a);

}  // namespace stam
