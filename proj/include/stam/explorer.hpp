#pragma once

#include <span>
#include <string>
#include <vector>

#include "stam/density1d.hpp"
#include "stam/gaussian.hpp"
#include "stam/piecewise.hpp"
#include "stam/rational.hpp"
#include "stam/set_function.hpp"

namespace stam {

enum class Provenance { gaussian, density, synthetic };

//! A candidate point of the region of entropy-power vectors, tagged with the
//! dimension of the witnessing random vectors.
struct StamPoint {
  SetFunction u;
  int dim = 1;
  Provenance provenance = Provenance::synthetic;
  std::string note;
};

StamPoint stam_point_from_gaussian(const GaussianEnsemble& ens,
                                   bool include_constant = false);
StamPoint stam_point_from_densities(std::span<const GridDensity> fs);

// lambda * u is witnessed by rescaling every variable by sqrt(lambda).
StamPoint scale_point(const StamPoint& p, double lambda);

// Coordinatewise weighted geometric mean a(s)^w b(s)^{1-w} with
// w = m d / (m d + l d'), witnessed by stacking m copies of a's variables
// with l copies of b's. Requires m, l >= 1 and positive coordinates.
StamPoint stack_points(const StamPoint& a, const StamPoint& b, int m, int l);

struct StackingWeights {
  long long m = 0, l = 0;
  Rational lambda;  // m d / (m d + l d') = p / (p + q) exactly
};

// m = p d', l = q d realizes lambda = p/(p+q) for dimensions d, d'.
StackingWeights rational_stacking_weights(int d, int dprime, long long p,
                                          long long q);

// Smallest-denominator style approximation |lambda - target| < tol.
StackingWeights approximate_stacking_weights(int d, int dprime, double target,
                                             double tol);

struct Dim2RayParams {
  double dx_rel = 1e-3;        // grid step relative to the scale sqrt(u1)
  double bisect_tol = 1e-6;    // nats, for the smoothing root-find
  double entropy_margin = 1.0; // extra nats demanded of the pair-sum target
  int max_weights = 12;
  std::size_t max_points = 40'000'000;
};

struct Dim2RayResult {
  GridDensity x, y;
  StamPoint achieved;            // (N(X), N(Y), N(X+Y)) measured on the grids
  double smoothing_variance = 0.0;
  int weight_count = 0;          // dyadic weights used (0 on the fast path)
  bool gaussian_fast_path = false;
  bool swapped = false;          // construction ran with the roles exchanged
};

// Constructs independent X, Y with N(X) ~ u1, N(Y) ~ u2 and N(X+Y) >= c:
// Gaussians when u1 + u2 >= c, otherwise the dyadic-mixture construction
// with a Gaussian-smoothing root-find for the larger coordinate.
Dim2RayResult dim2_ray_construct(double u1, double u2, double c,
                                 const Dim2RayParams& params = {});

struct Dim3GapReport {
  double a = 0.0, b = 0.0, c = 0.0;
  double fsa_ray_min = 0.0;  // fractional superadditivity allows [a+b+c, inf)
  double stam_value = 0.0;   // pairwise EPI equalities force exactly a+b+c
  SetFunction witness_nu;    // proportional d=1 Gaussian witness
  double witness_max_error = 0.0;  // worst of the six defining equalities
  bool witness_ok = false;
  EpiEqualityReport witness_diag;
};

// With all three pairwise sums additive, the admissible triple-sum value
// collapses to the single point a+b+c, strictly inside the FSA-side ray.
Dim3GapReport dim3_gap_report(double a, double b, double c);

// Partial weighted means S_n = sum c_k b_k / sum c_k for weights growing at
// least geometrically (c_k >= alpha c_{k-1}, alpha > 1); S_n converges to
// the limit of b.
std::vector<double> weighted_cesaro(std::span<const double> b,
                                    std::span<const double> c);

struct NiProbeStep {
  double epower = 0.0;
  double fisher = 0.0;
  double ni = 0.0;
};

// Standardized self-convolution walk f -> (f * f)(sqrt 2 x) sqrt 2; reports
// the N, I, N*I sequence, which drifts down toward 2 pi e.
std::vector<NiProbeStep> ni_monotonicity_probe(const GridDensity& f, int k);

}  // namespace stam
