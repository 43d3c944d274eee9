#include "stam/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stam {

StamPoint stam_point_from_gaussian(const GaussianEnsemble& ens,
                                   bool include_constant) {
  return StamPoint{nu_gaussian(ens, include_constant), ens.d,
                   Provenance::gaussian, ""};
}

StamPoint stam_point_from_densities(std::span<const GridDensity> fs) {
  return StamPoint{nu_from_densities(fs), 1, Provenance::density, ""};
}

StamPoint scale_point(const StamPoint& p, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  StamPoint out{p.u.scaled(lambda), p.dim, p.provenance,
                "rescaled variables by sqrt(" + std::to_string(lambda) + ")"};
  return out;
}

StamPoint stack_points(const StamPoint& a, const StamPoint& b, int m, int l) {
  if (m < 1 || l < 1) throw std::invalid_argument("copy counts must be >= 1");
  if (a.u.ground_size() != b.u.ground_size())
    throw std::invalid_argument("points live on different ground sets");
  const double md = static_cast<double>(m) * a.dim;
  const double ld = static_cast<double>(l) * b.dim;
  const double w = md / (md + ld);
  std::vector<double> vals(a.u.values().size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double av = a.u.values()[i];
    const double bv = b.u.values()[i];
    if (av <= 0.0 || bv <= 0.0)
      throw std::domain_error("zero coordinate: geometric mean degenerates");
    vals[i] = std::pow(av, w) * std::pow(bv, 1.0 - w);
  }
  return StamPoint{SetFunction(a.u.ground_size(), std::move(vals)),
                   m * a.dim + l * b.dim, Provenance::synthetic,
                   "stacked " + std::to_string(m) + "+" + std::to_string(l) +
                       " copies"};
}

StackingWeights rational_stacking_weights(int d, int dprime, long long p,
                                          long long q) {
  if (d < 1 || dprime < 1) throw std::invalid_argument("dimensions must be >= 1");
  if (p < 0 || q < 0 || (p == 0 && q == 0))
    throw std::invalid_argument("need nonnegative p, q, not both zero");
  StackingWeights w;
  w.m = p * dprime;
  w.l = q * d;
  w.lambda = Rational(p, p + q);
  return w;
}

StackingWeights approximate_stacking_weights(int d, int dprime, double target,
                                             double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (target < 0.0 || target > 1.0)
    throw std::invalid_argument("target must lie in [0, 1]");
  const long long k =
      std::max<long long>(1, static_cast<long long>(std::ceil(1.0 / tol)));
  const long long p =
      std::min<long long>(k, std::max<long long>(0, std::llround(target * k)));
  return rational_stacking_weights(d, dprime, p, k - p);
}

namespace {

// Pair-sum entropy of the uniform dyadic mixture with N equal weights:
// 1/2 + ln N - ln 2 (N-1)/N.
double uniform_pair_entropy(int n_weights) {
  return bc_entropy_formula(
      BcWeights(std::vector<double>(n_weights, 1.0 / n_weights)));
}

}  // namespace

Dim2RayResult dim2_ray_construct(double u1, double u2, double c,
                                 const Dim2RayParams& params) {
  if (!(u1 > 0.0) || !(u2 > 0.0))
    throw std::invalid_argument("u1 and u2 must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");

  if (u1 + u2 >= c) {
    // Independent Gaussians already reach the ray point (EPI equality floor).
    const double v1 = u1 / kTwoPiE;
    const double v2 = u2 / kTwoPiE;
    const double dx = std::min(1e-3, std::sqrt(std::min(v1, v2)) / 100.0);
    GridDensity x = GridDensity::gaussian(v1, dx);
    GridDensity y = GridDensity::gaussian(v2, dx);
    const double nx = entropy_power(x);
    const double ny = entropy_power(y);
    const double nxy = entropy_power(convolve(x, y));
    Dim2RayResult res{std::move(x),
                      std::move(y),
                      StamPoint{SetFunction(2, {nx, ny, nxy}), 1,
                                Provenance::density, "gaussian pair"},
                      0.0,
                      0,
                      true,
                      false};
    return res;
  }

  const bool swapped = u2 < u1;
  const double lo = swapped ? u2 : u1;
  const double hi = swapped ? u1 : u2;
  const double b = std::sqrt(lo);  // mixture scale: h(bX) = ln b = (1/2) ln lo

  int n_weights = -1;
  const double needed = 0.5 * std::log(c / lo) + params.entropy_margin;
  for (int n = 1; n <= params.max_weights; ++n) {
    if (uniform_pair_entropy(n) >= needed) {
      n_weights = n;
      break;
    }
  }
  if (n_weights < 0)
    throw std::runtime_error(
        "requested pair-sum entropy power is out of reach at the weight cap");

  const std::vector<double> weights(n_weights, 1.0 / n_weights);
  const IntervalMixture mixture =
      IntervalMixture::dyadic(weights).scaled(b);
  const PiecewiseLinear steps = PiecewiseLinear::steps(mixture);

  // Root-find the smoothing variance: h(X' + sqrt(u) Z) = (1/2) ln hi.
  const double t = 0.5 * std::log(hi);
  const double s = mixture.entropy();
  double u = 0.0;
  if (t - s > params.bisect_tol) {
    double u_lo = 0.0;
    double u_hi = hi / kTwoPiE;  // h >= (1/2) ln(2 pi e u_hi) = t there
    while (steps.smoothed_entropy(u_hi) < t) u_hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (u_lo + u_hi);
      const double h = steps.smoothed_entropy(mid);
      if (std::abs(h - t) < params.bisect_tol) {
        u_lo = u_hi = mid;
        break;
      }
      (h < t ? u_lo : u_hi) = mid;
      if (u_hi - u_lo < 1e-15 * std::max(1.0, u_hi)) break;
    }
    u = 0.5 * (u_lo + u_hi);
  }

  // Shared grid step: divides the interval width exactly; resolves the
  // smoothing kernel when u > 0.
  const double width = b / n_weights;
  long long k = std::max<long long>(
      8, static_cast<long long>(std::ceil(1.0 / (n_weights * params.dx_rel))));
  if (u > 0.0) {
    const double sigma = std::sqrt(u);
    k = std::max(k, static_cast<long long>(std::ceil(4.0 * width / sigma)));
  }
  const double dx = width / static_cast<double>(k);
  const double span = mixture.max_right() - mixture.min_left();
  if (static_cast<double>(span / dx) > static_cast<double>(params.max_points))
    throw std::runtime_error(
        "grid resolution insufficient: requested construction needs too many "
        "samples");

  GridDensity x_grid = mixture.to_grid(dx);
  GridDensity y_grid = [&]() {
    if (u == 0.0) return x_grid;  // independent copy of the same density
    const double sigma = std::sqrt(u);
    const double pad = 12.0 * sigma;
    const long long pad_steps =
        static_cast<long long>(std::ceil(pad / dx)) + 1;
    const double y0 = x_grid.x0() - pad_steps * dx;
    const std::size_t count =
        x_grid.size() + 2 * static_cast<std::size_t>(pad_steps);
    std::vector<double> pdf_vals(count);
    for (std::size_t i = 0; i < count; ++i)
      pdf_vals[i] =
          steps.smoothed_pdf(y0 + dx * static_cast<double>(i), u);
    double m = 0.0;
    for (double v : pdf_vals) m += v;
    m -= 0.5 * (pdf_vals.front() + pdf_vals.back());
    m *= dx;
    for (double& v : pdf_vals) v /= m;
    return GridDensity(y0, dx, std::move(pdf_vals));
  }();

  const double n_lo = entropy_power(x_grid);
  const double n_hi = entropy_power(y_grid);
  const double n_sum = entropy_power(convolve(x_grid, y_grid));

  Dim2RayResult res{
      swapped ? y_grid : x_grid,
      swapped ? x_grid : y_grid,
      StamPoint{SetFunction(2, {swapped ? n_hi : n_lo, swapped ? n_lo : n_hi,
                                n_sum}),
                1, Provenance::density, "dyadic mixture ray construction"},
      u,
      n_weights,
      false,
      swapped};
  return res;
}

Dim3GapReport dim3_gap_report(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
    throw std::invalid_argument("a, b, c must be positive");
  const GaussianEnsemble witness(
      1, {PdMatrix::diagonal({a}), PdMatrix::diagonal({b}),
          PdMatrix::diagonal({c})});
  SetFunction nu = nu_gaussian(witness);
  const double targets[6] = {a, b, c, a + b, b + c, a + c};
  const SubsetMask masks[6] = {0b001, 0b010, 0b100, 0b011, 0b110, 0b101};
  double worst = 0.0;
  for (int i = 0; i < 6; ++i)
    worst = std::max(worst, std::abs(nu.value(masks[i]) - targets[i]));
  const bool ok = worst <= 1e-12 * std::max(1.0, a + b + c);
  return Dim3GapReport{a,     b,
                       c,     a + b + c,
                       a + b + c, std::move(nu),
                       worst, ok,
                       epi_equality_diagnostic(witness, 1e-12)};
}

std::vector<double> weighted_cesaro(std::span<const double> b,
                                    std::span<const double> c) {
  if (b.size() != c.size() || b.empty())
    throw std::invalid_argument("need equal-length nonempty sequences");
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!(c[k] > 0.0))
      throw std::invalid_argument("weights must be strictly positive");
    if (k > 0 && c[k] < (1.0 + 1e-9) * c[k - 1])
      throw std::invalid_argument(
          "weights must grow geometrically: c_k >= alpha c_{k-1}, alpha > 1");
  }
  std::vector<double> s(b.size());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    num += c[k] * b[k];
    den += c[k];
    s[k] = num / den;
  }
  return s;
}

std::vector<NiProbeStep> ni_monotonicity_probe(const GridDensity& f, int k) {
  if (k < 0 || k > 6)
    throw std::invalid_argument("self-convolution count must be in [0, 6]");
  std::vector<NiProbeStep> out;
  GridDensity current = f;
  for (int step = 0; step <= k; ++step) {
    NiProbeStep row;
    row.epower = entropy_power(current);
    row.fisher = fisher_information(current);
    row.ni = row.epower * row.fisher;
    out.push_back(row);
    if (step < k)
      current = convolve(current, current).scaled(1.0 / std::sqrt(2.0));
  }
  return out;
}

}  // namespace stam
