#include "stam/density1d.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace stam {

namespace {

constexpr double kSupportFloor = 1e-300;  // underflow guard for p log p

double trapezoid(const std::vector<double>& y, double dx) {
  if (y.size() < 2) return 0.0;
  double sum = 0.0;
  for (double v : y) sum += v;
  sum -= 0.5 * (y.front() + y.back());
  return sum * dx;
}

void require_same_dx(const GridDensity& f, const GridDensity& g) {
  if (std::abs(f.dx() - g.dx()) > 1e-12 * f.dx())
    throw std::invalid_argument("grid steps differ");
}

}  // namespace

GridDensity::GridDensity(double x0, double dx, std::vector<double> pdf)
    : x0_(x0), dx_(dx), pdf_(std::move(pdf)) {
  if (!(dx_ > 0.0)) throw std::invalid_argument("dx must be positive");
  if (pdf_.size() < 2) throw std::invalid_argument("density needs >= 2 samples");
  for (double v : pdf_)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("pdf values must be finite and >= 0");
  const double m = trapezoid(pdf_, dx_);
  if (std::abs(m - 1.0) > 1e-6)
    throw std::invalid_argument("density mass " + std::to_string(m) +
                                " deviates from 1 by more than 1e-6");
}

GridDensity GridDensity::gaussian(double variance, double dx, double mean) {
  if (!(variance > 0.0)) throw std::invalid_argument("variance must be positive");
  const double sigma = std::sqrt(variance);
  const double half = 12.0 * sigma;
  const std::size_t k = static_cast<std::size_t>(std::ceil(half / dx));
  std::vector<double> pdf(2 * k + 1);
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * variance);
  for (std::size_t i = 0; i < pdf.size(); ++i) {
    const double x = (static_cast<double>(i) - static_cast<double>(k)) * dx;
    pdf[i] = norm * std::exp(-x * x / (2.0 * variance));
  }
  const double m = trapezoid(pdf, dx);
  for (double& v : pdf) v /= m;
  return GridDensity(mean - static_cast<double>(k) * dx, dx, std::move(pdf));
}

GridDensity GridDensity::uniform(double a, double b, double dx) {
  if (!(b > a)) throw std::invalid_argument("uniform needs b > a");
  const std::size_t k =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::llround((b - a) / dx)));
  const double step = (b - a) / static_cast<double>(k);  // edges on half-steps
  std::vector<double> pdf(k + 2, 1.0 / (b - a));
  pdf.front() = 0.0;
  pdf.back() = 0.0;
  return GridDensity(a - 0.5 * step, step, std::move(pdf));
}

GridDensity GridDensity::laplace(double scale, double dx) {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  const double half = 40.0 * scale;
  const std::size_t k = static_cast<std::size_t>(std::ceil(half / dx));
  std::vector<double> pdf(2 * k + 1);
  for (std::size_t i = 0; i < pdf.size(); ++i) {
    const double x = (static_cast<double>(i) - static_cast<double>(k)) * dx;
    pdf[i] = std::exp(-std::abs(x) / scale) / (2.0 * scale);
  }
  const double m = trapezoid(pdf, dx);
  for (double& v : pdf) v /= m;
  return GridDensity(-static_cast<double>(k) * dx, dx, std::move(pdf));
}

double GridDensity::mass() const { return trapezoid(pdf_, dx_); }

double GridDensity::mean() const {
  std::vector<double> xf(pdf_.size());
  for (std::size_t i = 0; i < pdf_.size(); ++i)
    xf[i] = (x0_ + dx_ * static_cast<double>(i)) * pdf_[i];
  return trapezoid(xf, dx_);
}

double GridDensity::variance() const {
  const double mu = mean();
  std::vector<double> x2f(pdf_.size());
  for (std::size_t i = 0; i < pdf_.size(); ++i) {
    const double x = x0_ + dx_ * static_cast<double>(i) - mu;
    x2f[i] = x * x * pdf_[i];
  }
  return trapezoid(x2f, dx_);
}

GridDensity GridDensity::scaled(double b) const {
  if (!(b > 0.0)) throw std::invalid_argument("scale factor must be positive");
  std::vector<double> pdf(pdf_);
  for (double& v : pdf) v /= b;
  return GridDensity(x0_ * b, dx_ * b, std::move(pdf));
}

double entropy(const GridDensity& f) {
  std::vector<double> integrand(f.size());
  const auto& p = f.pdf();
  for (std::size_t i = 0; i < p.size(); ++i)
    integrand[i] = p[i] > kSupportFloor ? -p[i] * std::log(p[i]) : 0.0;
  return trapezoid(integrand, f.dx());
}

double entropy_power(const GridDensity& f) {
  return std::exp(2.0 * entropy(f));
}

namespace {

// FFTW planning is not thread-safe; executions here stay under one lock
// since desk-scale transforms are cheap anyway.
std::mutex g_fftw_mutex;

std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  const std::size_t n = a.size() + b.size() - 1;
  std::size_t m = 1;
  while (m < n) m <<= 1;
  std::lock_guard<std::mutex> lock(g_fftw_mutex);
  double* in = fftw_alloc_real(m);
  fftw_complex* fa = fftw_alloc_complex(m / 2 + 1);
  fftw_complex* fb = fftw_alloc_complex(m / 2 + 1);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, fa,
                                       FFTW_ESTIMATE);
  std::fill(in, in + m, 0.0);
  std::copy(a.begin(), a.end(), in);
  fftw_execute(fwd);
  std::fill(in, in + m, 0.0);
  std::copy(b.begin(), b.end(), in);
  fftw_execute_dft_r2c(fwd, in, fb);
  for (std::size_t i = 0; i < m / 2 + 1; ++i) {
    const double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
    const double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
    fa[i][0] = re / static_cast<double>(m);
    fa[i][1] = im / static_cast<double>(m);
  }
  fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(m), fa, in,
                                       FFTW_ESTIMATE);
  fftw_execute(bwd);
  std::vector<double> out(in, in + n);
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(in);
  fftw_free(fa);
  fftw_free(fb);
  return out;
}

}  // namespace

GridDensity convolve(const GridDensity& f, const GridDensity& g) {
  require_same_dx(f, g);
  std::vector<double> out = fft_convolve(f.pdf(), g.pdf());
  const double dx = f.dx();
  for (double& v : out) v = std::max(0.0, v * dx);
  const double expected = f.mass() * g.mass();
  const double m = trapezoid(out, dx);
  const double correction = std::abs(m / expected - 1.0);
  if (correction >= 1e-6)
    throw std::runtime_error("convolution mass drift " +
                             std::to_string(correction));
  for (double& v : out) v /= m;
  GridDensity res(f.x0() + g.x0(), dx, std::move(out));
  res.renorm_ = correction;
  return res;
}

namespace {

struct SupportRange {
  std::size_t lo = 0, hi = 0;  // first/last index meaningfully above zero
};

// Support delimited by a relative threshold, so FFT noise floors in the far
// tails (clamped to zero by convolve) do not count as interior holes.
SupportRange numerical_support(const GridDensity& f) {
  const auto& p = f.pdf();
  const double thr = 1e-13 * *std::max_element(p.begin(), p.end());
  if (!(thr > 0.0)) throw std::domain_error("density is numerically zero");
  SupportRange r;
  r.lo = 0;
  while (p[r.lo] <= thr) ++r.lo;
  r.hi = p.size() - 1;
  while (p[r.hi] <= thr) --r.hi;
  return r;
}

SupportRange checked_support(const GridDensity& f) {
  const SupportRange r = numerical_support(f);
  const auto& p = f.pdf();
  for (std::size_t i = r.lo; i <= r.hi; ++i)
    if (p[i] <= kSupportFloor)
      throw std::domain_error(
          "density vanishes inside its support; derivative forms unstable");
  return r;
}

}  // namespace

double fisher_information(const GridDensity& f) {
  const SupportRange r = checked_support(f);
  const auto& p = f.pdf();
  const double dx = f.dx();
  std::vector<double> u(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) u[i] = std::sqrt(p[i]);
  std::vector<double> integrand(r.hi - r.lo + 1, 0.0);
  for (std::size_t i = r.lo; i <= r.hi; ++i) {
    double du;
    if (i == 0)
      du = (u[1] - u[0]) / dx;
    else if (i + 1 == p.size())
      du = (u[i] - u[i - 1]) / dx;
    else
      du = (u[i + 1] - u[i - 1]) / (2.0 * dx);
    integrand[i - r.lo] = 4.0 * du * du;
  }
  return trapezoid(integrand, dx);
}

double fisher_information_ratio_form(const GridDensity& f) {
  const SupportRange r = checked_support(f);
  const auto& p = f.pdf();
  const double dx = f.dx();
  std::vector<double> integrand(r.hi - r.lo + 1, 0.0);
  for (std::size_t i = std::max<std::size_t>(r.lo, 1);
       i <= r.hi && i + 1 < p.size(); ++i) {
    const double dp = (p[i + 1] - p[i - 1]) / (2.0 * dx);
    integrand[i - r.lo] = dp * dp / p[i];
  }
  return trapezoid(integrand, dx);
}

double ni_product(const GridDensity& f) {
  return entropy_power(f) * fisher_information(f);
}

DeBruijnReport de_bruijn_check(const GridDensity& f,
                               std::span<const double> eps_list) {
  DeBruijnReport rep;
  rep.entropy = entropy(f);
  rep.epower = std::exp(2.0 * rep.entropy);
  rep.fisher = fisher_information(f);
  rep.half_fisher = 0.5 * rep.fisher;
  rep.ni = rep.epower * rep.fisher;
  for (double eps : eps_list) {
    if (eps < 4.0 * f.dx() * f.dx())
      throw std::invalid_argument(
          "eps too small for the grid: need eps >= 4 dx^2");
    const GridDensity smoothed =
        convolve(f, GridDensity::gaussian(eps, f.dx()));
    DeBruijnRow row;
    row.eps = eps;
    const double h = entropy(smoothed);
    row.slope_h = (h - rep.entropy) / eps;
    row.slope_n = (std::exp(2.0 * h) - rep.epower) / eps;
    rep.rows.push_back(row);
  }
  return rep;
}

SetFunction nu_from_densities(std::span<const GridDensity> fs) {
  const int n = static_cast<int>(fs.size());
  require_ground_size(n);
  if (n > 8) throw std::invalid_argument("nu from densities capped at n = 8");
  for (int i = 1; i < n; ++i) require_same_dx(fs[0], fs[i]);
  const SubsetMask top = full_mask(n);
  std::vector<GridDensity> cache;
  cache.reserve(top);
  std::vector<double> values(top);
  for (SubsetMask s = 1; s <= top; ++s) {
    const SubsetMask low = s & (~s + 1u);
    const int k = std::countr_zero(low);
    if (s == low)
      cache.push_back(fs[k]);
    else
      cache.push_back(convolve(cache[(s ^ low) - 1], fs[k]));
    values[s - 1] = entropy_power(cache.back());
  }
  return SetFunction(n, std::move(values));
}

double q_sup_gap(const GridDensity& x, const GridDensity& y,
                 const GridDensity& z) {
  require_same_dx(x, y);
  require_same_dx(x, z);
  const GridDensity xy = convolve(x, y);
  const GridDensity xz = convolve(x, z);
  const GridDensity xyz = convolve(xy, z);
  return entropy_power(xyz) + entropy_power(x) - entropy_power(xy) -
         entropy_power(xz);
}

GridDensity smoothed_laplace(double scale, double smoothing_variance,
                             double dx) {
  return convolve(GridDensity::laplace(scale, dx),
                  GridDensity::gaussian(smoothing_variance, dx));
}

}  // namespace stam
