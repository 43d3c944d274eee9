#include "stam/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stam {

namespace {

double xlogx(double t) { return t > 1e-300 ? t * std::log(t) : 0.0; }

// Antiderivative of t ln t, for exact entropy of linear stretches.
double primitive(double t) {
  if (t <= 1e-300) return 0.0;
  return 0.5 * t * t * std::log(t) - 0.25 * t * t;
}

// integral of p ln p over [x0, x1] where p is linear from y0 to y1.
double linear_plogp(double x0, double x1, double y0, double y1) {
  const double len = x1 - x0;
  if (len <= 0.0) return 0.0;
  const double scale = std::max(std::abs(y0), std::abs(y1));
  if (scale <= 1e-300) return 0.0;
  if (std::abs(y1 - y0) <= 1e-12 * scale)
    return len * xlogx(0.5 * (y0 + y1));
  const double slope = (y1 - y0) / len;
  return (primitive(y1) - primitive(y0)) / slope;
}

double std_normal_pdf(double z) {
  static const double kInvSqrt2Pi = 0.3989422804014327;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / M_SQRT2); }

}  // namespace

IntervalMixture::IntervalMixture(std::vector<Interval> parts)
    : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("mixture needs >= 1 interval");
  double total = 0.0;
  for (const Interval& p : parts_) {
    if (!(p.width > 0.0)) throw std::invalid_argument("interval width must be > 0");
    if (!(p.weight > 0.0)) throw std::invalid_argument("interval weight must be > 0");
    total += p.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("interval weights must sum to 1");
  std::sort(parts_.begin(), parts_.end(),
            [](const Interval& a, const Interval& b) { return a.left < b.left; });
  for (std::size_t i = 1; i < parts_.size(); ++i)
    if (parts_[i - 1].left + parts_[i - 1].width >
        parts_[i].left + 1e-12 * std::abs(parts_[i].left))
      throw std::invalid_argument("intervals overlap");
}

IntervalMixture IntervalMixture::dyadic(std::span<const double> a) {
  double total = 0.0;
  for (double w : a) {
    if (w < 0.0) throw std::invalid_argument("dyadic weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("dyadic weights must sum to 1");
  std::vector<Interval> parts;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] <= 0.0) continue;
    const double base = std::ldexp(1.0, static_cast<int>(k) + 1);  // 2^{k+1}
    parts.push_back({base, a[k], a[k]});
  }
  if (parts.empty()) throw std::invalid_argument("all dyadic weights are zero");
  return IntervalMixture(std::move(parts));
}

double IntervalMixture::pdf(double x) const {
  for (const Interval& p : parts_) {
    if (x < p.left) return 0.0;
    if (x < p.left + p.width) return p.weight / p.width;
  }
  return 0.0;
}

double IntervalMixture::entropy() const {
  double h = 0.0;
  for (const Interval& p : parts_) h += p.weight * std::log(p.width / p.weight);
  return h;
}

double IntervalMixture::min_left() const { return parts_.front().left; }

double IntervalMixture::max_right() const {
  double r = parts_.front().left + parts_.front().width;
  for (const Interval& p : parts_) r = std::max(r, p.left + p.width);
  return r;
}

IntervalMixture IntervalMixture::scaled(double b) const {
  if (!(b > 0.0)) throw std::invalid_argument("scale factor must be positive");
  std::vector<Interval> parts = parts_;
  for (Interval& p : parts) {
    p.left *= b;
    p.width *= b;
  }
  return IntervalMixture(std::move(parts));
}

GridDensity IntervalMixture::to_grid(double dx) const {
  if (!(dx > 0.0)) throw std::invalid_argument("dx must be positive");
  const double base = min_left();
  for (const Interval& p : parts_) {
    for (double edge : {p.left, p.left + p.width}) {
      const double steps = (edge - base) / dx;
      if (std::abs(steps - std::llround(steps)) > 1e-6)
        throw std::invalid_argument(
            "dx does not align with interval edges; grid would not be exact");
    }
  }
  const double x0 = base - 1.5 * dx;  // every edge lands between samples
  const std::size_t count =
      static_cast<std::size_t>(std::ceil((max_right() - x0) / dx)) + 2;
  std::vector<double> pdf_vals(count);
  for (std::size_t k = 0; k < count; ++k)
    pdf_vals[k] = pdf(x0 + dx * static_cast<double>(k));
  return GridDensity(x0, dx, std::move(pdf_vals));
}

PiecewiseLinear::PiecewiseLinear(std::vector<Segment> segments)
    : segs_(std::move(segments)) {
  if (segs_.empty()) throw std::invalid_argument("need >= 1 segment");
  for (Segment& s : segs_) {
    if (!std::isfinite(s.x0) || !std::isfinite(s.x1) || !std::isfinite(s.y0) ||
        !std::isfinite(s.y1))
      throw std::invalid_argument("non-finite segment");
    if (!(s.x1 > s.x0))
      throw std::invalid_argument("segment must have positive length");
    if (s.y0 < -1e-12 || s.y1 < -1e-12)
      throw std::invalid_argument("negative density segment");
    s.y0 = std::max(s.y0, 0.0);
    s.y1 = std::max(s.y1, 0.0);
  }
  std::sort(segs_.begin(), segs_.end(),
            [](const Segment& a, const Segment& b) { return a.x0 < b.x0; });
  for (std::size_t i = 1; i < segs_.size(); ++i)
    if (segs_[i].x0 < segs_[i - 1].x1 - 1e-12)
      throw std::invalid_argument("segments overlap");
}

PiecewiseLinear PiecewiseLinear::steps(const IntervalMixture& f) {
  std::vector<Segment> segs;
  for (const Interval& p : f.parts()) {
    const double h = p.weight / p.width;
    segs.push_back({p.left, p.left + p.width, h, h});
  }
  return PiecewiseLinear(std::move(segs));
}

double PiecewiseLinear::mass() const {
  double m = 0.0;
  for (const Segment& s : segs_)
    m += 0.5 * (s.y0 + s.y1) * (s.x1 - s.x0);
  return m;
}

double PiecewiseLinear::pdf(double x) const {
  for (const Segment& s : segs_) {
    if (x < s.x0) return 0.0;
    if (x <= s.x1) {
      const double t = (x - s.x0) / (s.x1 - s.x0);
      return s.y0 + t * (s.y1 - s.y0);
    }
  }
  return 0.0;
}

double PiecewiseLinear::entropy_exact() const {
  double h = 0.0;
  for (const Segment& s : segs_) h -= linear_plogp(s.x0, s.x1, s.y0, s.y1);
  return h;
}

double PiecewiseLinear::smoothed_pdf(double x, double var) const {
  if (var <= 0.0) return pdf(x);
  const double sigma = std::sqrt(var);
  double acc = 0.0;
  for (const Segment& s : segs_) {
    if (s.y0 == 0.0 && s.y1 == 0.0) continue;
    if (x < s.x0 - 12.0 * sigma || x > s.x1 + 12.0 * sigma) continue;
    const double slope = (s.y1 - s.y0) / (s.x1 - s.x0);
    const double intercept = s.y0 - slope * s.x0;
    const double za = (s.x0 - x) / sigma;
    const double zb = (s.x1 - x) / sigma;
    acc += (slope * x + intercept) * (std_normal_cdf(zb) - std_normal_cdf(za)) +
           slope * sigma * (std_normal_pdf(za) - std_normal_pdf(zb));
  }
  return std::max(acc, 0.0);
}

double PiecewiseLinear::smoothed_entropy(double var) const {
  if (var <= 0.0) return entropy_exact();
  const double sigma = std::sqrt(var);

  // Quadrature windows around segment endpoints, where smoothing acts;
  // elsewhere the smoothed density matches the linear piece to ~e^{-72}
  // and integrates in closed form.
  struct Zone {
    double lo, hi;
  };
  std::vector<double> edges;
  for (const Segment& s : segs_) {
    edges.push_back(s.x0);
    edges.push_back(s.x1);
  }
  std::sort(edges.begin(), edges.end());
  const double reach = 12.0 * sigma;
  std::vector<Zone> zones;
  for (double e : edges) {
    if (!zones.empty() && e - reach <= zones.back().hi)
      zones.back().hi = e + reach;
    else
      zones.push_back({e - reach, e + reach});
  }

  double h = 0.0;
  const double dq = sigma / 16.0;
  for (const Zone& z : zones) {
    const std::size_t steps =
        static_cast<std::size_t>(std::ceil((z.hi - z.lo) / dq));
    const double step = (z.hi - z.lo) / static_cast<double>(steps);
    double acc = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
      const double x = z.lo + step * static_cast<double>(k);
      const double g = smoothed_pdf(x, var);
      double term = g > 1e-300 ? -g * std::log(g) : 0.0;
      if (k == 0 || k == steps) term *= 0.5;
      acc += term;
    }
    h += acc * step;
  }
  // Exact linear stretches between zones.
  for (std::size_t i = 0; i + 1 < zones.size(); ++i) {
    const double a = zones[i].hi;
    const double b = zones[i + 1].lo;
    if (b <= a) continue;
    h -= linear_plogp(a, b, pdf(a), pdf(b));
  }
  return h;
}

PiecewiseLinear PiecewiseLinear::self_convolution(const IntervalMixture& f) {
  // Convolution of two uniform intervals is a trapezoid; sum them all.
  struct Component {
    double lo, w_min, w_max, peak;
    double eval(double x) const {
      const double t = x - lo;
      if (t <= 0.0 || t >= w_min + w_max) return 0.0;
      if (t < w_min) return peak * t / w_min;
      if (t <= w_max) return peak;
      return peak * (w_min + w_max - t) / w_min;
    }
  };
  const auto& parts = f.parts();
  std::vector<Component> comps;
  std::vector<double> breakpoints;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i; j < parts.size(); ++j) {
      Component c;
      c.lo = parts[i].left + parts[j].left;
      c.w_min = std::min(parts[i].width, parts[j].width);
      c.w_max = std::max(parts[i].width, parts[j].width);
      const double mass = parts[i].weight * parts[j].weight * (i == j ? 1.0 : 2.0);
      c.peak = mass / c.w_max;
      comps.push_back(c);
      breakpoints.push_back(c.lo);
      breakpoints.push_back(c.lo + c.w_min);
      breakpoints.push_back(c.lo + c.w_max);
      breakpoints.push_back(c.lo + c.w_min + c.w_max);
    }
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<double> xs;
  for (double x : breakpoints)
    if (xs.empty() || x - xs.back() > 1e-12 * std::max(1.0, std::abs(x)))
      xs.push_back(x);
  std::vector<Segment> segs;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    double y0 = 0.0, y1 = 0.0;
    for (const Component& c : comps) {
      y0 += c.eval(xs[i - 1]);
      y1 += c.eval(xs[i]);
    }
    if (y0 == 0.0 && y1 == 0.0) continue;  // gap between lumps
    segs.push_back({xs[i - 1], xs[i], y0, y1});
  }
  PiecewiseLinear out(std::move(segs));
  if (std::abs(out.mass() - 1.0) > 1e-9)
    throw std::runtime_error("self-convolution mass drifted from 1");
  return out;
}

BcWeights::BcWeights(std::vector<double> weights) : a(std::move(weights)) {
  if (a.empty()) throw std::invalid_argument("need >= 1 weight");
  double total = 0.0;
  for (double w : a) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("weights must be finite and >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to 1");
}

std::vector<double> BcWeights::partial_sums() const {
  std::vector<double> s(a.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a[i];
    s[i] = acc;
  }
  return s;
}

double bc_entropy_formula(const BcWeights& w) {
  const std::vector<double>& a = w.a;
  const std::vector<double> s = w.partial_sums();
  const double ln2 = std::log(2.0);
  double h = -2.0 * ln2;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) continue;
    const double n = static_cast<double>(k + 1);
    h += 2.0 * ln2 * s[k] * a[k];
    h += (n - 0.5) * a[k] * a[k];
    h += a[k] * a[k] * std::log(1.0 / a[k]);
    if (k >= 1) h += 2.0 * s[k - 1] * a[k] * std::log(1.0 / a[k]);
  }
  return h;
}

double bc_selfconv_entropy_exact(const BcWeights& w) {
  if (w.a.size() > 12)
    throw std::invalid_argument("exact self-convolution oracle capped at N = 12");
  const IntervalMixture mix = IntervalMixture::dyadic(w.a);
  // Pair-sum supports are disjoint for dyadic positions; validate anyway.
  const auto& parts = mix.parts();
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i; j < parts.size(); ++j)
      spans.push_back({parts[i].left + parts[j].left,
                       parts[i].left + parts[j].left + parts[i].width +
                           parts[j].width});
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i)
    if (spans[i].first < spans[i - 1].second - 1e-12)
      throw std::runtime_error("self-convolution lumps overlap unexpectedly");
  return PiecewiseLinear::self_convolution(mix).entropy_exact();
}

}  // namespace stam
