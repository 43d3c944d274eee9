#include "stam/gaussian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>

namespace stam {

namespace {

constexpr int kMaxDim = 64;

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

PdMatrix::PdMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    throw std::invalid_argument("covariance matrix must be square");
  if (m_.rows() > kMaxDim)
    throw std::invalid_argument("dimension capped at 64");
  const double scale = m_.cwiseAbs().maxCoeff();
  if (!m_.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("matrix is not symmetric");
  m_ = 0.5 * (m_ + m_.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(m_);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("matrix is not positive definite");
}

PdMatrix PdMatrix::identity(int d, double scale) {
  return PdMatrix(scale * Eigen::MatrixXd::Identity(d, d));
}

PdMatrix PdMatrix::diagonal(const std::vector<double>& entries) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return PdMatrix(std::move(m));
}

GaussianEnsemble::GaussianEnsemble(int dim, std::vector<PdMatrix> ms)
    : d(dim), matrices(std::move(ms)) {
  if (matrices.empty()) throw std::invalid_argument("ensemble needs n >= 1");
  for (const PdMatrix& m : matrices)
    if (m.dim() != d)
      throw std::invalid_argument("ensemble matrices must share the dimension");
}

double detroot(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("subset covariance sum is not positive definite");
  const double d = static_cast<double>(m.rows());
  double logdet = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    logdet += std::log(llt.matrixL()(i, i));
  return std::exp(2.0 * logdet / d);
}

double entropy_power_gaussian(const PdMatrix& k) {
  return kTwoPiE * detroot(k.mat());
}

SetFunction nu_gaussian(const GaussianEnsemble& ens, bool include_constant) {
  const int n = ens.size();
  require_ground_size(n);
  if (n > 16) throw std::invalid_argument("ensemble size capped at 16");
  const SubsetMask top = full_mask(n);
  // sum[mask] built by peeling the lowest bit, so each subset sum is one add.
  std::vector<Eigen::MatrixXd> sums(top + 1);
  std::vector<double> values(top);
  const double constant = include_constant ? kTwoPiE : 1.0;
  for (SubsetMask s = 1; s <= top; ++s) {
    const SubsetMask low = s & (~s + 1u);
    const int k = std::countr_zero(low);
    sums[s] = (s == low) ? ens.matrices[k].mat()
                         : Eigen::MatrixXd(sums[s ^ low] + ens.matrices[k].mat());
    values[s - 1] = constant * detroot(sums[s]);
  }
  return SetFunction(n, std::move(values));
}

namespace {

Eigen::MatrixXd combination(const GaussianEnsemble& ens, const WeightVector& x) {
  if (x.size() != ens.size())
    throw std::invalid_argument("weight vector length must equal ensemble size");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ens.d, ens.d);
  for (int k = 0; k < ens.size(); ++k) m += x(k) * ens.matrices[k].mat();
  return m;
}

struct MixedPartialTerms {
  double det = 0.0;            // det(M)
  double detroot_val = 0.0;    // det(M)^{1/d}
  double tr_i = 0.0, tr_j = 0.0, tr_ij = 0.0;
};

MixedPartialTerms mixed_partial_terms(const GaussianEnsemble& ens,
                                      const WeightVector& x, int i, int j) {
  if (i == j) throw std::invalid_argument("mixed partial needs i != j");
  if (i < 1 || i > ens.size() || j < 1 || j > ens.size())
    throw std::invalid_argument("matrix index out of range");
  const Eigen::MatrixXd m = combination(ens, x);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("weighted combination is not positive definite");
  const Eigen::MatrixXd ai = llt.solve(ens.matrices[i - 1].mat());
  const Eigen::MatrixXd aj = llt.solve(ens.matrices[j - 1].mat());
  MixedPartialTerms t;
  double logdet = 0.0;
  for (int r = 0; r < m.rows(); ++r) logdet += std::log(llt.matrixL()(r, r));
  t.det = std::exp(2.0 * logdet);
  t.detroot_val = std::exp(2.0 * logdet / m.rows());
  t.tr_i = ai.trace();
  t.tr_j = aj.trace();
  t.tr_ij = (aj * ai).trace();
  return t;
}

}  // namespace

double detroot_mixed_partial(const GaussianEnsemble& ens, const WeightVector& x,
                             int i, int j) {
  const MixedPartialTerms t = mixed_partial_terms(ens, x, i, j);
  const double d = ens.d;
  return (t.detroot_val / d) * (t.tr_i * t.tr_j / d - t.tr_ij);
}

double det_mixed_partial(const GaussianEnsemble& ens, const WeightVector& x,
                         int i, int j) {
  const MixedPartialTerms t = mixed_partial_terms(ens, x, i, j);
  return t.det * (t.tr_i * t.tr_j - t.tr_ij);
}

PropertyReport check_det_supermodular(const PdMatrix& a, const PdMatrix& b,
                                      const PdMatrix& c, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (a.dim() != b.dim() || a.dim() != c.dim())
    throw std::invalid_argument("matrices must share the dimension");
  auto det = [](const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefinite("sum is not positive definite");
    double logdet = 0.0;
    for (int i = 0; i < m.rows(); ++i) logdet += std::log(llt.matrixL()(i, i));
    return std::exp(2.0 * logdet);
  };
  const double lhs = det(a.mat() + b.mat() + c.mat()) + det(a.mat());
  const double rhs = det(a.mat() + b.mat()) + det(a.mat() + c.mat());
  PropertyReport rep;
  rep.property = "determinant-supermodular";
  rep.margin = lhs - rhs;
  rep.holds = rep.margin >= -tol;
  rep.details["lhs"] = lhs;
  rep.details["rhs"] = rhs;
  if (!rep.holds) rep.certificate = SubsetPairCert{0b011, 0b101};
  return rep;
}

CounterexampleResult supermodularity_counterexample(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  GaussianEnsemble ens(2, {PdMatrix::diagonal({2.0, 0.5}),
                           PdMatrix::diagonal({0.5, 2.0}),
                           PdMatrix::identity(2, eps)});
  CounterexampleResult res{ens, nu_gaussian(ens), 0.0};
  // gap = nu(12) + nu(13) - nu(1) - nu(123) = 2.5 + sqrt(1+2.5 eps+eps^2)
  //                                            - 1 - (2.5+eps)
  res.gap = res.nu.value(0b011) + res.nu.value(0b101) - res.nu.value(0b001) -
            res.nu.value(0b111);
  return res;
}

namespace {

// Largest violation of v(s)+v(t) <= v(s|t)+v(s&t); positive means violated.
double violation_gap(const SetFunction& v, SubsetPairCert* worst) {
  const PropertyReport rep = check_supermodular(v, 0.0);
  if (worst) {
    if (rep.certificate)
      *worst = std::get<SubsetPairCert>(*rep.certificate);
    else
      *worst = {};
  }
  return -rep.margin;
}

PdMatrix random_pd(std::mt19937_64& rng, int d, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = normal(rng);
  Eigen::MatrixXd m = g * g.transpose() +
                      (0.05 * scale * scale) * Eigen::MatrixXd::Identity(d, d);
  return PdMatrix(std::move(m));
}

GaussianEnsemble embedded_counterexample(int d, int n) {
  std::vector<PdMatrix> ms;
  auto embed = [d](std::initializer_list<double> lead, double fill) {
    std::vector<double> diag(lead);
    diag.resize(d, fill);
    return PdMatrix::diagonal(diag);
  };
  ms.push_back(embed({2.0, 0.5}, 1.0));
  ms.push_back(embed({0.5, 2.0}, 1.0));
  ms.push_back(PdMatrix::identity(d, 0.1));
  for (int k = 3; k < n; ++k) ms.push_back(PdMatrix::identity(d, 0.05));
  return GaussianEnsemble(d, std::move(ms));
}

}  // namespace

SearchResult search_supermodularity_violation(int d, int n, std::uint64_t seed,
                                              int iters, int threads) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  require_ground_size(n);
  if (n < 3) throw std::invalid_argument("supermodularity search needs n >= 3");
  if (iters < 1) throw std::invalid_argument("iters must be >= 1");

  const int starts = 8;
  const int per_start = std::max(1, iters / starts);

  auto run_start = [&](int start_idx) {
    std::uint64_t state = seed;
    for (int k = 0; k <= start_idx; ++k) splitmix64(state);
    std::mt19937_64 rng(splitmix64(state));
    std::vector<PdMatrix> ms;
    if (start_idx == 0 && d >= 2) {
      ms = embedded_counterexample(d, n).matrices;
    } else {
      const double scale = (start_idx % 2 == 0) ? 1.0 : 0.3;
      for (int k = 0; k < n; ++k) ms.push_back(random_pd(rng, d, scale));
    }
    GaussianEnsemble current(d, ms);
    SubsetPairCert worst;
    double best_gap = violation_gap(nu_gaussian(current), &worst);
    GaussianEnsemble best = current;
    SubsetPairCert best_worst = worst;
    double step = 0.05;
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int it = 0; it < per_start; ++it) {
      std::vector<PdMatrix> trial = best.matrices;
      const int k = pick(rng);
      Eigen::MatrixXd delta(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) delta(r, c) = normal(rng);
      delta = 0.5 * (delta + delta.transpose());
      Eigen::MatrixXd cand = trial[k].mat() + step * delta;
      Eigen::LLT<Eigen::MatrixXd> llt(cand);
      if (llt.info() != Eigen::Success) {
        step *= 0.7;
        continue;
      }
      trial[k] = PdMatrix(std::move(cand));
      GaussianEnsemble trial_ens(d, std::move(trial));
      SubsetPairCert trial_worst;
      const double gap = violation_gap(nu_gaussian(trial_ens), &trial_worst);
      if (gap > best_gap) {
        best_gap = gap;
        best = trial_ens;
        best_worst = trial_worst;
        step = std::min(0.5, step * 1.3);
      } else {
        step = std::max(1e-4, step * 0.95);
      }
    }
    return SearchResult{best, best_gap, best_worst, seed, per_start};
  };

  int workers = threads > 0 ? threads : 0;
  if (workers == 0) {
    if (const char* env = std::getenv("STAM_THREADS")) workers = std::atoi(env);
  }
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, starts);

  std::vector<SearchResult> results;
  results.reserve(starts);
  if (workers <= 1) {
    for (int s = 0; s < starts; ++s) results.push_back(run_start(s));
  } else {
    std::vector<std::future<SearchResult>> futs;
    for (int s = 0; s < starts; ++s)
      futs.push_back(std::async(std::launch::async, run_start, s));
    for (int s = 0; s < starts; ++s) results.push_back(futs[s].get());
  }
  // Deterministic reduction: best gap, ties resolved by start order.
  SearchResult best = results[0];
  for (int s = 1; s < starts; ++s)
    if (results[s].gap > best.gap) best = results[s];
  best.iterations = iters;
  return best;
}

EpiEqualityReport epi_equality_diagnostic(const GaussianEnsemble& ens,
                                          double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (ens.size() < 2)
    throw std::invalid_argument("pairwise diagnostic needs n >= 2");
  const SetFunction nu = nu_gaussian(ens);
  EpiEqualityReport rep;
  rep.all_additive = true;
  rep.all_proportional = true;
  const double scale = std::max(nu.full_value(), 1.0);
  for (int i = 1; i <= ens.size(); ++i) {
    for (int j = i + 1; j <= ens.size(); ++j) {
      EpiEqualityReport::PairDiagnostic pd;
      pd.i = i;
      pd.j = j;
      const SubsetMask mi = SubsetMask{1} << (i - 1);
      const SubsetMask mj = SubsetMask{1} << (j - 1);
      pd.additivity_gap = nu.value(mi | mj) - nu.value(mi) - nu.value(mj);
      pd.additive = std::abs(pd.additivity_gap) <= tol * scale;
      const Eigen::MatrixXd& a = ens.matrices[i - 1].mat();
      const Eigen::MatrixXd& b = ens.matrices[j - 1].mat();
      const double lambda = a.trace() / b.trace();
      pd.proportional = (a - lambda * b).cwiseAbs().maxCoeff() <=
                        tol * std::max(1.0, a.cwiseAbs().maxCoeff());
      rep.all_additive = rep.all_additive && pd.additive;
      rep.all_proportional = rep.all_proportional && pd.proportional;
      rep.pairs.push_back(pd);
    }
  }
  double singles = 0.0;
  for (int i = 1; i <= ens.size(); ++i)
    singles += nu.value(SubsetMask{1} << (i - 1));
  rep.total_gap = nu.full_value() - singles;
  return rep;
}

}  // namespace stam
