#include "stam/fractional_partition.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <future>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "stam/simplex.hpp"

namespace stam {

WeightingCert FractionalPartition::certificate() const {
  WeightingCert cert;
  cert.n = n;
  cert.weights = weights;
  for (const auto& [mask, r] : exact) cert.exact[mask] = to_string(r);
  return cert;
}

bool is_fractional_partition(const FractionalPartition& beta, WeightMode mode,
                             double tol) {
  require_ground_size(beta.n);
  for (const auto& [mask, w] : beta.weights) {
    require_nonempty_subset(mask, beta.n);
    if (w < 0.0) throw std::invalid_argument("negative partition weight");
  }
  if (mode == WeightMode::exact) {
    if (!beta.is_exact())
      throw std::invalid_argument("exact mode needs rational weights");
    for (int i = 1; i <= beta.n; ++i) {
      Rational row(0);
      for (const auto& [mask, r] : beta.exact)
        if (contains(mask, i)) row += r;
      if (row != Rational(1)) return false;
    }
    return true;
  }
  for (int i = 1; i <= beta.n; ++i) {
    double row = 0.0;
    for (const auto& [mask, w] : beta.weights)
      if (contains(mask, i)) row += w;
    if (std::abs(row - 1.0) > tol) return false;
  }
  return true;
}

FractionalPartition exact_partition(int n,
                                    std::map<SubsetMask, Rational> weights) {
  FractionalPartition beta;
  beta.n = n;
  for (const auto& [mask, r] : weights) {
    require_nonempty_subset(mask, n);
    if (r < Rational(0)) throw std::invalid_argument("negative partition weight");
    if (r == Rational(0)) continue;
    beta.exact[mask] = r;
    beta.weights[mask] = to_double(r);
  }
  return beta;
}

IncidenceMatrix incidence_matrix(int n, const std::vector<SubsetMask>& support) {
  require_ground_size(n);
  for (SubsetMask s : support) require_nonempty_subset(s, n);
  return IncidenceMatrix{n, support};
}

int Multihypergraph::degree(int index) const {
  int deg = 0;
  for (const auto& [mask, count] : counts)
    if (contains(mask, index)) deg += count;
  return deg;
}

int Multihypergraph::max_degree() const {
  int r = 0;
  for (int i = 1; i <= n; ++i) r = std::max(r, degree(i));
  return r;
}

int Multihypergraph::min_degree() const {
  int r = degree(1);
  for (int i = 2; i <= n; ++i) r = std::min(r, degree(i));
  return r;
}

bool Multihypergraph::is_regular(int& r_out) const {
  r_out = degree(1);
  for (int i = 2; i <= n; ++i)
    if (degree(i) != r_out) return false;
  return true;
}

Multihypergraph all_subsets_of_size(int n, int m) {
  require_ground_size(n);
  if (m < 1 || m > n) throw std::invalid_argument("subset size out of range");
  Multihypergraph g{n, {}};
  for (SubsetMask s = 1; s <= full_mask(n); ++s)
    if (subset_size(s) == m) g.counts[s] = 1;
  return g;
}

Multihypergraph singletons(int n) { return all_subsets_of_size(n, 1); }

Multihypergraph leave_one_out(int n) {
  if (n < 2) throw std::invalid_argument("leave-one-out needs n >= 2");
  return all_subsets_of_size(n, n - 1);
}

namespace {

enum class SolveOutcome { dependent, inconsistent, solved };

// Gauss-Jordan over rationals on the n x (k+1) system M_G beta = 1.
// `dependent` means the chosen columns are linearly dependent, which also
// rules out every superset of the support.
SolveOutcome solve_incidence(int n, const std::vector<SubsetMask>& support,
                             std::vector<Rational>& beta_out) {
  const int k = static_cast<int>(support.size());
  std::vector<std::vector<Rational>> a(
      static_cast<std::size_t>(n),
      std::vector<Rational>(static_cast<std::size_t>(k) + 1, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j)
      a[i][j] = contains(support[j], i + 1) ? Rational(1) : Rational(0);
    a[i][k] = Rational(1);
  }
  int row = 0;
  for (int col = 0; col < k; ++col) {
    int pivot = -1;
    for (int r = row; r < n; ++r)
      if (a[r][col] != Rational(0)) {
        pivot = r;
        break;
      }
    if (pivot < 0) return SolveOutcome::dependent;
    std::swap(a[row], a[pivot]);
    const Rational pv = a[row][col];
    for (auto& x : a[row]) x /= pv;
    for (int r = 0; r < n; ++r) {
      if (r == row) continue;
      const Rational f = a[r][col];
      if (f == Rational(0)) continue;
      for (int c = col; c <= k; ++c) a[r][c] -= f * a[row][c];
    }
    ++row;
  }
  for (int r = row; r < n; ++r)
    if (a[r][k] != Rational(0)) return SolveOutcome::inconsistent;
  beta_out.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) beta_out[j] = a[j][k];
  return SolveOutcome::solved;
}

void enumerate_from(int n, std::vector<SubsetMask>& chosen, SubsetMask next,
                    std::vector<FractionalPartition>& out) {
  const SubsetMask top = full_mask(n);
  for (SubsetMask s = next; s <= top; ++s) {
    chosen.push_back(s);
    std::vector<Rational> beta;
    const SolveOutcome outcome = solve_incidence(n, chosen, beta);
    if (outcome != SolveOutcome::dependent) {
      if (outcome == SolveOutcome::solved &&
          std::all_of(beta.begin(), beta.end(),
                      [](const Rational& r) { return r > Rational(0); })) {
        std::map<SubsetMask, Rational> weights;
        for (std::size_t j = 0; j < chosen.size(); ++j)
          weights[chosen[j]] = beta[j];
        out.push_back(exact_partition(n, std::move(weights)));
      }
      if (static_cast<int>(chosen.size()) < n)
        enumerate_from(n, chosen, s + 1, out);
    }
    chosen.pop_back();
  }
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("STAM_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::vector<FractionalPartition> enumerate_extreme_partitions(int n,
                                                              int threads) {
  require_ground_size(n);
  if (n > 6)
    throw std::invalid_argument(
        "exact extreme-point enumeration supported for n <= 6");
  const SubsetMask top = full_mask(n);
  const int workers = std::min<int>(resolve_threads(threads), top);

  // Split on the first support element; merge in mask order so the result
  // ordering is independent of scheduling.
  std::vector<std::future<std::vector<FractionalPartition>>> tasks;
  std::atomic<SubsetMask> cursor{1};
  auto work = [&]() {
    std::vector<FractionalPartition> local;
    for (;;) {
      const SubsetMask first = cursor.fetch_add(1);
      if (first > top) break;
      std::vector<SubsetMask> chosen{first};
      std::vector<Rational> beta;
      const SolveOutcome outcome = solve_incidence(n, chosen, beta);
      if (outcome == SolveOutcome::dependent) continue;  // cannot happen: e_s != 0
      if (outcome == SolveOutcome::solved && beta[0] > Rational(0))
        local.push_back(exact_partition(n, {{first, beta[0]}}));
      if (n > 1) enumerate_from(n, chosen, first + 1, local);
    }
    return local;
  };
  std::vector<std::vector<FractionalPartition>> parts;
  if (workers <= 1) {
    parts.push_back(work());
  } else {
    for (int w = 0; w < workers; ++w)
      tasks.push_back(std::async(std::launch::async, work));
    for (auto& t : tasks) parts.push_back(t.get());
  }
  std::vector<FractionalPartition> all;
  for (auto& p : parts)
    for (auto& beta : p) all.push_back(std::move(beta));

  // Canonical order (and defensive dedup) keyed on the exact support vector.
  auto key = [](const FractionalPartition& b) {
    std::vector<std::pair<SubsetMask, Rational>> k(b.exact.begin(),
                                                   b.exact.end());
    return k;
  };
  std::sort(all.begin(), all.end(),
            [&](const FractionalPartition& x, const FractionalPartition& y) {
              return key(x) < key(y);
            });
  all.erase(std::unique(all.begin(), all.end(),
                        [&](const FractionalPartition& x,
                            const FractionalPartition& y) {
                          return key(x) == key(y);
                        }),
            all.end());
  return all;
}

namespace {

std::mutex g_cache_mutex;
std::map<int, std::vector<FractionalPartition>> g_vertex_cache;

const std::vector<FractionalPartition>& cached_extreme_partitions(int n) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_vertex_cache.find(n);
  if (it == g_vertex_cache.end())
    it = g_vertex_cache.emplace(n, enumerate_extreme_partitions(n)).first;
  return it->second;
}

FsaOptimum fsa_by_vertices(const SetFunction& v) {
  const auto& vertices = cached_extreme_partitions(v.ground_size());
  FsaOptimum best;
  best.opt = -1.0;
  for (const auto& beta : vertices) {
    double dot = 0.0;
    for (const auto& [mask, w] : beta.weights) dot += w * v.value(mask);
    if (dot > best.opt) {
      best.opt = dot;
      best.argmax = beta;
    }
  }
  return best;
}

FsaOptimum fsa_by_simplex(const SetFunction& v) {
  const int n = v.ground_size();
  const SubsetMask top = full_mask(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, top);
  Eigen::VectorXd c(top);
  for (SubsetMask s = 1; s <= top; ++s) {
    c(s - 1) = v.value(s);
    for (int i = 1; i <= n; ++i)
      if (contains(s, i)) a(i - 1, s - 1) = 1.0;
  }
  const SimplexResult lp =
      simplex_maximize(a, Eigen::VectorXd::Ones(n), c);
  if (lp.status != SimplexResult::Status::optimal)
    throw std::runtime_error("FSA linear program did not solve");

  // Recover the optimal vertex exactly from the final basis.
  std::vector<SubsetMask> support;
  for (SubsetMask s = 1; s <= top; ++s)
    if (lp.x(s - 1) > 1e-9) support.push_back(s);
  FsaOptimum best;
  std::vector<Rational> beta;
  if (solve_incidence(n, support, beta) == SolveOutcome::solved &&
      std::all_of(beta.begin(), beta.end(),
                  [](const Rational& r) { return r > Rational(0); })) {
    std::map<SubsetMask, Rational> weights;
    for (std::size_t j = 0; j < support.size(); ++j)
      weights[support[j]] = beta[j];
    best.argmax = exact_partition(n, std::move(weights));
  } else {
    best.argmax.n = n;
    for (SubsetMask s : support) best.argmax.weights[s] = lp.x(s - 1);
  }
  best.opt = 0.0;
  for (const auto& [mask, w] : best.argmax.weights) best.opt += w * v.value(mask);
  return best;
}

}  // namespace

FsaOptimum fsa_lp_max(const SetFunction& v, LpMode mode) {
  if (mode == LpMode::automatic)
    mode = v.ground_size() <= 5 ? LpMode::extreme_points : LpMode::simplex;
  if (mode == LpMode::extreme_points && v.ground_size() > 6)
    throw std::invalid_argument("extreme-point mode supported for n <= 6");
  return mode == LpMode::extreme_points ? fsa_by_vertices(v) : fsa_by_simplex(v);
}

PropertyReport check_fsa(const SetFunction& v, double tol, LpMode mode) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  const FsaOptimum best = fsa_lp_max(v, mode);
  PropertyReport rep;
  rep.property = "fractionally-superadditive";
  rep.margin = v.full_value() - best.opt;
  rep.holds = rep.margin >= -tol;
  rep.details["lp_opt"] = best.opt;
  if (!rep.holds) rep.certificate = best.argmax.certificate();
  return rep;
}

PropertyReport check_regular_epi(const SetFunction& v, const Multihypergraph& g,
                                 double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (g.n != v.ground_size())
    throw std::invalid_argument("hypergraph and set function sizes differ");
  if (g.counts.empty()) throw std::invalid_argument("empty multihypergraph");
  for (const auto& [mask, count] : g.counts) {
    require_nonempty_subset(mask, g.n);
    if (count <= 0) throw std::invalid_argument("nonpositive multiplicity");
  }
  if (g.min_degree() == 0)
    throw std::invalid_argument(
        "some index is uncovered; the degree bound does not apply");
  const int r = g.max_degree();
  double sum = 0.0;
  for (const auto& [mask, count] : g.counts) sum += count * v.value(mask);
  PropertyReport rep;
  rep.property = "regular-degree-epi";
  rep.margin = v.full_value() - sum / r;
  rep.holds = rep.margin >= -tol;
  rep.details["r"] = r;
  rep.details["bound"] = sum / r;
  if (!rep.holds) {
    WeightingCert cert;
    cert.n = g.n;
    for (const auto& [mask, count] : g.counts)
      cert.weights[mask] = static_cast<double>(count) / r;
    rep.certificate = cert;
  }
  return rep;
}

}  // namespace stam
