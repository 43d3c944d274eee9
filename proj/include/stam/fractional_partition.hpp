#pragma once

#include <map>
#include <optional>
#include <vector>

#include "stam/rational.hpp"
#include "stam/set_function.hpp"
#include "stam/subsets.hpp"

namespace stam {

// Nonnegative weights beta_s on nonempty subsets with, for every index i,
// sum over {s : i in s} of beta_s equal to 1. Only the support is stored.
// `exact` carries rational weights when known (same keys as `weights`).
struct FractionalPartition {
  int n = 0;
  std::map<SubsetMask, double> weights;
  std::map<SubsetMask, Rational> exact;

  bool is_exact() const { return exact.size() == weights.size(); }
  WeightingCert certificate() const;
};

enum class WeightMode { exact, floating };

// Per-index row sums equal 1: exactly in exact mode, within tol in float mode.
bool is_fractional_partition(const FractionalPartition& beta, WeightMode mode,
                             double tol = 1e-9);

FractionalPartition exact_partition(int n,
                                    std::map<SubsetMask, Rational> weights);

// 0/1 coverage matrix: rows = indices of [n], columns = support sets.
struct IncidenceMatrix {
  int n = 0;
  std::vector<SubsetMask> columns;

  bool entry(int row_index, std::size_t col) const {
    return contains(columns[col], row_index);
  }
};

IncidenceMatrix incidence_matrix(int n, const std::vector<SubsetMask>& support);

// Collection of subsets with multiplicities.
struct Multihypergraph {
  int n = 0;
  std::map<SubsetMask, int> counts;

  int degree(int index) const;      // number of members containing `index`
  int max_degree() const;
  int min_degree() const;
  bool is_regular(int& r_out) const;  // every index covered exactly r times
};

Multihypergraph all_subsets_of_size(int n, int m);  // r = binom(n-1, m-1)
Multihypergraph singletons(int n);                  // r = 1
Multihypergraph leave_one_out(int n);               // r = n - 1

// All extreme points of the fractional-partition polytope, exact rationals,
// canonically ordered. Supported for 1 <= n <= 6 (cost grows hard with n).
std::vector<FractionalPartition> enumerate_extreme_partitions(int n,
                                                              int threads = 0);

enum class LpMode { automatic, extreme_points, simplex };

struct FsaOptimum {
  double opt = 0.0;
  FractionalPartition argmax;
};

// max over fractional partitions beta of sum beta_s v(s). The maximum is
// attained at an extreme point; always opt >= v([n]).
FsaOptimum fsa_lp_max(const SetFunction& v, LpMode mode = LpMode::automatic);

// v([n]) >= sum beta_s v(s) for every fractional partition beta.
PropertyReport check_fsa(const SetFunction& v, double tol,
                         LpMode mode = LpMode::automatic);

// v([n]) >= (1/r) sum over G of v(s), r = max coverage degree of G.
PropertyReport check_regular_epi(const SetFunction& v,
                                 const Multihypergraph& g, double tol);

}  // namespace stam
