#include "stam/set_function.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stam {

SetFunction::SetFunction(int n, std::vector<double> values) : n_(n) {
  require_ground_size(n);
  const std::size_t expected = full_mask(n);
  if (values.size() != expected)
    throw std::invalid_argument("set function on [" + std::to_string(n) +
                                "] needs " + std::to_string(expected) +
                                " values, got " + std::to_string(values.size()));
  for (double x : values)
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument("set function values must be finite and >= 0");
  values_ = std::move(values);
}

SetFunction SetFunction::modular(int n, std::span<const double> c) {
  require_ground_size(n);
  if (static_cast<int>(c.size()) != n)
    throw std::invalid_argument("modular() needs n singleton values");
  std::vector<double> vals(full_mask(n));
  for (SubsetMask s = 1; s <= full_mask(n); ++s) {
    double acc = 0.0;
    for (int i = 1; i <= n; ++i)
      if (contains(s, i)) acc += c[i - 1];
    vals[s - 1] = acc;
  }
  return SetFunction(n, std::move(vals));
}

double SetFunction::value(SubsetMask s) const {
  require_nonempty_subset(s, n_);
  return values_[s - 1];
}

SetFunction SetFunction::scaled(double lambda) const {
  if (!(lambda > 0.0))
    throw std::invalid_argument("scaling factor must be positive");
  std::vector<double> vals(values_);
  for (double& x : vals) x *= lambda;
  return SetFunction(n_, std::move(vals));
}

SetFunction SetFunction::restricted(SubsetMask support) const {
  require_nonempty_subset(support, n_);
  const std::vector<int> idx = subset_indices(support);
  const int m = static_cast<int>(idx.size());
  std::vector<double> vals(full_mask(m));
  for (SubsetMask t = 1; t <= full_mask(m); ++t) {
    SubsetMask orig = 0;
    for (int b = 0; b < m; ++b)
      if (t & (SubsetMask{1} << b)) orig |= SubsetMask{1} << (idx[b] - 1);
    vals[t - 1] = value(orig);
  }
  return SetFunction(m, std::move(vals));
}

namespace {

void require_tol(double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
}

}  // namespace

PropertyReport check_supermodular(const SetFunction& v, double tol) {
  require_tol(tol);
  const SubsetMask top = v.full_set();
  PropertyReport rep;
  rep.property = "supermodular";
  double worst = std::numeric_limits<double>::infinity();
  SubsetPairCert worst_pair;
  for (SubsetMask s = 1; s <= top; ++s) {
    for (SubsetMask t = s + 1; t <= top; ++t) {
      const double slack = v.value(s | t) + v.value_or_zero(s & t) -
                           v.value(s) - v.value(t);
      if (slack < worst) {
        worst = slack;
        worst_pair = {s, t};
      }
    }
  }
  if (!std::isfinite(worst)) worst = 0.0;  // n = 1: no pairs
  rep.margin = worst;
  rep.holds = worst >= -tol;
  if (!rep.holds) rep.certificate = worst_pair;
  return rep;
}

PropertyReport check_supermodular_local(const SetFunction& v, double tol) {
  require_tol(tol);
  const int n = v.ground_size();
  PropertyReport rep;
  rep.property = "supermodular-local";
  double worst = std::numeric_limits<double>::infinity();
  LocalTripleCert worst_cert;
  for (SubsetMask base = 0; base <= v.full_set(); ++base) {
    for (int i = 1; i <= n; ++i) {
      if (contains(base, i)) continue;
      for (int j = i + 1; j <= n; ++j) {
        if (contains(base, j)) continue;
        const SubsetMask bi = base | (SubsetMask{1} << (i - 1));
        const SubsetMask bj = base | (SubsetMask{1} << (j - 1));
        const double slack = v.value(bi | bj) + v.value_or_zero(base) -
                             v.value(bi) - v.value(bj);
        if (slack < worst) {
          worst = slack;
          worst_cert = {base, i, j};
        }
      }
    }
  }
  if (!std::isfinite(worst)) worst = 0.0;
  rep.margin = worst;
  rep.holds = worst >= -tol;
  if (!rep.holds) rep.certificate = worst_cert;
  return rep;
}

PropertyReport check_submodular_log(const SetFunction& v, double tol) {
  require_tol(tol);
  if (v.ground_size() != 3)
    throw std::invalid_argument("submodular-log check is defined for n = 3");
  for (double x : v.values())
    if (x <= 0.0)
      throw std::domain_error("submodular-log check needs strictly positive values");
  PropertyReport rep;
  rep.property = "submodular-log";
  double worst = std::numeric_limits<double>::infinity();
  int worst_pivot = 0;
  const double total = v.full_value();
  for (int i = 1; i <= 3; ++i) {
    const SubsetMask mi = SubsetMask{1} << (i - 1);
    const SubsetMask others = full_mask(3) ^ mi;
    const int j = subset_indices(others)[0];
    const int k = subset_indices(others)[1];
    const SubsetMask mij = mi | (SubsetMask{1} << (j - 1));
    const SubsetMask mik = mi | (SubsetMask{1} << (k - 1));
    const double rhs = v.value(mij) * v.value(mik);
    // slack normalized by rhs so that holds <=> v123 v_i <= rhs (1 + tol)
    const double slack = (rhs - total * v.value(mi)) / rhs;
    if (slack < worst) {
      worst = slack;
      worst_pivot = i;
    }
  }
  rep.margin = worst;
  rep.holds = worst >= -tol;
  if (!rep.holds) rep.certificate = PivotCert{worst_pivot};
  return rep;
}

PropertyReport check_partition_superadditive(const SetFunction& v,
                                             std::span<const SubsetMask> parts,
                                             double tol) {
  require_tol(tol);
  SubsetMask seen = 0;
  for (SubsetMask p : parts) {
    require_nonempty_subset(p, v.ground_size());
    if (seen & p) throw std::invalid_argument("partition blocks overlap");
    seen |= p;
  }
  if (seen != v.full_set())
    throw std::invalid_argument("partition blocks do not cover [n]");
  double sum = 0.0;
  for (SubsetMask p : parts) sum += v.value(p);
  PropertyReport rep;
  rep.property = "partition-superadditive";
  rep.margin = v.full_value() - sum;
  rep.holds = rep.margin >= -tol;
  if (!rep.holds)
    rep.certificate = PartitionCert{{parts.begin(), parts.end()}};
  return rep;
}

}  // namespace stam
