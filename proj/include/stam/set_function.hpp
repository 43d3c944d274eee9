#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stam/subsets.hpp"

namespace stam {

//! Nonnegative set function on 2^[n] \ {empty}; v(empty) is implicitly 0.
class SetFunction {
 public:
  // values[mask - 1] = v(mask); requires 2^n - 1 finite nonnegative entries.
  SetFunction(int n, std::vector<double> values);

  static SetFunction modular(int n, std::span<const double> singleton_values);

  int ground_size() const { return n_; }
  SubsetMask full_set() const { return full_mask(n_); }

  double value(SubsetMask s) const;  // throws on mask 0 or out of range
  double value_or_zero(SubsetMask s) const {
    return s == 0 ? 0.0 : value(s);
  }
  double full_value() const { return values_.back(); }

  SetFunction scaled(double lambda) const;

  // Restriction to the indices in `support`, reindexed 1..|support|.
  SetFunction restricted(SubsetMask support) const;

  const std::vector<double>& values() const { return values_; }

 private:
  int n_;
  std::vector<double> values_;
};

// Violation witnesses attached to failed property checks.
struct SubsetPairCert {
  SubsetMask s = 0, t = 0;
};
struct LocalTripleCert {
  SubsetMask base = 0;  // may be empty
  int i = 0, j = 0;
};
struct PivotCert {
  int pivot = 0;
};
struct PartitionCert {
  std::vector<SubsetMask> parts;
};
// Fractional-partition certificate; exact entries rendered as "p/q" when known.
struct WeightingCert {
  int n = 0;
  std::map<SubsetMask, double> weights;
  std::map<SubsetMask, std::string> exact;
};

using Certificate = std::variant<SubsetPairCert, LocalTripleCert, PivotCert,
                                 PartitionCert, WeightingCert>;

struct PropertyReport {
  std::string property;
  bool holds = true;
  double margin = 0.0;  // smallest slack over all tested instances, signed
  std::optional<Certificate> certificate;  // present iff !holds
  std::map<std::string, double> details;
};

// v(s|t) + v(s&t) >= v(s) + v(t) for all pairs; margin = min slack.
PropertyReport check_supermodular(const SetFunction& v, double tol);

// Equivalent local form: v(s+i+j) + v(s) >= v(s+i) + v(s+j) for i,j not in s.
PropertyReport check_supermodular_local(const SetFunction& v, double tol);

// n = 3 only: v([3]) v({i}) <= v({i,j}) v({i,k}) (1 + tol) for every pivot i.
PropertyReport check_submodular_log(const SetFunction& v, double tol);

// v([n]) >= sum of v over the blocks of a partition of [n].
PropertyReport check_partition_superadditive(const SetFunction& v,
                                             std::span<const SubsetMask> parts,
                                             double tol);

}  // namespace stam
