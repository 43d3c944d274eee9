#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stam/fractional_partition.hpp"
#include "stam/gaussian.hpp"

using namespace stam;

TEST_CASE("fractional partition membership") {
  // 1/2 on each pair of [3]: the leave-one-out weighting with r = 2.
  const FractionalPartition half_pairs = exact_partition(
      3, {{0b011, Rational(1, 2)}, {0b101, Rational(1, 2)},
          {0b110, Rational(1, 2)}});
  CHECK(is_fractional_partition(half_pairs, WeightMode::exact));
  CHECK(is_fractional_partition(half_pairs, WeightMode::floating, 1e-12));

  const FractionalPartition full = exact_partition(2, {{0b11, Rational(1)}});
  CHECK(is_fractional_partition(full, WeightMode::exact));

  const FractionalPartition missing = exact_partition(2, {{0b01, Rational(1)}});
  CHECK_FALSE(is_fractional_partition(missing, WeightMode::exact));

  CHECK_THROWS_AS(exact_partition(2, {{0b01, Rational(-1, 2)}}),
                  std::invalid_argument);
}

TEST_CASE("extreme partitions for n = 2 and n = 3") {
  const auto v2 = enumerate_extreme_partitions(2);
  REQUIRE(v2.size() == 2);
  bool saw_singletons = false, saw_full = false;
  for (const auto& beta : v2) {
    if (beta.exact == std::map<SubsetMask, Rational>{{0b01, Rational(1)},
                                                     {0b10, Rational(1)}})
      saw_singletons = true;
    if (beta.exact == std::map<SubsetMask, Rational>{{0b11, Rational(1)}})
      saw_full = true;
  }
  CHECK(saw_singletons);
  CHECK(saw_full);

  const auto v3 = enumerate_extreme_partitions(3);
  REQUIRE(v3.size() == 6);
  int fractional = 0;
  for (const auto& beta : v3) {
    CHECK(beta.is_exact());
    CHECK(is_fractional_partition(beta, WeightMode::exact));
    for (const auto& [mask, r] : beta.exact) {
      CHECK(r > Rational(0));
      CHECK(r <= Rational(1));
    }
    if (beta.exact.count(0b011) && beta.exact.at(0b011) == Rational(1, 2))
      ++fractional;
  }
  CHECK(fractional == 1);  // exactly one non-integral vertex: the half-pairs
}

TEST_CASE("n = 4 vertices: oracle agreement and rational denominators") {
  const auto exact = enumerate_extreme_partitions(4);
  const auto oracle = test::float_vertex_oracle(4);
  CHECK(exact.size() == 42);
  REQUIRE(exact.size() == oracle.size());
  for (const auto& beta : exact) {
    CHECK(is_fractional_partition(beta, WeightMode::exact));
    // Cramer: denominators divide a determinant of a 0/1 matrix of order
    // <= 4, whose absolute value is at most 3.
    for (const auto& [mask, r] : beta.exact) {
      CHECK(r.denominator() <= 3);
      CHECK(r > Rational(0));
      CHECK(r <= Rational(1));
    }
    bool found = false;
    for (const auto& v : oracle) {
      if (v.size() != beta.weights.size()) continue;
      bool same = true;
      for (const auto& [mask, w] : v) {
        const auto it = beta.weights.find(mask);
        same = same && it != beta.weights.end() &&
               std::abs(it->second - w) < 1e-9;
      }
      if (same) {
        found = true;
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("n = 5 vertex count matches the independent oracle") {
  const auto exact = enumerate_extreme_partitions(5);
  const auto oracle = test::float_vertex_oracle(5);
  CHECK(exact.size() == oracle.size());
  CHECK(exact.size() == 1292);
}

TEST_CASE("fsa LP maximum on reference set functions") {
  const SetFunction iid(3, {1, 1, 1, 2, 2, 2, 3});
  const FsaOptimum best = fsa_lp_max(iid);
  CHECK(best.opt == doctest::Approx(3.0).epsilon(1e-12));

  const SetFunction two(2, {1.0, 1.0, 1.9});
  const FsaOptimum best2 = fsa_lp_max(two);
  CHECK(best2.opt == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(best2.argmax.weights.count(0b01) == 1);
  CHECK(best2.argmax.weights.count(0b10) == 1);

  const SetFunction constant(3, {2.5, 2.5, 2.5, 2.5, 2.5, 2.5, 2.5});
  CHECK(fsa_lp_max(constant).opt == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("check_fsa verdicts and certificates") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    std::vector<PdMatrix> ms;
    for (int k = 0; k < 3; ++k) {
      Eigen::MatrixXd g(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = normal(rng);
      ms.emplace_back(Eigen::MatrixXd(g * g.transpose() +
                                      0.1 * Eigen::MatrixXd::Identity(d, d)));
    }
    const SetFunction nu = nu_gaussian(GaussianEnsemble(d, ms));
    CHECK(check_fsa(nu, 1e-9 * nu.full_value()).holds);
  }

  const SetFunction bad(2, {1.0, 1.0, 1.9});
  const PropertyReport rep = check_fsa(bad, 1e-12);
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.certificate.has_value());
  const auto& cert = std::get<WeightingCert>(*rep.certificate);
  CHECK(cert.weights.count(0b01) == 1);
  CHECK(cert.weights.count(0b10) == 1);

  const double c[3] = {0.5, 1.5, 2.0};
  const SetFunction additive = SetFunction::modular(3, c);
  const PropertyReport add_rep = check_fsa(additive, 1e-12);
  CHECK(add_rep.holds);
  CHECK(add_rep.margin == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fsa verdict is scaling invariant") {
  const SetFunction bad(2, {1.0, 1.0, 1.9});
  for (double lambda : {1e-3, 7.0, 1e5})
    CHECK_FALSE(check_fsa(bad.scaled(lambda), 1e-12).holds);
}

TEST_CASE("simplex mode agrees with exact vertex enumeration") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.05, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;  // 2..5
    std::vector<double> vals(full_mask(n));
    for (double& v : vals) v = unif(rng);
    const SetFunction v(n, vals);
    const double exact = fsa_lp_max(v, LpMode::extreme_points).opt;
    const double lp = fsa_lp_max(v, LpMode::simplex).opt;
    CHECK(lp == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("simplex handles n = 6 and recovers a rational vertex") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  std::vector<double> vals(full_mask(6));
  for (double& v : vals) v = unif(rng);
  const SetFunction v(6, vals);
  const FsaOptimum best = fsa_lp_max(v);  // automatic -> simplex at n = 6
  CHECK(best.opt >= v.full_value() - 1e-9);
  CHECK(is_fractional_partition(best.argmax, WeightMode::floating, 1e-7));
}

TEST_CASE("degree-bound inequality checks") {
  const SetFunction iid(3, {1, 1, 1, 2, 2, 2, 3});

  const Multihypergraph pairs = all_subsets_of_size(3, 2);
  int r = 0;
  CHECK(pairs.is_regular(r));
  CHECK(r == 2);
  const PropertyReport leave_one_out_rep = check_regular_epi(iid, pairs, 0.0);
  CHECK(leave_one_out_rep.holds);
  CHECK(leave_one_out_rep.margin == doctest::Approx(0.0).epsilon(1e-12));

  const PropertyReport shannon = check_regular_epi(iid, singletons(3), 0.0);
  CHECK(shannon.holds);
  CHECK(shannon.margin == doctest::Approx(0.0).epsilon(1e-12));

  Multihypergraph full{3, {{0b111, 1}}};
  const PropertyReport trivial = check_regular_epi(iid, full, 0.0);
  CHECK(trivial.holds);
  CHECK(trivial.margin == doctest::Approx(0.0).epsilon(1e-12));

  Multihypergraph uncovered{3, {{0b011, 2}}};
  CHECK_THROWS_AS(check_regular_epi(iid, uncovered, 0.0),
                  std::invalid_argument);
}

TEST_CASE("uniform weights on a regular hypergraph form a fractional partition") {
  for (int n = 2; n <= 5; ++n) {
    for (int m = 1; m <= n; ++m) {
      const Multihypergraph g = all_subsets_of_size(n, m);
      int r = 0;
      REQUIRE(g.is_regular(r));
      FractionalPartition beta;
      beta.n = n;
      for (const auto& [mask, count] : g.counts)
        beta.weights[mask] = static_cast<double>(count) / r;
      CHECK(is_fractional_partition(beta, WeightMode::floating, 1e-12));
    }
  }
}
