#include <doctest.h>

#include <cmath>
#include <random>

#include "stam/gaussian.hpp"
#include "stam/set_function.hpp"

using namespace stam;

namespace {

// det-root values of the diagonal counterexample family at eps = 0.1.
SetFunction eps_counterexample_values() {
  const double nu13 = std::sqrt(1.26);
  return SetFunction(3, {1.0, 1.0, 2.5, 0.1, nu13, nu13, 2.6});
}

SetFunction random_set_function(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unif(0.1, 5.0);
  std::vector<double> vals(full_mask(n));
  for (double& v : vals) v = unif(rng);
  return SetFunction(n, vals);
}

}  // namespace

TEST_CASE("value lookup and domain errors") {
  const SetFunction nu(2, {kTwoPiE, kTwoPiE, 2.0 * kTwoPiE});
  CHECK(nu.value(0b11) == doctest::Approx(2.0 * kTwoPiE).epsilon(1e-12));
  CHECK(nu.value(0b11) == doctest::Approx(34.158936890694268));

  const SetFunction v(2, {1.0, 1.0, 2.5});
  CHECK(v.value(0b01) == 1.0);
  CHECK_THROWS_AS(v.value(0), std::invalid_argument);
  CHECK_THROWS_AS(v.value(0b100), std::invalid_argument);
  CHECK_THROWS_AS(SetFunction(2, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SetFunction(2, {1.0, -1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("supermodularity check catches the eps = 0.1 violation") {
  const SetFunction v = eps_counterexample_values();
  const PropertyReport rep = check_supermodular(v, 1e-12);
  CHECK_FALSE(rep.holds);
  CHECK(rep.margin ==
        doctest::Approx(2.6 + 1.0 - 2.5 - std::sqrt(1.26)).epsilon(1e-12));
  CHECK(rep.margin == doctest::Approx(-0.0224972).epsilon(1e-4));
  REQUIRE(rep.certificate.has_value());
  const auto& cert = std::get<SubsetPairCert>(*rep.certificate);
  CHECK(cert.s == 0b011);  // {1,2}
  CHECK(cert.t == 0b101);  // {1,3}
}

TEST_CASE("modular functions are supermodular with zero margin") {
  const double c[3] = {1.0, 2.0, 3.0};
  const SetFunction v = SetFunction::modular(3, c);
  const PropertyReport rep = check_supermodular(v, 0.0);
  CHECK(rep.holds);
  CHECK(rep.margin == 0.0);
  CHECK_FALSE(rep.certificate.has_value());
}

TEST_CASE("cardinality squared is supermodular") {
  std::vector<double> vals(7);
  for (SubsetMask s = 1; s <= 7; ++s)
    vals[s - 1] = static_cast<double>(subset_size(s) * subset_size(s));
  const SetFunction v(3, vals);
  CHECK(check_supermodular(v, 0.0).holds);
  CHECK(check_supermodular_local(v, 0.0).holds);
}

TEST_CASE("local supermodularity form pinpoints s={1}, i=2, j=3") {
  const PropertyReport rep =
      check_supermodular_local(eps_counterexample_values(), 1e-12);
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.certificate.has_value());
  const auto& cert = std::get<LocalTripleCert>(*rep.certificate);
  CHECK(cert.base == 0b001);
  CHECK(cert.i == 2);
  CHECK(cert.j == 3);
}

TEST_CASE("pairwise and local supermodularity checks agree") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;  // up to 5
    const SetFunction v = random_set_function(rng, n);
    const PropertyReport a = check_supermodular(v, 1e-9);
    const PropertyReport b = check_supermodular_local(v, 1e-9);
    REQUIRE(a.holds == b.holds);
  }
}

TEST_CASE("supermodularity verdict is scaling invariant") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const SetFunction v = random_set_function(rng, 3);
    for (double lambda : {0.01, 3.0, 1e4}) {
      CHECK(check_supermodular(v, 0.0).holds ==
            check_supermodular(v.scaled(lambda), 0.0).holds);
    }
  }
}

TEST_CASE("product-form submodularity on three variables") {
  const SetFunction eps = eps_counterexample_values();
  CHECK(check_submodular_log(eps, 1e-9).holds);  // 2.6 <= 2.5 * 1.1224972

  const SetFunction iid(3, {1, 1, 1, 2, 2, 2, 3});
  CHECK(check_submodular_log(iid, 1e-9).holds);  // 3*1 <= 2*2

  const SetFunction bad(3, {1, 1, 1, 2, 2, 2, 5});
  const PropertyReport rep = check_submodular_log(bad, 1e-9);
  CHECK_FALSE(rep.holds);  // 5 > 4
  REQUIRE(rep.certificate.has_value());
  CHECK(std::get<PivotCert>(*rep.certificate).pivot >= 1);

  CHECK_THROWS_AS(check_submodular_log(SetFunction(2, {1, 1, 2}), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_submodular_log(SetFunction(3, {0, 1, 1, 2, 2, 2, 3}), 0.0),
                  std::domain_error);
}

TEST_CASE("partition superadditivity") {
  const SetFunction iid(3, {1, 1, 1, 2, 2, 2, 3});
  const SubsetMask singletons[] = {0b001, 0b010, 0b100};
  const PropertyReport rep = check_partition_superadditive(iid, singletons, 0.0);
  CHECK(rep.holds);
  CHECK(rep.margin == 0.0);

  const SetFunction bad(2, {1.0, 1.0, 1.9});
  const SubsetMask pair[] = {0b01, 0b10};
  const PropertyReport failed = check_partition_superadditive(bad, pair, 1e-12);
  CHECK_FALSE(failed.holds);
  CHECK(failed.margin == doctest::Approx(-0.1).epsilon(1e-12));

  const SubsetMask identity[] = {SubsetMask{0b111}};
  CHECK(check_partition_superadditive(iid, identity, 0.0).margin == 0.0);

  const SubsetMask overlapping[] = {0b011, 0b110};
  CHECK_THROWS_AS(check_partition_superadditive(iid, overlapping, 0.0),
                  std::invalid_argument);
  const SubsetMask incomplete[] = {SubsetMask{0b001}};
  CHECK_THROWS_AS(check_partition_superadditive(iid, incomplete, 0.0),
                  std::invalid_argument);
}

TEST_CASE("restriction to a sub-ground-set") {
  const SetFunction v = eps_counterexample_values();
  const SetFunction r = v.restricted(0b101);  // keep indices 1 and 3
  CHECK(r.ground_size() == 2);
  CHECK(r.value(0b01) == v.value(0b001));
  CHECK(r.value(0b10) == v.value(0b100));
  CHECK(r.value(0b11) == v.value(0b101));
}
