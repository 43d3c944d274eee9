#include <doctest.h>

#include <cmath>
#include <random>

#include "stam/fractional_partition.hpp"
#include "stam/gaussian.hpp"

using namespace stam;

namespace {

GaussianEnsemble random_ensemble(std::mt19937_64& rng, int d, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<PdMatrix> ms;
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd g(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) g(r, c) = normal(rng);
    ms.emplace_back(Eigen::MatrixXd(g * g.transpose() +
                                    0.05 * Eigen::MatrixXd::Identity(d, d)));
  }
  return GaussianEnsemble(d, std::move(ms));
}

template <typename F>
double mixed_fd(const F& f, Eigen::VectorXd x, int i, int j, double step) {
  const double hi = step * (1.0 + std::abs(x(i)));
  const double hj = step * (1.0 + std::abs(x(j)));
  auto at = [&](double di, double dj) {
    Eigen::VectorXd y = x;
    y(i) += di;
    y(j) += dj;
    return f(y);
  };
  return (at(hi, hj) - at(hi, -hj) - at(-hi, hj) + at(-hi, -hj)) /
         (4.0 * hi * hj);
}

}  // namespace

TEST_CASE("matrix validation") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(PdMatrix(asym), std::invalid_argument);

  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(PdMatrix(indef), NotPositiveDefinite);

  CHECK_THROWS_AS(PdMatrix(Eigen::MatrixXd::Identity(65, 65)),
                  std::invalid_argument);

  CHECK_THROWS_AS(GaussianEnsemble(2, {PdMatrix::identity(2),
                                       PdMatrix::identity(3)}),
                  std::invalid_argument);
}

TEST_CASE("Gaussian entropy power") {
  CHECK(entropy_power_gaussian(PdMatrix::diagonal({1.0})) ==
        doctest::Approx(kTwoPiE).epsilon(1e-12));
  CHECK(entropy_power_gaussian(PdMatrix::identity(2)) ==
        doctest::Approx(kTwoPiE).epsilon(1e-12));
  CHECK(entropy_power_gaussian(PdMatrix::diagonal({2.0, 0.5})) ==
        doctest::Approx(kTwoPiE).epsilon(1e-12));
}

TEST_CASE("nu of the diagonal counterexample ensemble") {
  const GaussianEnsemble ens(2, {PdMatrix::diagonal({2.0, 0.5}),
                                 PdMatrix::diagonal({0.5, 2.0}),
                                 PdMatrix::identity(2, 0.1)});
  const SetFunction nu = nu_gaussian(ens);
  CHECK(nu.value(0b001) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nu.value(0b011) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(nu.value(0b111) == doctest::Approx(2.6).epsilon(1e-14));
  CHECK(nu.value(0b101) == doctest::Approx(std::sqrt(1.26)).epsilon(1e-14));
  CHECK(nu.value(0b101) == doctest::Approx(1.1224972).epsilon(1e-7));

  const SetFunction with_const = nu_gaussian(ens, true);
  CHECK(with_const.value(0b011) ==
        doctest::Approx(2.5 * kTwoPiE).epsilon(1e-12));
}

TEST_CASE("proportional covariances give an additive nu") {
  const GaussianEnsemble ens(2, {PdMatrix::identity(2),
                                 PdMatrix::identity(2, 2.0)});
  const SetFunction nu = nu_gaussian(ens);
  CHECK(nu.value(0b01) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nu.value(0b10) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(nu.value(0b11) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("d = 1 ensembles are exactly modular") {
  std::mt19937_64 rng(5);
  const GaussianEnsemble ens = random_ensemble(rng, 1, 4);
  const SetFunction nu = nu_gaussian(ens);
  for (SubsetMask s = 1; s <= nu.full_set(); ++s) {
    double expect = 0.0;
    for (int i = 1; i <= 4; ++i)
      if (contains(s, i)) expect += ens.matrices[i - 1].mat()(0, 0);
    CHECK(nu.value(s) == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(check_supermodular(nu, 1e-12).holds);
}

TEST_CASE("det-root mixed partial on the trace example") {
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 3, 1, 1, 1;
  b << 2, 3, 3, 7;
  const GaussianEnsemble ens(2, {PdMatrix(a), PdMatrix(b), PdMatrix::identity(2)});
  Eigen::VectorXd x(3);
  x << 0, 0, 1;
  CHECK(detroot_mixed_partial(ens, x, 1, 2) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(det_mixed_partial(ens, x, 1, 2) ==
        doctest::Approx(17.0).epsilon(1e-12));
  CHECK_THROWS_AS(detroot_mixed_partial(ens, x, 1, 1), std::invalid_argument);
}

TEST_CASE("identical matrices and scalars have flat det-root mixed partials") {
  const GaussianEnsemble same(3, {PdMatrix::identity(3, 2.0),
                                  PdMatrix::identity(3, 2.0),
                                  PdMatrix::identity(3, 2.0)});
  Eigen::VectorXd x(3);
  x << 0.3, 0.4, 0.5;
  CHECK(detroot_mixed_partial(same, x, 1, 2) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const GaussianEnsemble scalars(1, {PdMatrix::diagonal({2.0}),
                                     PdMatrix::diagonal({3.0})});
  Eigen::VectorXd y(2);
  y << 1.0, 1.0;
  CHECK(detroot_mixed_partial(scalars, y, 1, 2) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(det_mixed_partial(scalars, y, 1, 2) ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("mixed partials match central finite differences") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(0.2, 1.5);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 3;
    const GaussianEnsemble ens = random_ensemble(rng, d, 3);
    Eigen::VectorXd x(3);
    for (int k = 0; k < 3; ++k) x(k) = unif(rng);
    auto detroot_fn = [&](const Eigen::VectorXd& y) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
      for (int k = 0; k < 3; ++k) m += y(k) * ens.matrices[k].mat();
      return detroot(m);
    };
    const double closed = detroot_mixed_partial(ens, x, 1, 2);
    const double fd = mixed_fd(detroot_fn, x, 0, 1, 1e-4);
    const double scale = std::max({1e-3, std::abs(closed), std::abs(fd)});
    CHECK(std::abs(closed - fd) / scale < 1e-6);

    const double det_closed = det_mixed_partial(ens, x, 1, 2);
    CHECK(det_closed >= -1e-9 * std::max(1.0, std::abs(det_closed)));
  }
}

TEST_CASE("determinant supermodularity margins") {
  const PdMatrix eye = PdMatrix::identity(2);
  const PropertyReport rep = check_det_supermodular(eye, eye, eye, 0.0);
  CHECK(rep.holds);
  CHECK(rep.margin == doctest::Approx(2.0).epsilon(1e-12));  // 9+1-8

  const PropertyReport eps_rep = check_det_supermodular(
      PdMatrix::diagonal({2.0, 0.5}), PdMatrix::diagonal({0.5, 2.0}),
      PdMatrix::identity(2, 0.1), 0.0);
  CHECK(eps_rep.holds);
  CHECK(eps_rep.margin == doctest::Approx(0.25).epsilon(1e-12));  // 7.76-7.51

  CHECK_THROWS_AS(check_det_supermodular(PdMatrix::identity(2),
                                         PdMatrix::identity(3),
                                         PdMatrix::identity(3), 0.0),
                  std::invalid_argument);
}

TEST_CASE("counterexample family gap follows the closed form") {
  for (double eps : {0.1, 0.01, 100.0}) {
    const CounterexampleResult res = supermodularity_counterexample(eps);
    const double expect = std::sqrt(1.0 + 2.5 * eps + eps * eps) - 1.0 - eps;
    CHECK(res.gap == doctest::Approx(expect).epsilon(1e-12));
    CHECK(res.gap > 0.0);
  }
  CHECK(supermodularity_counterexample(0.1).gap ==
        doctest::Approx(0.0224972).epsilon(1e-5));
  // sqrt(1.0251) - 1.01
  CHECK(supermodularity_counterexample(0.01).gap ==
        doctest::Approx(0.0024722).epsilon(1e-4));
  CHECK_THROWS_AS(supermodularity_counterexample(0.0), std::invalid_argument);
}

TEST_CASE("violation search is seeded, deterministic, and beats the family") {
  const SearchResult a = search_supermodularity_violation(2, 3, 42, 2000, 2);
  CHECK(a.gap >= 0.02);
  const SearchResult b = search_supermodularity_violation(2, 3, 42, 2000, 4);
  CHECK(a.gap == b.gap);  // reduction independent of thread count

  const SearchResult scalar = search_supermodularity_violation(1, 3, 42, 200);
  CHECK(std::abs(scalar.gap) <= 1e-9);
}

TEST_CASE("pairwise EPI equality diagnostic") {
  const GaussianEnsemble prop(2, {PdMatrix::identity(2),
                                  PdMatrix::identity(2, 2.0),
                                  PdMatrix::identity(2, 5.0)});
  const EpiEqualityReport rep = epi_equality_diagnostic(prop, 1e-9);
  CHECK(rep.all_additive);
  CHECK(rep.all_proportional);
  CHECK(rep.total_gap == doctest::Approx(0.0).epsilon(1e-12));
  const SetFunction nu = nu_gaussian(prop);
  CHECK(nu.value(0b111) == doctest::Approx(8.0).epsilon(1e-12));

  const GaussianEnsemble diag(2, {PdMatrix::diagonal({2.0, 0.5}),
                                  PdMatrix::diagonal({0.5, 2.0})});
  const EpiEqualityReport rep2 = epi_equality_diagnostic(diag, 1e-9);
  CHECK_FALSE(rep2.all_additive);
  CHECK_FALSE(rep2.all_proportional);
  CHECK(rep2.pairs[0].additivity_gap == doctest::Approx(0.5).epsilon(1e-12));

  // Perturbation: gap shrinks to zero with the perturbation.
  double last = 1.0;
  for (double delta : {1e-2, 1e-4, 1e-6}) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(0, 0) += delta;
    const GaussianEnsemble pert(2, {PdMatrix::identity(2), PdMatrix(m)});
    const EpiEqualityReport r = epi_equality_diagnostic(pert, 1e-15);
    CHECK(r.pairs[0].additivity_gap > 0.0);
    CHECK(r.pairs[0].additivity_gap < last);
    last = r.pairs[0].additivity_gap;
  }
}

TEST_CASE("nu scales linearly with the ensemble") {
  std::mt19937_64 rng(8);
  const GaussianEnsemble ens = random_ensemble(rng, 3, 3);
  const double lambda = 3.7;
  std::vector<PdMatrix> scaled;
  for (const PdMatrix& m : ens.matrices)
    scaled.emplace_back(Eigen::MatrixXd(lambda * m.mat()));
  const SetFunction nu = nu_gaussian(ens);
  const SetFunction nu_scaled = nu_gaussian(GaussianEnsemble(3, scaled));
  for (SubsetMask s = 1; s <= nu.full_set(); ++s)
    CHECK(nu_scaled.value(s) ==
          doctest::Approx(lambda * nu.value(s)).epsilon(1e-12));
}

TEST_CASE("random Gaussian nu satisfies FSA and partition superadditivity") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianEnsemble ens = random_ensemble(rng, 2 + trial % 2, 3);
    const SetFunction nu = nu_gaussian(ens);
    CHECK(check_fsa(nu, 1e-9 * nu.full_value()).holds);
    const SubsetMask singles[] = {0b001, 0b010, 0b100};
    CHECK(check_partition_superadditive(nu, singles, 1e-9 * nu.full_value())
              .holds);
  }
}
