#include <doctest.h>

#include <cmath>

#include "sgbn/graph.hpp"
#include "sgbn/model.hpp"
#include "test_util.hpp"

using namespace sgbn;

namespace {
constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

// independent per-node Gaussian density product, naive loops
double density_product_log(const Vector& x, const SgbnParams& theta, const NoiseModel& noise) {
  double product = 1.0;
  for (int q = 0; q < theta.m; ++q) {
    double mean = theta.theta(theta.m, q);
    for (int p = 0; p < theta.m; ++p) mean += theta.theta(p, q) * x(p);
    const double s = noise.sigma(q);
    const double z = (x(q) - mean) / s;
    product *= std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
  }
  return std::log(product);
}
}  // namespace

TEST_CASE("log likelihood of a standard normal at zero") {
  SgbnParams theta = SgbnParams::zeros(1);
  Vector x(1);
  x << 0.0;
  CHECK(log_likelihood(x, theta, NoiseModel::unit(1)) ==
        doctest::Approx(-kLogSqrt2Pi).epsilon(1e-12));
  CHECK(log_likelihood(x, theta, NoiseModel::unit(1)) == doctest::Approx(-0.918938).epsilon(1e-5));
}

TEST_CASE("zero residuals leave only the normalizer") {
  // chain 1 -> 2 -> 3 with exact values along the regression
  SgbnParams theta = SgbnParams::zeros(3);
  theta.theta(3, 0) = 0.5;  // root predicted by its bias alone
  theta.theta(0, 1) = 2.0;
  theta.theta(1, 2) = -1.0;
  Vector x(3);
  x << 0.5, 1.0, -1.0;  // x1 = bias, x2 = 2 x1, x3 = -x2
  CHECK(log_likelihood(x, theta, NoiseModel::unit(3)) ==
        doctest::Approx(-3.0 * kLogSqrt2Pi).epsilon(1e-12));
}

TEST_CASE("log likelihood equals the independent density-product oracle") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = sgbn_test::random_dag(3, 0.6, rng);
    const SgbnParams theta = sgbn_test::theta_for(g, rng, true);
    NoiseModel noise{Vector::Ones(3) * rng.uniform(0.5, 1.5)};
    Vector x(3);
    for (int i = 0; i < 3; ++i) x(i) = rng.normal();
    const double got = log_likelihood(x, theta, noise);
    CHECK(got == doctest::Approx(density_product_log(x, theta, noise)).epsilon(1e-10));
  }
}

TEST_CASE("log likelihood rejects dimension mismatches") {
  SgbnParams theta = SgbnParams::zeros(3);
  Vector x(2);
  x.setZero();
  CHECK_THROWS_AS(log_likelihood(x, theta, NoiseModel::unit(3)), std::invalid_argument);
  Vector ok(3);
  ok.setZero();
  CHECK_THROWS_AS(log_likelihood(ok, theta, NoiseModel::unit(2)), std::invalid_argument);
}

TEST_CASE("fitting error of the zero model on standardized data is m(n-1)") {
  Rng rng(12);
  const Dataset d = sgbn_test::random_standardized(31, 5, rng);
  const SgbnParams zeros = SgbnParams::zeros(5);
  CHECK(fitting_error(d, zeros) == doctest::Approx(5.0 * 30.0).epsilon(1e-10));
}

TEST_CASE("fitting error vanishes on noiseless data") {
  SgbnParams theta = SgbnParams::zeros(3);
  theta.theta(3, 0) = 0.3;  // the root column is its bias exactly
  theta.theta(0, 1) = 0.8;
  theta.theta(1, 2) = -0.5;
  theta.theta(3, 2) = 0.25;  // bias on node 3
  Dataset d;
  d.values.resize(20, 3);
  for (int i = 0; i < 20; ++i) {
    d.values(i, 0) = 0.3;
    d.values(i, 1) = 0.8 * d.values(i, 0);
    d.values(i, 2) = -0.5 * d.values(i, 1) + 0.25;
  }
  CHECK(fitting_error(d, theta) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("fitting error matches a naive double-loop residual oracle") {
  Rng rng(14);
  const Dataset d = sgbn_test::random_standardized(17, 4, rng);
  const SgbnParams theta = sgbn_test::theta_for(sgbn_test::random_dag(4, 0.5, rng), rng, true);
  double oracle = 0.0;
  for (int q = 0; q < 4; ++q)
    for (int i = 0; i < 17; ++i) {
      double pred = theta.theta(4, q);
      for (int p = 0; p < 4; ++p) pred += theta.theta(p, q) * d.values(i, p);
      const double r = d.values(i, q) - pred;
      oracle += r * r;
    }
  CHECK(fitting_error(d, theta) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("likelihood and fitting error are exactly related under constant sigma") {
  Rng rng(15);
  const Dataset d = sgbn_test::random_standardized(23, 4, rng);
  const SgbnParams theta = sgbn_test::theta_for(sgbn_test::random_dag(4, 0.5, rng), rng, true);
  const double sigma = 0.7;
  NoiseModel noise{Vector::Constant(4, sigma)};

  double ll_sum = 0.0;
  for (int i = 0; i < 23; ++i) ll_sum += log_likelihood(d.values.row(i).transpose(), theta, noise);
  const double normalizer = 23.0 * 4.0 * (kLogSqrt2Pi + std::log(sigma));
  const double reconstructed = -2.0 * sigma * sigma * (ll_sum + normalizer);
  const double fit = fitting_error(d, theta);
  CHECK(reconstructed == doctest::Approx(fit).epsilon(1e-8));
}

TEST_CASE("structure_of thresholds entries and ignores the bias row") {
  SgbnParams theta = SgbnParams::zeros(3);
  theta.theta(0, 1) = 0.5;
  theta.theta(3, 0) = 9.0;  // bias row never becomes an edge
  const AdjacencyStructure s = structure_of(theta, 0.01);
  CHECK(s.edge_count() == 1);
  CHECK(s.has_edge(0, 1));

  SgbnParams tiny = SgbnParams::zeros(2);
  tiny.theta(0, 1) = 0.009;
  CHECK(structure_of(tiny, 0.01).edge_count() == 0);  // |entry| <= tau drops
}

TEST_CASE("structure_of agrees with a brute-force scan on random weights") {
  Rng rng(16);
  SgbnParams theta = SgbnParams::zeros(6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) theta.theta(i, j) = rng.uniform(-0.05, 0.05);
  const AdjacencyStructure s = structure_of(theta, 0.01);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const bool expect = i != j && std::abs(theta.theta(i, j)) > 0.01;
      CHECK(s.has_edge(i, j) == expect);
    }
}
