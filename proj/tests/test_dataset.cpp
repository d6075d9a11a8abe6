#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "sgbn/dataset.hpp"
#include "sgbn/rng.hpp"
#include "test_util.hpp"

using namespace sgbn;

TEST_CASE("standardize maps a simple column to the forced values") {
  Dataset d;
  d.values.resize(3, 1);
  d.values << 1.0, 2.0, 3.0;
  const Dataset s = standardize(d);
  CHECK(s.values(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(s.values(1, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.values(2, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.standardized);
}

TEST_CASE("standardize is idempotent within 1e-12") {
  Rng rng(1);
  const Dataset s = sgbn_test::random_standardized(40, 6, rng);
  const Dataset twice = standardize(s);
  CHECK((twice.values - s.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("standardize: 50 random columns pass a direct moment recomputation") {
  Rng rng(2);
  const Dataset s = sgbn_test::random_standardized(173, 50, rng);
  // oracle: recompute mean and n-1 std with plain loops
  for (int j = 0; j < 50; ++j) {
    double mean = 0.0;
    for (int i = 0; i < 173; ++i) mean += s.values(i, j);
    mean /= 173.0;
    double ss = 0.0;
    for (int i = 0; i < 173; ++i) ss += (s.values(i, j) - mean) * (s.values(i, j) - mean);
    const double sd = std::sqrt(ss / 172.0);
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(sd - 1.0) < 1e-9);
  }
}

TEST_CASE("standardize rejects a zero-variance column by index") {
  Dataset d;
  d.values.resize(4, 3);
  d.values.setRandom();
  d.values.col(2).setConstant(5.0);
  try {
    standardize(d);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("column 3") != std::string::npos);
  }
}

TEST_CASE("standardize preserves labels and column order") {
  Rng rng(3);
  Dataset d = sgbn_test::random_raw_dataset(10, 3, rng);
  d.labels = {1, 2, 1, 1, 2, 2, 1, 2, 1, 2};
  d.names = {"a", "b", "c"};
  d.values.col(0).array() += 100.0;  // recognizable column
  const Dataset s = standardize(d);
  CHECK(s.labels == d.labels);
  CHECK(s.names == d.names);
  // column 0 still carries column 0's ranks
  for (int i = 0; i < 10; ++i)
    for (int k = 0; k < 10; ++k)
      if (d.values(i, 0) < d.values(k, 0)) CHECK(s.values(i, 0) < s.values(k, 0));
}

TEST_CASE("csv round trip is exact and keeps labels") {
  Rng rng(4);
  Dataset d = sgbn_test::random_raw_dataset(12, 4, rng);
  d.labels.assign(12, 1);
  d.labels[3] = 2;
  const std::string path = "dataset_roundtrip_test.csv";
  save_csv(d, path);
  const Dataset back = load_csv(path);
  REQUIRE(back.rows() == d.rows());
  REQUIRE(back.cols() == d.cols());
  CHECK((back.values - d.values).cwiseAbs().maxCoeff() == 0.0);  // %.17g round-trips exactly
  CHECK(back.labels == d.labels);
  std::remove(path.c_str());
}

TEST_CASE("load_csv rejects malformed input") {
  const std::string path = "dataset_bad_test.csv";
  {
    FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("x1,x2\n1.0,2.0\n3.0\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_csv(path), std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("dataset validation catches bad shapes and labels") {
  Dataset d;
  d.values.resize(1, 2);
  d.values.setZero();
  CHECK_THROWS(d.validate());  // n < 2
  d.values.resize(3, 2);
  d.values.setZero();
  d.labels = {1, 3, 1};
  CHECK_THROWS(d.validate());  // label out of {1,2}
}
