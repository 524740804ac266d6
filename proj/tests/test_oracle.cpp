#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mrfuzzy/errors.hpp"
#include "mrfuzzy/inference.hpp"
#include "mrfuzzy/oracle.hpp"
#include "test_support.hpp"

using namespace mrfuzzy;

TEST(FiniteDiff, Examples) {
  EXPECT_NEAR(oracle::finite_diff_grad([](double x) { return x * x; }, 3.0), 6.0, 1e-8);
  EXPECT_NEAR(oracle::finite_diff_grad([](double x) { return std::sin(x); }, 0.5), std::cos(0.5), 1e-8);
  EXPECT_NEAR(oracle::finite_diff_grad([](double x) { return std::abs(x); }, 0.0), 0.0, 1e-12);
  EXPECT_THROW(oracle::finite_diff_grad([](double x) { return x > 0 ? std::numeric_limits<double>::infinity() : x; }, 0.0),
               NumericError);
}

TEST(OracleMovingRate, Examples) {
  EXPECT_EQ(oracle::moving_rate(-1, 0, 1, 0.5, 0.5, 0.5), 0.5);
  EXPECT_EQ(oracle::moving_rate(-1, 0, 1, 2, 2, 2), 1.0);
  EXPECT_EQ(oracle::moving_rate(-1, 0, 1, -1, -1, -1), 1.0);
  EXPECT_EQ(oracle::moving_rate(-1, 0, 2, -0.5, -0.5, -0.5), 0.5);
}

TEST(OracleAgreement, Sugeno) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = testkit::pick(rng, 1, 3);
    const auto rb = testkit::random_rulebase(rng, SetKind::Gaussian, testkit::pick(rng, 1, 36), n);
    std::vector<double> x(n);
    for (double& v : x) v = testkit::uniform(rng, -1.5, 1.5);
    EXPECT_TRUE(testkit::rel_close(infer_sugeno(rb, x), oracle::infer_sugeno(testkit::to_oracle_gaussian(rb), x), 1e-10));
  }
}

TEST(OracleAgreement, TypeDistance) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = testkit::pick(rng, 1, 3);
    const auto rb = testkit::random_rulebase(rng, SetKind::Triangular, testkit::pick(rng, 1, 36), n);
    std::vector<InputValue> in;
    for (std::size_t j = 0; j < n; ++j) in.push_back(testkit::random_input(rng));
    const auto centers = testkit::oracle_centers(rb);
    const auto coefs = testkit::oracle_coefficients(rb);
    EXPECT_TRUE(
        testkit::rel_close(infer_type_distance(rb, in), oracle::infer_type_distance(centers, coefs, in), 1e-10));
  }
}

TEST(OracleAgreement, ErrorParity) {
  const RuleBase tri(SetKind::Triangular, {Dimension{"x1", {"A", "B"}, std::nullopt}},
                     {Rule{{0}, {TriangularSet(-1, 0, 1)}, {1, 0}}, Rule{{1}, {TriangularSet(-1, 0, 1)}, {3, 0}}});
  const auto far = singletons(std::vector<double>{5.0});
  EXPECT_THROW(infer_production(tri, far, 0.0), EmptyActiveSetError);
  EXPECT_THROW(oracle::infer_production(testkit::to_oracle_triangular(tri), far, 0.0), EmptyActiveSetError);

  const auto centre = singletons(std::vector<double>{0.0});
  EXPECT_THROW(infer_type_distance(tri, centre), AllDistancesZeroError);
  EXPECT_THROW(oracle::infer_type_distance(testkit::oracle_centers(tri), testkit::oracle_coefficients(tri), centre),
               AllDistancesZeroError);

  const RuleBase flat(SetKind::Triangular, {Dimension{"x1", {"A"}, std::nullopt}},
                      {Rule{{0}, {TriangularSet(-1, 0, 1)}, {4, 1}}});
  EXPECT_THROW(infer_sugeno(flat, std::vector<double>{3.0}), DegenerateWeightsError);
  const std::vector<oracle::GaussianRule> tiny{{{GaussianSet(0.0, 1e-3)}, {4, 1}}};
  EXPECT_THROW(oracle::infer_sugeno(tiny, std::vector<double>{30.0}), DegenerateWeightsError);
}
