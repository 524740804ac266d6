#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mrfuzzy/errors.hpp"
#include "mrfuzzy/inference.hpp"
#include "mrfuzzy/learning.hpp"
#include "mrfuzzy/oracle.hpp"
#include "test_support.hpp"

using namespace mrfuzzy;
using mrfuzzy::testkit::uniform;

namespace {

constexpr double kH = 1e-6;
constexpr double kKinkMargin = 10 * kH;

std::vector<oracle::TriangularRule> oracle_rules(const ProductionParams& p) {
  std::vector<oracle::TriangularRule> out(p.rules);
  for (std::size_t i = 0; i < p.rules; ++i) {
    for (std::size_t j = 0; j < p.inputs; ++j) {
      const std::size_t k = i * p.inputs + j;
      const double c = p.centers[k];
      out[i].sets.emplace_back(c - p.left_widths[k], c, c + p.right_widths[k]);
    }
    out[i].coefficients.assign(p.coefficients.begin() + static_cast<std::ptrdiff_t>(i * (p.inputs + 1)),
                               p.coefficients.begin() + static_cast<std::ptrdiff_t>((i + 1) * (p.inputs + 1)));
  }
  return out;
}

std::vector<oracle::GaussianRule> oracle_rules(const SugenoParams& p) {
  std::vector<oracle::GaussianRule> out(p.rules);
  for (std::size_t i = 0; i < p.rules; ++i) {
    for (std::size_t j = 0; j < p.inputs; ++j) {
      out[i].sets.emplace_back(p.centers[i * p.inputs + j], p.widths[i * p.inputs + j]);
    }
    out[i].coefficients.assign(p.coefficients.begin() + static_cast<std::ptrdiff_t>(i * (p.inputs + 1)),
                               p.coefficients.begin() + static_cast<std::ptrdiff_t>((i + 1) * (p.inputs + 1)));
  }
  return out;
}

double production_loss(const ProductionParams& p, const std::vector<double>& x, double target, double d0) {
  const auto rules = oracle_rules(p);
  return squared_error(target, oracle::infer_production(rules, singletons(x), d0));
}

double sugeno_loss(const SugenoParams& p, const std::vector<double>& x, double target) {
  const auto rules = oracle_rules(p);
  return squared_error(target, oracle::infer_sugeno(rules, x));
}

// True when a perturbation of size kKinkMargin could cross a kink of E in c_ij.
bool near_kink(const ProductionParams& p, const ProductionForward& fwd, const std::vector<double>& x, double d0,
               std::size_t i, std::size_t j) {
  const std::size_t k = i * p.inputs + j;
  const double c = p.centers[k];
  const double max_slope = 1.0 / std::min(p.left_widths[k], p.right_widths[k]);
  if (std::abs(x[j] - c) < kKinkMargin) return true;
  if (std::abs(x[j] - (c - p.left_widths[k])) < kKinkMargin) return true;
  if (std::abs(x[j] - (c + p.right_widths[k])) < kKinkMargin) return true;
  for (std::size_t q = 0; q < p.inputs; ++q) {
    if (q != j && std::abs(fwd.rates[i * p.inputs + q] - fwd.rates[k]) < kKinkMargin * max_slope) return true;
  }
  return std::abs(fwd.terms[i] - d0) < kKinkMargin * max_slope;
}

ProductionParams random_production(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  return ProductionParams::from_rulebase(testkit::random_rulebase(rng, SetKind::Triangular, m, n));
}

SugenoParams random_sugeno(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  return SugenoParams::from_rulebase(testkit::random_rulebase(rng, SetKind::Gaussian, m, n));
}

std::vector<double> random_x(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> x(n);
  for (double& v : x) v = uniform(rng, -1.0, 1.0);
  return x;
}

void expect_grad_close(double analytic, double numeric) {
  EXPECT_TRUE(testkit::rel_close(analytic, numeric, 1e-5, 1e-8)) << "analytic " << analytic << " numeric " << numeric;
}

RuleBase single_rule(double c0) {
  return RuleBase(SetKind::Triangular, {Dimension{"x1", {"A"}, std::nullopt}},
                  {Rule{{0}, {TriangularSet(-2.0, 0.0, 2.0)}, {c0, 0.0}}});
}

}  // namespace

TEST(Loss, Examples) {
  EXPECT_EQ(squared_error(3.0, 1.0), 2.0);
  EXPECT_EQ(squared_error(1.0, 1.0), 0.0);
  EXPECT_EQ(squared_error(-1.0, 1.0), 2.0);
}

TEST(GradConsequent, Examples) {
  EXPECT_EQ(grad_consequent(2.0, 0.5, 2.0, 3.0), -1.5);
  EXPECT_EQ(grad_consequent(2.0, 1.0, 1.0), -2.0);
  EXPECT_EQ(grad_consequent(0.0, 1.0, 1.0), 0.0);
  EXPECT_THROW(grad_consequent(1.0, 0.0, 0.0), DegenerateWeightsError);
}

TEST(Accuracy, Examples) {
  EXPECT_NEAR(accuracy_percent(std::vector<double>{100, 200}, std::vector<double>{90, 220}), 90.0, 1e-12);
  EXPECT_EQ(accuracy_percent(std::vector<double>{5, -5}, std::vector<double>{5, -5}), 100.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(accuracy_percent(std::vector<double>{10, 10}, std::vector<double>{10, nan}), 50.0);
  EXPECT_THROW(accuracy_percent(std::vector<double>{0}, std::vector<double>{1}), NumericError);
  EXPECT_THROW(accuracy_percent(std::vector<double>{1}, std::vector<double>{}), UsageError);
}

TEST(ProductionGradient, ZeroForInactiveRules) {
  ProductionParams p{2, 1, {0.0, 5.0}, {1.0, 1.0}, {1.0, 1.0}, {1.0, 0.0, 3.0, 0.0}};
  ProductionForward fwd;
  const std::vector<double> x{0.3};
  ASSERT_TRUE(forward_production(p, x, 0.0, fwd));
  EXPECT_FALSE(fwd.active[1]);
  EXPECT_EQ(grad_center_production(p, fwd, x, 10.0, 1, 0), 0.0);
  ProductionGradient g;
  gradient_production(p, fwd, x, 10.0, g);
  EXPECT_EQ(g.coefficients[2], 0.0);
  EXPECT_EQ(g.coefficients[3], 0.0);
}

TEST(ProductionGradient, ZeroForNonMinimisingInput) {
  ProductionParams p{2, 2, {0.0, 0.0, 0.5, 0.5}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 0, 0, -1, 0, 0}};
  ProductionForward fwd;
  const std::vector<double> x{0.2, 0.5};  // rule 0 rates: 0.2, 0.5
  ASSERT_TRUE(forward_production(p, x, 0.0, fwd));
  EXPECT_EQ(fwd.argmin[0], 0u);
  EXPECT_EQ(grad_center_production(p, fwd, x, 3.0, 0, 1), 0.0);
  EXPECT_NE(grad_center_production(p, fwd, x, 3.0, 0, 0), 0.0);
}

TEST(ProductionGradient, TiesGoToLowestIndex) {
  ProductionParams p{1, 2, {0.0, 0.0}, {1, 1}, {1, 1}, {1, 0, 0}};
  ProductionForward fwd;
  ASSERT_TRUE(forward_production(p, std::vector<double>{0.3, 0.3}, 0.0, fwd));
  EXPECT_EQ(fwd.argmin[0], 0u);
}

TEST(ProductionGradient, SlopeAtExactCentreMatchesCentralDifference) {
  EXPECT_EQ(rate_center_slope(0.0, 0.0, 0.5, 2.0), 0.5 * (2.0 - 0.5));
  EXPECT_EQ(rate_center_slope(0.5, 0.0, 1.0, 1.0), -1.0);
  EXPECT_EQ(rate_center_slope(-0.5, 0.0, 1.0, 1.0), 1.0);
  EXPECT_EQ(rate_center_slope(3.0, 0.0, 1.0, 1.0), 0.0);

  ProductionParams p{2, 1, {0.25, -0.5}, {0.5, 1.0}, {2.0, 1.0}, {1.0, 2.0, -1.0, 0.5}};
  const std::vector<double> x{0.25};
  const double target = 2.0;
  ProductionForward fwd;
  ASSERT_TRUE(forward_production(p, x, 0.0, fwd));
  const double analytic = grad_center_production(p, fwd, x, target, 0, 0);
  const double numeric = oracle::finite_diff_grad(
      [&](double c) {
        auto q = p;
        q.centers[0] = c;
        return production_loss(q, x, target, 0.0);
      },
      p.centers[0]);
  EXPECT_TRUE(testkit::rel_close(analytic, numeric, 1e-4, 1e-8)) << analytic << " vs " << numeric;
}

TEST(ProductionGradientProperty, MatchesOracleFiniteDifference) {
  std::mt19937_64 rng(51);
  int checked = 0;
  while (checked < 300) {
    const std::size_t n = testkit::pick(rng, 1, 3);
    const auto p = random_production(rng, testkit::pick(rng, 1, 8), n);
    const auto x = random_x(rng, n);
    const double target = uniform(rng, -3.0, 3.0);
    const double d0 = uniform(rng, 0.0, 0.3);
    ProductionForward fwd;
    if (!forward_production(p, x, d0, fwd)) continue;
    const std::size_t i = testkit::pick(rng, 0, p.rules - 1);
    const std::size_t j = fwd.argmin[i];
    if (!fwd.active[i] || near_kink(p, fwd, x, d0, i, j)) continue;

    const double analytic = grad_center_production(p, fwd, x, target, i, j);
    const double numeric = oracle::finite_diff_grad(
        [&](double c) {
          auto q = p;
          q.centers[i * n + j] = c;
          return production_loss(q, x, target, d0);
        },
        p.centers[i * n + j]);
    expect_grad_close(analytic, numeric);

    ProductionGradient g;
    gradient_production(p, fwd, x, target, g);
    const std::size_t kc = i * (n + 1) + testkit::pick(rng, 0, n);
    const double numeric_c = oracle::finite_diff_grad(
        [&](double v) {
          auto q = p;
          q.coefficients[kc] = v;
          return production_loss(q, x, target, d0);
        },
        p.coefficients[kc]);
    expect_grad_close(g.coefficients[kc], numeric_c);
    ++checked;
  }
}

TEST(SugenoGradientProperty, MatchesOracleFiniteDifference) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = testkit::pick(rng, 1, 3);
    const auto p = random_sugeno(rng, testkit::pick(rng, 1, 8), n);
    const auto x = random_x(rng, n);
    const double target = uniform(rng, -3.0, 3.0);
    SugenoForward fwd;
    ASSERT_TRUE(forward_sugeno(p, x, fwd));
    SugenoGradient g;
    gradient_sugeno(p, fwd, x, target, g);

    const std::size_t k = testkit::pick(rng, 0, p.centers.size() - 1);
    const auto along = [&](std::vector<double> SugenoParams::*field, std::size_t idx) {
      return oracle::finite_diff_grad(
          [&](double v) {
            auto q = p;
            (q.*field)[idx] = v;
            return sugeno_loss(q, x, target);
          },
          (p.*field)[idx]);
    };
    expect_grad_close(g.centers[k], along(&SugenoParams::centers, k));
    expect_grad_close(g.widths[k], along(&SugenoParams::widths, k));
    const std::size_t kc = testkit::pick(rng, 0, p.coefficients.size() - 1);
    expect_grad_close(g.coefficients[kc], along(&SugenoParams::coefficients, kc));
  }
}

TEST(GradientProperty, SmallStepDescends) {
  std::mt19937_64 rng(53);
  const double eta = 1e-4;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = testkit::pick(rng, 1, 3);
    const auto x = random_x(rng, n);
    const double target = uniform(rng, -3.0, 3.0);

    auto s = random_sugeno(rng, testkit::pick(rng, 1, 6), n);
    SugenoForward sf;
    ASSERT_TRUE(forward_sugeno(s, x, sf));
    SugenoGradient sg;
    gradient_sugeno(s, sf, x, target, sg);
    const double before = squared_error(target, sf.output);
    for (std::size_t k = 0; k < s.centers.size(); ++k) {
      s.centers[k] -= eta * sg.centers[k];
      s.widths[k] -= eta * sg.widths[k];
    }
    for (std::size_t k = 0; k < s.coefficients.size(); ++k) s.coefficients[k] -= eta * sg.coefficients[k];
    ASSERT_TRUE(forward_sugeno(s, x, sf));
    EXPECT_LE(squared_error(target, sf.output), before + 1e-15);

    auto p = random_production(rng, testkit::pick(rng, 1, 6), n);
    ProductionForward pf;
    if (!forward_production(p, x, 0.0, pf)) continue;
    ProductionGradient pg;
    gradient_production(p, pf, x, target, pg);
    const double pbefore = squared_error(target, pf.output);
    for (std::size_t k = 0; k < p.centers.size(); ++k) p.centers[k] -= eta * pg.centers[k];
    for (std::size_t k = 0; k < p.coefficients.size(); ++k) p.coefficients[k] -= eta * pg.coefficients[k];
    if (!forward_production(p, x, 0.0, pf)) continue;
    EXPECT_LE(squared_error(target, pf.output), pbefore + 1e-15);
  }
}

TEST(TargetScaling, MapConsequentsCommutesWithInference) {
  std::mt19937_64 rng(54);
  const auto rb = testkit::random_rulebase(rng, SetKind::Gaussian, 5, 2);
  const auto mapped = map_consequents(rb, 3.0, -7.0);
  const std::vector<double> x{0.1, -0.4};
  EXPECT_NEAR(infer_sugeno(mapped, x), 3.0 * infer_sugeno(rb, x) - 7.0, 1e-12);

  const auto t = fit_target_transform(std::vector<double>{4.0, 4.0});
  EXPECT_EQ(t.forward(4.0), 0.0);
  EXPECT_EQ(t.max - t.min, 8.0);
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.iterations = 0;
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg = {};
  cfg.eta = 0.0;
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg = {};
  cfg.d0 = 1.5;
  EXPECT_THROW(cfg.validate(), UsageError);
  EXPECT_THROW(train_production(single_rule(0.0), precipitation_fixture(), TrainConfig{.iterations = 0}), UsageError);
}

TEST(Training, RejectsMismatchedModels) {
  const auto ds = normalize(precipitation_fixture()).data;
  EXPECT_THROW(train_production(single_rule(0.0), ds, {}), DataError);
  const auto gau = build_grid_rulebase(PartitionSpec::uniform(2, 3), SetKind::Gaussian);
  EXPECT_THROW(train_production(gau, ds, {}), UsageError);
}

TEST(Training, InitialLossIsTheUntrainedModel) {
  const auto ds = normalize(precipitation_fixture()).data;
  const auto initial = build_grid_rulebase(PartitionSpec::uniform(2, 6), SetKind::Triangular);
  const auto report = train_production(initial, ds, TrainConfig{.eta = 0.1, .iterations = 26});
  ASSERT_EQ(report.loss_curve.size(), 2u);
  EXPECT_EQ(report.loss_curve[0].iteration, 0u);
  double expected = 0.0;
  for (std::size_t s = 0; s < ds.size(); ++s) expected += squared_error(ds.target(s), 0.0);
  EXPECT_NEAR(report.loss_curve[0].loss, expected / static_cast<double>(ds.size()), 1e-9);
  EXPECT_EQ(report.loss_curve[1].iteration, 26u);
  EXPECT_LT(report.loss_curve[1].loss, report.loss_curve[0].loss);
}

TEST(Training, OneIterationIsOneUpdate) {
  const auto ds = normalize(security_fixture()).data;
  const auto initial = build_grid_rulebase(PartitionSpec::uniform(3, 3), SetKind::Triangular);
  TrainConfig cfg{.eta = 0.1, .iterations = 1, .target_scaling = TargetScaling::None};
  const auto report = train_production(initial, ds, cfg);

  auto p = ProductionParams::from_rulebase(initial);
  ProductionForward fwd;
  ASSERT_TRUE(forward_production(p, ds.row(0), 0.0, fwd));
  ProductionGradient g;
  gradient_production(p, fwd, ds.row(0), ds.target(0), g);
  for (std::size_t k = 0; k < p.centers.size(); ++k) p.centers[k] -= cfg.eta * g.centers[k];
  for (std::size_t k = 0; k < p.coefficients.size(); ++k) p.coefficients[k] -= cfg.eta * g.coefficients[k];
  EXPECT_EQ(report.model, p.to_rulebase(initial));
  EXPECT_EQ(report.loss_curve.back().iteration, 1u);
}

TEST(Training, SingleRuleConvergesToConstantTarget) {
  const Dataset ds({"x1"}, "y", {-0.5, 0.0, 0.4, 0.9}, {3.0, 3.0, 3.0, 3.0});
  for (auto scaling : {TargetScaling::None, TargetScaling::MinMax}) {
    const auto report =
        train_production(single_rule(0.0), ds, TrainConfig{.eta = 0.2, .iterations = 20000, .target_scaling = scaling});
    for (double y : report.predictions) EXPECT_NEAR(y, 3.0, 1e-6);
    EXPECT_NEAR(report.accuracy, 100.0, 1e-5);
  }
}

TEST(Training, ModelsStayValid) {
  const auto ds = normalize(precipitation_fixture()).data;
  const auto tri = train_production(build_grid_rulebase(PartitionSpec::uniform(2, 6), SetKind::Triangular), ds,
                                    TrainConfig{.eta = 0.1, .iterations = 2600});
  for (const Rule& r : tri.model.rules()) {
    for (const auto& a : r.antecedents) {
      const auto& s = std::get<TriangularSet>(a);
      EXPECT_TRUE(s.left() < s.center() && s.center() < s.right());
    }
    for (double c : r.coefficients) EXPECT_TRUE(std::isfinite(c));
  }
  const auto gau = train_sugeno(build_grid_rulebase(PartitionSpec::uniform(2, 6), SetKind::Gaussian), ds,
                                TrainConfig{.eta = 0.1, .iterations = 2600});
  for (const Rule& r : gau.model.rules()) {
    for (const auto& a : r.antecedents) EXPECT_GE(std::get<GaussianSet>(a).width(), kGaussianWidthFloor);
    for (double c : r.coefficients) EXPECT_TRUE(std::isfinite(c));
  }
}

TEST(Training, HalfWidthsAreFixed) {
  const auto ds = normalize(precipitation_fixture()).data;
  const auto initial = build_grid_rulebase(PartitionSpec::uniform(2, 6), SetKind::Triangular);
  const auto report = train_production(initial, ds, TrainConfig{.eta = 0.1, .iterations = 520});
  const auto before = ProductionParams::from_rulebase(initial);
  const auto after = ProductionParams::from_rulebase(report.model);
  bool moved = false;
  for (std::size_t k = 0; k < before.centers.size(); ++k) {
    EXPECT_NEAR(after.left_widths[k], before.left_widths[k], 1e-12);
    EXPECT_NEAR(after.right_widths[k], before.right_widths[k], 1e-12);
    moved = moved || after.centers[k] != before.centers[k];
  }
  EXPECT_TRUE(moved);
}

TEST(Training, WidthFloorHolds) {
  // A very narrow, badly placed Gaussian with a large step drives widths below the floor.
  const Dataset ds({"x1"}, "y", {-1.0, -0.5, 0.5, 1.0}, {1.0, -1.0, 1.0, -1.0});
  const RuleBase rb(SetKind::Gaussian, {Dimension{"x1", {"A", "B"}, std::nullopt}},
                    {Rule{{0}, {GaussianSet(0.0, 0.05)}, {5.0, 0.0}}, Rule{{1}, {GaussianSet(0.4, 0.05)}, {-5.0, 0.0}}});
  const auto report = train_sugeno(rb, ds, TrainConfig{.eta = 5.0, .iterations = 400, .target_scaling = TargetScaling::None});
  for (const Rule& r : report.model.rules()) {
    EXPECT_GE(std::get<GaussianSet>(r.antecedents[0]).width(), kGaussianWidthFloor);
  }
  EXPECT_GT(report.width_clamps, 0u);
}

TEST(Training, Reproducible) {
  const auto ds = normalize(security_fixture()).data;
  const auto initial = build_grid_rulebase(PartitionSpec::uniform(3, 3), SetKind::Gaussian);
  const TrainConfig cfg{.eta = 0.1, .iterations = 600, .seed = 7, .shuffle = true};
  const auto a = train_sugeno(initial, ds, cfg);
  const auto b = train_sugeno(initial, ds, cfg);
  EXPECT_EQ(a.model, b.model);
  ASSERT_EQ(a.loss_curve.size(), b.loss_curve.size());
  for (std::size_t k = 0; k < a.loss_curve.size(); ++k) EXPECT_EQ(a.loss_curve[k].loss, b.loss_curve[k].loss);
  const auto c = train_sugeno(initial, ds, TrainConfig{.eta = 0.1, .iterations = 600, .seed = 8, .shuffle = true});
  EXPECT_NE(a.model, c.model);
}

TEST(Training, FailPolicyThrowsOnEmptyActiveSet) {
  const Dataset ds({"x1"}, "y", {0.0, 5.0}, {1.0, 2.0});
  const auto rb = single_rule(0.0);
  EXPECT_THROW(train_production(rb, ds, TrainConfig{.iterations = 2, .on_empty = EmptyActivePolicy::Fail}),
               EmptyActiveSetError);
  const auto report = train_production(rb, ds, TrainConfig{.iterations = 2});
  EXPECT_EQ(report.skipped_updates, 1u);
  EXPECT_EQ(report.unpredictable_samples, 1u);
}
