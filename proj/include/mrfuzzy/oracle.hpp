#pragma once

// Independent reference evaluators for tests. Everything here is a literal
// transcription of the closed-form expressions, written against plain
// parameter lists rather than the engines' RuleBase, and shares no code with
// the inference or learning modules.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mrfuzzy/fuzzy_set.hpp"

namespace mrfuzzy::oracle {

struct TriangularRule {
  std::vector<TriangularSet> sets;
  std::vector<double> coefficients;  // c0..cn
};

struct GaussianRule {
  std::vector<GaussianSet> sets;
  std::vector<double> coefficients;
};

/// Moving rate of a triangular observation (il, x0, ir) against set (l, c, r),
/// with the singleton case given by il = x0 = ir.
double moving_rate(double l, double c, double r, double il, double x0, double ir);

/// Throws EmptyActiveSetError when no production term exceeds d0.
double infer_production(std::span<const TriangularRule> rules, std::span<const InputValue> inputs, double d0);

/// Throws DegenerateWeightsError when all products vanish.
double infer_sugeno(std::span<const GaussianRule> rules, std::span<const double> x);

/// Weighted sum with literal products of the other rules' distances. Centres
/// are the antecedent centres, one row per rule. Throws AllDistancesZeroError
/// when m >= 2 and the denominator is zero with every distance zero.
double infer_type_distance(std::span<const std::vector<double>> centers, std::span<const std::vector<double>> coefficients,
                           std::span<const InputValue> inputs);

struct FiniteDiffSpec {
  double h = 1e-6;
};

/// (f(at + h) - f(at - h)) / 2h. Throws NumericError if either value is non-finite.
double finite_diff_grad(const std::function<double(double)>& f, double at, FiniteDiffSpec spec = {});

}  // namespace mrfuzzy::oracle
