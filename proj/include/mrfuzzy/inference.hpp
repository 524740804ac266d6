#pragma once

// Three T-S inference engines over a shared RuleBase:
//
//  * production: per-rule production term d_i = 1 - min_j(moving rate),
//    rules with d_i > d0 join a weighted average of their consequent lines;
//  * sugeno: product of antecedent memberships as the firing strength;
//  * type-distance: each rule weighted by the product of all other rules'
//    centre distances to the input.
//
// All engines are pure functions of (rule base, inputs).

#include <cstddef>
#include <span>
#include <vector>

#include "mrfuzzy/fuzzy_set.hpp"
#include "mrfuzzy/rule_base.hpp"

namespace mrfuzzy {

/// 1 - min(rates). Throws UsageError on an empty list.
double production_term(std::span<const MovingRate> rates);

/// Indices i with terms[i] > d0, in rule order. Throws UsageError unless 0 <= d0 <= 1.
std::vector<std::size_t> active_rules(std::span<const double> terms, double d0);

struct ProductionResult {
  double output = 0.0;
  std::vector<double> production_terms;  // one per rule
  std::vector<std::size_t> active_set;   // indices with d_i > d0
  std::size_t active_count() const noexcept { return active_set.size(); }
};

/// Production terms for every rule (triangular rule bases only).
std::vector<double> production_terms(const RuleBase& rb, std::span<const InputValue> inputs);

/// Throws EmptyActiveSetError when no rule exceeds d0. Consequent lines are
/// evaluated at the input centres.
ProductionResult infer_production(const RuleBase& rb, std::span<const InputValue> inputs, double d0);

/// Product-of-memberships firing strength of every rule at crisp x. Works for
/// either set kind; triangular sets can yield exact zeros.
std::vector<double> matching_degrees(const RuleBase& rb, std::span<const double> x);

/// Weighted average over matching_degrees. Throws DegenerateWeightsError when
/// all firing strengths vanish (never happens for Gaussian sets short of
/// underflow).
double infer_sugeno(const RuleBase& rb, std::span<const double> x);

/// Sum over inputs of |antecedent centre - input centre|, one entry per rule.
std::vector<double> type_distances(const RuleBase& rb, std::span<const InputValue> inputs);

/// sum_i f_i * prod_{k != i} d_k / sum_i prod_{k != i} d_k.
///
/// With exactly one zero distance that rule takes all the weight. With two or
/// more zeros (but not all) the zero-distance consequents are averaged. When
/// every distance is zero and m >= 2 the quotient is 0/0 and
/// AllDistancesZeroError is thrown. A single rule always returns its value.
double aggregate_type_distance(std::span<const double> distances, std::span<const double> values);

double infer_type_distance(const RuleBase& rb, std::span<const InputValue> inputs);

/// Convenience: wrap crisp values as singletons.
std::vector<InputValue> singletons(std::span<const double> x);

/// Centres of the inputs, i.e. the point at which consequent lines are evaluated.
std::vector<double> input_centers(std::span<const InputValue> inputs);

}  // namespace mrfuzzy
