#include "mrfuzzy/inference.hpp"

#include <algorithm>
#include <string>

#include "mrfuzzy/errors.hpp"

namespace mrfuzzy {

namespace {

void check_inputs(const RuleBase& rb, std::size_t given) {
  if (given != rb.input_dim()) {
    throw DataError("rule base expects " + std::to_string(rb.input_dim()) + " inputs, got " + std::to_string(given));
  }
}

void check_d0(double d0) {
  if (!(d0 >= 0.0 && d0 <= 1.0)) throw UsageError("efficient inference parameter d0 must lie in [0, 1]");
}

}  // namespace

double production_term(std::span<const MovingRate> rates) {
  if (rates.empty()) throw UsageError("production term needs at least one moving rate");
  double lowest = rates.front().value();
  for (auto rate : rates.subspan(1)) lowest = std::min(lowest, rate.value());
  return 1.0 - lowest;
}

std::vector<std::size_t> active_rules(std::span<const double> terms, double d0) {
  check_d0(d0);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] > d0) active.push_back(i);
  }
  return active;
}

std::vector<double> production_terms(const RuleBase& rb, std::span<const InputValue> inputs) {
  check_inputs(rb, inputs.size());
  if (rb.kind() != SetKind::Triangular) throw UsageError("production inference needs triangular antecedents");
  std::vector<double> terms;
  terms.reserve(rb.size());
  std::vector<MovingRate> rates;
  rates.reserve(rb.input_dim());
  for (const Rule& rule : rb.rules()) {
    rates.clear();
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      rates.push_back(moving_rate(std::get<TriangularSet>(rule.antecedents[j]), inputs[j]));
    }
    terms.push_back(production_term(rates));
  }
  return terms;
}

ProductionResult infer_production(const RuleBase& rb, std::span<const InputValue> inputs, double d0) {
  check_d0(d0);
  ProductionResult result;
  result.production_terms = production_terms(rb, inputs);
  result.active_set = active_rules(result.production_terms, d0);
  if (result.active_set.empty()) throw EmptyActiveSetError();

  const auto x = input_centers(inputs);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i : result.active_set) {
    const double d = result.production_terms[i];
    num += d * rb.rule(i).consequent(x);
    den += d;
  }
  result.output = num / den;
  return result;
}

std::vector<double> matching_degrees(const RuleBase& rb, std::span<const double> x) {
  check_inputs(rb, x.size());
  std::vector<double> degrees;
  degrees.reserve(rb.size());
  for (const Rule& rule : rb.rules()) {
    double w = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) w *= membership(rule.antecedents[j], x[j]);
    degrees.push_back(w);
  }
  return degrees;
}

double infer_sugeno(const RuleBase& rb, std::span<const double> x) {
  const auto w = matching_degrees(rb, x);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += w[i] * rb.rule(i).consequent(x);
    den += w[i];
  }
  if (!(den > 0.0)) throw DegenerateWeightsError("every rule has zero matching degree");
  return num / den;
}

std::vector<double> type_distances(const RuleBase& rb, std::span<const InputValue> inputs) {
  check_inputs(rb, inputs.size());
  std::vector<double> dist;
  dist.reserve(rb.size());
  for (const Rule& rule : rb.rules()) {
    double d = 0.0;
    for (std::size_t j = 0; j < inputs.size(); ++j) d += std::abs(center_of(rule.antecedents[j]) - inputs[j].center());
    dist.push_back(d);
  }
  return dist;
}

double aggregate_type_distance(std::span<const double> distances, std::span<const double> values) {
  if (distances.size() != values.size()) throw UsageError("distances and values differ in length");
  if (distances.empty()) throw UsageError("type-distance inference needs at least one rule");
  if (distances.size() == 1) return values[0];

  std::size_t zeros = 0;
  double zero_sum = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (distances[i] < 0.0) throw UsageError("distances must be non-negative");
    if (distances[i] == 0.0) {
      ++zeros;
      zero_sum += values[i];
    }
  }
  if (zeros == distances.size()) throw AllDistancesZeroError();
  if (zeros > 0) return zero_sum / static_cast<double>(zeros);

  // prod_{k != i} d_k = P / d_i, so the common factor P cancels.
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double inv = 1.0 / distances[i];
    num += values[i] * inv;
    den += inv;
  }
  return num / den;
}

double infer_type_distance(const RuleBase& rb, std::span<const InputValue> inputs) {
  const auto dist = type_distances(rb, inputs);
  const auto x = input_centers(inputs);
  std::vector<double> values;
  values.reserve(rb.size());
  for (const Rule& rule : rb.rules()) values.push_back(rule.consequent(x));
  return aggregate_type_distance(dist, values);
}

std::vector<InputValue> singletons(std::span<const double> x) {
  std::vector<InputValue> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(InputValue::singleton(v));
  return out;
}

std::vector<double> input_centers(std::span<const InputValue> inputs) {
  std::vector<double> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) out.push_back(in.center());
  return out;
}

}  // namespace mrfuzzy
