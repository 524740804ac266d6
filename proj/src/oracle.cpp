#include "mrfuzzy/oracle.hpp"

#include <cmath>

#include "mrfuzzy/errors.hpp"

namespace mrfuzzy::oracle {

double moving_rate(double l, double c, double r, double il, double x0, double ir) {
  if (r > x0 && x0 >= c) return (x0 - c) / ((r - c) + (ir - x0));
  if (l < x0 && x0 <= c) return (c - x0) / ((c - l) + (x0 - il));
  return 1.0;  // x0 <= l or r <= x0
}

double infer_production(std::span<const TriangularRule> rules, std::span<const InputValue> inputs, double d0) {
  std::vector<double> d(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    double smallest = 1.0;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      const auto& a = rules[i].sets[j];
      const double rate = moving_rate(a.left(), a.center(), a.right(), inputs[j].left(), inputs[j].center(),
                                      inputs[j].right());
      if (j == 0 || rate < smallest) smallest = rate;
    }
    d[i] = 1.0 - smallest;
  }

  double num = 0.0;
  double den = 0.0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (!(d[i] > d0)) continue;
    ++active;
    double y = rules[i].coefficients[0];
    for (std::size_t j = 0; j < inputs.size(); ++j) y += rules[i].coefficients[j + 1] * inputs[j].center();
    num += y * d[i];
    den += d[i];
  }
  if (active == 0) throw EmptyActiveSetError();
  return num / den;
}

double infer_sugeno(std::span<const GaussianRule> rules, std::span<const double> x) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& rule : rules) {
    double w = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      w *= std::exp(-std::pow(x[j] - rule.sets[j].center(), 2) / rule.sets[j].width());
    }
    double y = rule.coefficients[0];
    for (std::size_t j = 0; j < x.size(); ++j) y += rule.coefficients[j + 1] * x[j];
    num += w * y;
    den += w;
  }
  if (den == 0.0) throw DegenerateWeightsError("all matching degrees are zero");
  return num / den;
}

double infer_type_distance(std::span<const std::vector<double>> centers, std::span<const std::vector<double>> coefficients,
                           std::span<const InputValue> inputs) {
  const std::size_t m = centers.size();
  std::vector<double> dist(m, 0.0);
  std::vector<double> f(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    f[i] = coefficients[i][0];
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      dist[i] += std::abs(centers[i][j] - inputs[j].center());
      f[i] += coefficients[i][j + 1] * inputs[j].center();
    }
  }

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double w = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k != i) w *= dist[k];
    }
    num += f[i] * w;
    den += w;
  }
  if (den != 0.0) return num / den;

  double zero_sum = 0.0;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (dist[i] == 0.0) {
      zero_sum += f[i];
      ++zeros;
    }
  }
  if (zeros == m) throw AllDistancesZeroError();
  return zero_sum / static_cast<double>(zeros);
}

double finite_diff_grad(const std::function<double(double)>& f, double at, FiniteDiffSpec spec) {
  if (!(spec.h > 0.0)) throw UsageError("finite-difference step must be positive");
  const double hi = f(at + spec.h);
  const double lo = f(at - spec.h);
  if (!std::isfinite(hi) || !std::isfinite(lo)) throw NumericError("finite difference hit a non-finite value");
  return (hi - lo) / (2.0 * spec.h);
}

}  // namespace mrfuzzy::oracle
