#include "mrfuzzy/learning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "mrfuzzy/errors.hpp"

namespace mrfuzzy {

double squared_error(double target, double prediction) noexcept {
  const double r = target - prediction;
  return 0.5 * r * r;
}

double grad_consequent(double residual, double weight, double weight_sum, double regressor) {
  if (!(weight_sum > 0.0)) throw DegenerateWeightsError("consequent gradient needs a positive weight sum");
  return -residual * (weight / weight_sum) * regressor;
}

double accuracy_percent(std::span<const double> targets, std::span<const double> predictions) {
  if (targets.size() != predictions.size()) throw UsageError("targets and predictions differ in length");
  if (targets.empty()) throw UsageError("accuracy of an empty sample is undefined");
  double rel = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] == 0.0) throw NumericError("relative error is undefined for a zero target");
    rel += std::isfinite(predictions[i]) ? std::abs(predictions[i] - targets[i]) / std::abs(targets[i]) : 1.0;
  }
  return 100.0 * (1.0 - rel / static_cast<double>(targets.size()));
}

// ---------------------------------------------------------------------------
// Production scheme

ProductionParams ProductionParams::from_rulebase(const RuleBase& rb) {
  if (rb.kind() != SetKind::Triangular) throw UsageError("production scheme needs triangular antecedents");
  ProductionParams p;
  p.rules = rb.size();
  p.inputs = rb.input_dim();
  for (const Rule& rule : rb.rules()) {
    for (const auto& set : rule.antecedents) {
      const auto& tri = std::get<TriangularSet>(set);
      p.centers.push_back(tri.center());
      p.left_widths.push_back(tri.left_width());
      p.right_widths.push_back(tri.right_width());
    }
    p.coefficients.insert(p.coefficients.end(), rule.coefficients.begin(), rule.coefficients.end());
  }
  return p;
}

RuleBase ProductionParams::to_rulebase(const RuleBase& layout) const {
  if (layout.size() != rules || layout.input_dim() != inputs) throw UsageError("layout does not match parameters");
  std::vector<Dimension> dims(layout.dimensions().begin(), layout.dimensions().end());
  std::vector<Rule> out;
  out.reserve(rules);
  for (std::size_t i = 0; i < rules; ++i) {
    Rule rule;
    rule.labels = layout.rule(i).labels;
    for (std::size_t j = 0; j < inputs; ++j) {
      const std::size_t k = i * inputs + j;
      rule.antecedents.emplace_back(TriangularSet(centers[k] - left_widths[k], centers[k], centers[k] + right_widths[k]));
    }
    const auto first = coefficients.begin() + static_cast<std::ptrdiff_t>(i * (inputs + 1));
    rule.coefficients.assign(first, first + static_cast<std::ptrdiff_t>(inputs + 1));
    out.push_back(std::move(rule));
  }
  return RuleBase(SetKind::Triangular, std::move(dims), std::move(out));
}

bool forward_production(const ProductionParams& p, std::span<const double> x, double d0, ProductionForward& fwd) {
  const std::size_t m = p.rules;
  const std::size_t n = p.inputs;
  fwd.rates.resize(m * n);
  fwd.terms.resize(m);
  fwd.argmin.resize(m);
  fwd.consequents.resize(m);
  fwd.active.resize(m);
  fwd.active_count = 0;

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double lowest = 2.0;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = i * n + j;
      const double c = p.centers[k];
      double rate = 1.0;
      if (x[j] >= c && x[j] < c + p.right_widths[k]) {
        rate = (x[j] - c) / p.right_widths[k];
      } else if (x[j] > c - p.left_widths[k] && x[j] <= c) {
        rate = (c - x[j]) / p.left_widths[k];
      }
      fwd.rates[k] = rate;
      if (rate < lowest) {
        lowest = rate;
        arg = j;
      }
    }
    const double d = 1.0 - lowest;
    fwd.terms[i] = d;
    fwd.argmin[i] = arg;

    const double* c = p.coefficients.data() + i * (n + 1);
    double y = c[0];
    for (std::size_t j = 0; j < n; ++j) y += c[j + 1] * x[j];
    fwd.consequents[i] = y;

    const bool on = d > d0;
    fwd.active[i] = on;
    if (on) {
      ++fwd.active_count;
      num += d * y;
      den += d;
    }
  }
  fwd.weight_sum = den;
  if (fwd.active_count == 0) return false;
  fwd.output = num / den;
  return true;
}

double rate_center_slope(double x, double center, double left_width, double right_width) noexcept {
  if (x == center) return 0.5 * (1.0 / left_width - 1.0 / right_width);
  if (x > center && x < center + right_width) return -1.0 / right_width;
  if (x < center && x > center - left_width) return 1.0 / left_width;
  return 0.0;
}

double grad_center_production(const ProductionParams& p, const ProductionForward& fwd, std::span<const double> x,
                              double target, std::size_t rule, std::size_t input) {
  if (!fwd.active[rule] || fwd.argmin[rule] != input) return 0.0;
  const std::size_t k = rule * p.inputs + input;
  const double residual = target - fwd.output;
  const double dY_dd = (fwd.consequents[rule] - fwd.output) / fwd.weight_sum;
  const double slope = rate_center_slope(x[input], p.centers[k], p.left_widths[k], p.right_widths[k]);
  // d(term)/d(rate) = -1 for the minimising input.
  return -residual * dY_dd * -slope;
}

void gradient_production(const ProductionParams& p, const ProductionForward& fwd, std::span<const double> x,
                         double target, ProductionGradient& grad) {
  const std::size_t m = p.rules;
  const std::size_t n = p.inputs;
  grad.centers.assign(m * n, 0.0);
  grad.coefficients.assign(m * (n + 1), 0.0);
  const double residual = target - fwd.output;
  for (std::size_t i = 0; i < m; ++i) {
    if (!fwd.active[i]) continue;
    const double g0 = grad_consequent(residual, fwd.terms[i], fwd.weight_sum);
    double* gc = grad.coefficients.data() + i * (n + 1);
    gc[0] = g0;
    for (std::size_t j = 0; j < n; ++j) gc[j + 1] = g0 * x[j];
    grad.centers[i * n + fwd.argmin[i]] = grad_center_production(p, fwd, x, target, i, fwd.argmin[i]);
  }
}

// ---------------------------------------------------------------------------
// Sugeno scheme

SugenoParams SugenoParams::from_rulebase(const RuleBase& rb) {
  if (rb.kind() != SetKind::Gaussian) throw UsageError("Sugeno scheme needs gaussian antecedents");
  SugenoParams p;
  p.rules = rb.size();
  p.inputs = rb.input_dim();
  for (const Rule& rule : rb.rules()) {
    for (const auto& set : rule.antecedents) {
      const auto& g = std::get<GaussianSet>(set);
      p.centers.push_back(g.center());
      p.widths.push_back(g.width());
    }
    p.coefficients.insert(p.coefficients.end(), rule.coefficients.begin(), rule.coefficients.end());
  }
  return p;
}

RuleBase SugenoParams::to_rulebase(const RuleBase& layout) const {
  if (layout.size() != rules || layout.input_dim() != inputs) throw UsageError("layout does not match parameters");
  std::vector<Dimension> dims(layout.dimensions().begin(), layout.dimensions().end());
  std::vector<Rule> out;
  out.reserve(rules);
  for (std::size_t i = 0; i < rules; ++i) {
    Rule rule;
    rule.labels = layout.rule(i).labels;
    for (std::size_t j = 0; j < inputs; ++j) {
      rule.antecedents.emplace_back(GaussianSet(centers[i * inputs + j], widths[i * inputs + j]));
    }
    const auto first = coefficients.begin() + static_cast<std::ptrdiff_t>(i * (inputs + 1));
    rule.coefficients.assign(first, first + static_cast<std::ptrdiff_t>(inputs + 1));
    out.push_back(std::move(rule));
  }
  return RuleBase(SetKind::Gaussian, std::move(dims), std::move(out));
}

bool forward_sugeno(const SugenoParams& p, std::span<const double> x, SugenoForward& fwd) {
  const std::size_t m = p.rules;
  const std::size_t n = p.inputs;
  fwd.weights.resize(m);
  fwd.consequents.resize(m);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = i * n + j;
      const double dx = x[j] - p.centers[k];
      w *= std::exp(-(dx * dx) / p.widths[k]);
    }
    const double* c = p.coefficients.data() + i * (n + 1);
    double y = c[0];
    for (std::size_t j = 0; j < n; ++j) y += c[j + 1] * x[j];
    fwd.weights[i] = w;
    fwd.consequents[i] = y;
    num += w * y;
    den += w;
  }
  fwd.weight_sum = den;
  if (!(den > 0.0)) return false;
  fwd.output = num / den;
  return true;
}

void gradient_sugeno(const SugenoParams& p, const SugenoForward& fwd, std::span<const double> x, double target,
                     SugenoGradient& grad) {
  const std::size_t m = p.rules;
  const std::size_t n = p.inputs;
  grad.centers.assign(m * n, 0.0);
  grad.widths.assign(m * n, 0.0);
  grad.coefficients.assign(m * (n + 1), 0.0);
  const double residual = target - fwd.output;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = fwd.weights[i];
    const double g0 = grad_consequent(residual, w, fwd.weight_sum);
    double* gc = grad.coefficients.data() + i * (n + 1);
    gc[0] = g0;
    const double dE_dw = -residual * (fwd.consequents[i] - fwd.output) / fwd.weight_sum;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = i * n + j;
      gc[j + 1] = g0 * x[j];
      const double dx = x[j] - p.centers[k];
      const double b = p.widths[k];
      grad.centers[k] = dE_dw * w * 2.0 * dx / b;
      grad.widths[k] = dE_dw * w * dx * dx / (b * b);
    }
  }
}

// ---------------------------------------------------------------------------
// Training driver

ColumnTransform fit_target_transform(std::span<const double> targets) {
  if (targets.empty()) throw DataError("cannot scale an empty target column");
  const auto [lo, hi] = std::minmax_element(targets.begin(), targets.end());
  if (*lo < *hi) return {*lo, *hi};
  const double half = std::max(std::abs(*lo), 1.0);
  return {*lo - half, *lo + half};
}

RuleBase map_consequents(const RuleBase& rb, double scale, double offset) {
  std::vector<Dimension> dims(rb.dimensions().begin(), rb.dimensions().end());
  std::vector<Rule> rules(rb.rules().begin(), rb.rules().end());
  for (Rule& rule : rules) {
    for (double& c : rule.coefficients) c *= scale;
    rule.coefficients[0] += offset;
  }
  return RuleBase(rb.kind(), std::move(dims), std::move(rules));
}

void TrainConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw UsageError("learning rate eta must be positive");
  if (iterations < 1) throw UsageError("iterations must be at least 1");
  if (!(d0 >= 0.0 && d0 <= 1.0)) throw UsageError("d0 must lie in [0, 1]");
}

namespace {

using Clock = std::chrono::steady_clock;

// Scheme provides:
//   bool step(std::span<const double> x, double target)   -- one update, false if skipped
//   bool predict(std::span<const double> x, double& y) const
//   RuleBase model() const
struct TrainingUnits {
  ColumnTransform transform;  // identity when targets are not scaled
  Dataset data;               // targets in training units
  RuleBase initial;           // consequents in training units
};

TrainingUnits to_training_units(const RuleBase& initial, const Dataset& raw, const TrainConfig& cfg) {
  cfg.validate();
  if (raw.size() == 0) throw DataError("training set is empty");
  if (raw.input_dim() != initial.input_dim()) {
    throw DataError("rule base has " + std::to_string(initial.input_dim()) + " inputs, dataset has " +
                    std::to_string(raw.input_dim()));
  }
  if (cfg.target_scaling == TargetScaling::None) return {ColumnTransform{}, raw, initial};

  const ColumnTransform t = fit_target_transform(raw.targets());
  std::vector<double> inputs;
  std::vector<double> targets;
  inputs.reserve(raw.size() * raw.input_dim());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto row = raw.row(i);
    inputs.insert(inputs.end(), row.begin(), row.end());
    targets.push_back(t.forward(raw.target(i)));
  }
  std::vector<std::string> names(raw.input_names().begin(), raw.input_names().end());
  const double half = (t.max - t.min) / 2.0;
  const double mid = (t.max + t.min) / 2.0;
  return {t, Dataset(std::move(names), raw.target_name(), std::move(inputs), std::move(targets)),
          map_consequents(initial, 1.0 / half, -mid / half)};
}

template <class Scheme>
TrainReport drive(Scheme& scheme, const TrainingUnits& units, const Dataset& raw, const TrainConfig& cfg) {
  const Dataset& data = units.data;
  const ColumnTransform& units_map = units.transform;
  const std::size_t n_samples = data.size();
  const std::size_t record_every = cfg.record_every == 0 ? n_samples : cfg.record_every;

  std::vector<std::size_t> order(n_samples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);

  TrainReport report{units.initial, {}, {}, 0.0, 0.0, {}, 0, 0, 0};

  auto mean_loss = [&] {
    double total = 0.0;
    std::size_t counted = 0;
    for (std::size_t s = 0; s < n_samples; ++s) {
      double y = 0.0;
      if (scheme.predict(data.row(s), y)) {
        total += squared_error(raw.target(s), units_map.inverse(y));
        ++counted;
      }
    }
    return counted == 0 ? std::numeric_limits<double>::infinity() : total / static_cast<double>(counted);
  };

  report.loss_curve.push_back({0, mean_loss(), 0.0});

  double elapsed = 0.0;
  double epoch_elapsed = 0.0;
  std::size_t it = 0;
  while (it < cfg.iterations) {
    const std::size_t pos = it % n_samples;
    if (pos == 0 && cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    const std::size_t next_record = (it / record_every + 1) * record_every;
    const std::size_t epoch_end = it - pos + n_samples;
    const std::size_t chunk_end = std::min({next_record, epoch_end, cfg.iterations});

    const auto start = Clock::now();
    for (; it < chunk_end; ++it) {
      const std::size_t s = order[it % n_samples];
      if (!scheme.step(data.row(s), data.target(s))) {
        if (cfg.on_empty == EmptyActivePolicy::Fail) throw EmptyActiveSetError();
        ++report.skipped_updates;
      }
    }
    const double dt = std::chrono::duration<double>(Clock::now() - start).count();
    elapsed += dt;
    epoch_elapsed += dt;

    if (it == epoch_end || it == cfg.iterations) {
      report.epoch_seconds.push_back(epoch_elapsed);
      epoch_elapsed = 0.0;
    }
    if (it % record_every == 0 || it == cfg.iterations) report.loss_curve.push_back({it, mean_loss(), elapsed});
  }
  report.train_seconds = elapsed;

  report.predictions.assign(n_samples, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 0; s < n_samples; ++s) {
    double y = 0.0;
    if (scheme.predict(data.row(s), y)) {
      report.predictions[s] = units_map.inverse(y);
    } else {
      ++report.unpredictable_samples;
    }
  }
  report.accuracy = accuracy_percent(raw.targets(), report.predictions);
  try {
    report.model = map_consequents(scheme.model(), (units_map.max - units_map.min) / 2.0,
                                   (units_map.max + units_map.min) / 2.0);
  } catch (const UsageError& e) {
    throw NumericError(std::string("training diverged: ") + e.what());
  }
  report.width_clamps = scheme.width_clamps();
  return report;
}

class ProductionScheme {
 public:
  ProductionScheme(const RuleBase& initial, const TrainConfig& cfg)
      : layout_(initial),
        params_(ProductionParams::from_rulebase(initial)),
        eta_(cfg.eta),
        d0_(cfg.d0),
        fallback_(cfg.on_empty == EmptyActivePolicy::AllRules) {}

  bool step(std::span<const double> x, double target) {
    if (!forward(x, fwd_)) return false;
    gradient_production(params_, fwd_, x, target, grad_);
    for (std::size_t k = 0; k < params_.centers.size(); ++k) params_.centers[k] -= eta_ * grad_.centers[k];
    for (std::size_t k = 0; k < params_.coefficients.size(); ++k) {
      params_.coefficients[k] -= eta_ * grad_.coefficients[k];
    }
    return true;
  }

  bool predict(std::span<const double> x, double& y) {
    if (!forward(x, eval_)) return false;
    y = eval_.output;
    return true;
  }

  RuleBase model() const { return params_.to_rulebase(layout_); }
  std::size_t width_clamps() const { return 0; }

 private:
  bool forward(std::span<const double> x, ProductionForward& fwd) const {
    if (forward_production(params_, x, d0_, fwd)) return true;
    return fallback_ && d0_ > 0.0 && forward_production(params_, x, 0.0, fwd);
  }

  const RuleBase& layout_;
  ProductionParams params_;
  double eta_;
  double d0_;
  bool fallback_;
  ProductionForward fwd_;
  ProductionForward eval_;
  ProductionGradient grad_;
};

class SugenoScheme {
 public:
  SugenoScheme(const RuleBase& initial, const TrainConfig& cfg)
      : layout_(initial), params_(SugenoParams::from_rulebase(initial)), eta_(cfg.eta) {}

  bool step(std::span<const double> x, double target) {
    if (!forward_sugeno(params_, x, fwd_)) return false;
    gradient_sugeno(params_, fwd_, x, target, grad_);
    for (std::size_t k = 0; k < params_.centers.size(); ++k) {
      params_.centers[k] -= eta_ * grad_.centers[k];
      double b = params_.widths[k] - eta_ * grad_.widths[k];
      if (!(b >= kGaussianWidthFloor)) {
        b = kGaussianWidthFloor;
        ++clamps_;
      }
      params_.widths[k] = b;
    }
    for (std::size_t k = 0; k < params_.coefficients.size(); ++k) {
      params_.coefficients[k] -= eta_ * grad_.coefficients[k];
    }
    return true;
  }

  bool predict(std::span<const double> x, double& y) {
    if (!forward_sugeno(params_, x, eval_)) return false;
    y = eval_.output;
    return true;
  }

  RuleBase model() const { return params_.to_rulebase(layout_); }
  std::size_t width_clamps() const { return clamps_; }

 private:
  const RuleBase& layout_;
  SugenoParams params_;
  double eta_;
  std::size_t clamps_ = 0;
  SugenoForward fwd_;
  SugenoForward eval_;
  SugenoGradient grad_;
};

}  // namespace

TrainReport train_production(const RuleBase& initial, const Dataset& data, const TrainConfig& cfg) {
  const auto units = to_training_units(initial, data, cfg);
  ProductionScheme scheme(units.initial, cfg);
  return drive(scheme, units, data, cfg);
}

TrainReport train_sugeno(const RuleBase& initial, const Dataset& data, const TrainConfig& cfg) {
  const auto units = to_training_units(initial, data, cfg);
  SugenoScheme scheme(units.initial, cfg);
  return drive(scheme, units, data, cfg);
}

}  // namespace mrfuzzy
