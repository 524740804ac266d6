#pragma once

// Gradient-descent parameter identification for two fixed-structure T-S
// networks trained on E = 1/2 (target - Y)^2, one sample at a time:
//
//  * production scheme: triangular antecedents, production-term weights.
//    Learns antecedent centres (half-widths stay fixed, so a set translates
//    rigidly) and consequent coefficients.
//  * Sugeno scheme: Gaussian antecedents, product firing strengths. Learns
//    centres, widths and consequent coefficients.
//
// Centre gradient of the production scheme, for the rule's minimising input
// j* (ties go to the lowest index; other inputs get zero):
//
//   dE/dc_ij* = -(target - Y) * (y_i - Y) / S * (-1) * d(rate_ij*)/dc_ij*
//
// with S the sum of active production terms and d(rate)/dc equal to
// -1/right_width on the right half, +1/left_width on the left half, 0 outside
// the support, and the mean of the two one-sided slopes when the input sits
// exactly on the centre.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mrfuzzy/dataset.hpp"
#include "mrfuzzy/rule_base.hpp"

namespace mrfuzzy {

/// 1/2 (target - prediction)^2.
double squared_error(double target, double prediction) noexcept;

/// dE/dc for a consequent coefficient: -residual * weight / weight_sum * regressor
/// (regressor is 1 for the bias c_i0). Throws DegenerateWeightsError if weight_sum <= 0.
double grad_consequent(double residual, double weight, double weight_sum, double regressor = 1.0);

/// 100 * (1 - mean |prediction - target| / |target|). Throws NumericError on a zero target.
double accuracy_percent(std::span<const double> targets, std::span<const double> predictions);

inline constexpr double kGaussianWidthFloor = 1e-6;

// ---------------------------------------------------------------------------
// Production scheme

/// Flat m x n parameter arrays (row-major by rule) plus m x (n + 1) coefficients.
struct ProductionParams {
  std::size_t rules = 0;
  std::size_t inputs = 0;
  std::vector<double> centers;
  std::vector<double> left_widths;
  std::vector<double> right_widths;
  std::vector<double> coefficients;

  static ProductionParams from_rulebase(const RuleBase& rb);
  /// Rule base with the same dimensions and labels as layout.
  RuleBase to_rulebase(const RuleBase& layout) const;
};

/// Everything the backward pass needs from one forward evaluation.
struct ProductionForward {
  double output = 0.0;
  double weight_sum = 0.0;
  std::vector<double> rates;           // m x n
  std::vector<double> terms;           // d_i
  std::vector<std::size_t> argmin;     // minimising input per rule
  std::vector<double> consequents;     // y_i
  std::vector<unsigned char> active;   // d_i > d0
  std::size_t active_count = 0;
};

/// Returns false (leaving output undefined) when no rule exceeds d0.
bool forward_production(const ProductionParams& p, std::span<const double> x, double d0, ProductionForward& fwd);

/// Slope of the singleton moving rate with respect to the set centre.
double rate_center_slope(double x, double center, double left_width, double right_width) noexcept;

/// dE/dc_ij for one rule and input. Zero for inactive rules and non-minimising inputs.
double grad_center_production(const ProductionParams& p, const ProductionForward& fwd, std::span<const double> x,
                              double target, std::size_t rule, std::size_t input);

struct ProductionGradient {
  std::vector<double> centers;
  std::vector<double> coefficients;
};

void gradient_production(const ProductionParams& p, const ProductionForward& fwd, std::span<const double> x,
                         double target, ProductionGradient& grad);

// ---------------------------------------------------------------------------
// Sugeno scheme

struct SugenoParams {
  std::size_t rules = 0;
  std::size_t inputs = 0;
  std::vector<double> centers;  // a_ij
  std::vector<double> widths;   // b_ij
  std::vector<double> coefficients;

  static SugenoParams from_rulebase(const RuleBase& rb);
  RuleBase to_rulebase(const RuleBase& layout) const;
};

struct SugenoForward {
  double output = 0.0;
  double weight_sum = 0.0;
  std::vector<double> weights;      // product of memberships per rule
  std::vector<double> consequents;  // y_i
};

/// Returns false when every firing strength underflows to zero.
bool forward_sugeno(const SugenoParams& p, std::span<const double> x, SugenoForward& fwd);

struct SugenoGradient {
  std::vector<double> centers;
  std::vector<double> widths;
  std::vector<double> coefficients;
};

void gradient_sugeno(const SugenoParams& p, const SugenoForward& fwd, std::span<const double> x, double target,
                     SugenoGradient& grad);

// ---------------------------------------------------------------------------
// Training

/// How targets are presented to the optimiser. Gradients of the centre
/// parameters scale with the square of the target units, so raw targets in
/// the hundreds make any single learning rate either stall the consequents or
/// throw the antecedents out of the data range.
enum class TargetScaling {
  None,
  MinMax,  // map [min, max] of the training targets onto [-1, 1]
};

/// Target transform used by TargetScaling::MinMax. A constant target column
/// is scaled by its magnitude (or 1 when it is zero).
ColumnTransform fit_target_transform(std::span<const double> targets);

/// Returns rb with every consequent line replaced by scale * y + offset. The
/// weighted average commutes with the affine map, so inference on the result
/// equals scale * (inference on rb) + offset.
RuleBase map_consequents(const RuleBase& rb, double scale, double offset);

enum class EmptyActivePolicy {
  Skip,  // leave parameters untouched and count the sample
  Fail,  // throw EmptyActiveSetError
  AllRules,  // retry with d0 = 0, then skip if still empty
};

struct TrainConfig {
  double eta = 0.01;
  std::size_t iterations = 32760;  // single-sample updates
  double d0 = 0.0;
  std::uint64_t seed = 0;
  std::size_t record_every = 0;  // 0: once per pass over the data
  bool shuffle = false;          // reshuffle the visiting order each pass
  EmptyActivePolicy on_empty = EmptyActivePolicy::Skip;
  TargetScaling target_scaling = TargetScaling::MinMax;

  /// Throws UsageError unless eta > 0, iterations >= 1 and 0 <= d0 <= 1.
  void validate() const;
};

struct LossPoint {
  std::size_t iteration = 0;
  double loss = 0.0;             // mean E over predictable samples, raw target units
  double elapsed_seconds = 0.0;  // update time only, excludes loss evaluation
};

/// model, predictions and loss are all in raw target units regardless of
/// TrainConfig::target_scaling.
struct TrainReport {
  RuleBase model;
  std::vector<LossPoint> loss_curve;
  std::vector<double> epoch_seconds;
  double train_seconds = 0.0;
  double accuracy = 0.0;  // on the training data, see accuracy_percent
  std::vector<double> predictions;
  std::size_t unpredictable_samples = 0;  // counted as 100% error in accuracy
  std::size_t skipped_updates = 0;
  std::size_t width_clamps = 0;
};

/// Production scheme. initial must be triangular with the dataset's input count.
TrainReport train_production(const RuleBase& initial, const Dataset& data, const TrainConfig& cfg);

/// Sugeno scheme. initial must be Gaussian with the dataset's input count.
TrainReport train_sugeno(const RuleBase& initial, const Dataset& data, const TrainConfig& cfg);

}  // namespace mrfuzzy
