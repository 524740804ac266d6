#pragma once

// Experiment plumbing shared by the command-line tool and the acceptance
// suite: method selection, the default grid rule base, and the timing harness.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mrfuzzy/dataset.hpp"
#include "mrfuzzy/learning.hpp"

namespace mrfuzzy {

enum class Method { Production, Sugeno, TypeDistance };

const char* to_string(Method method) noexcept;
/// Throws UsageError on an unknown name.
Method parse_method(std::string_view name);
/// Triangular for production and type-distance, Gaussian for Sugeno.
SetKind set_kind(Method method) noexcept;

/// Six sets per axis up to two inputs, three beyond.
std::size_t default_sets(std::size_t inputs) noexcept;

/// Zero-consequent grid over [-1, 1] per input, named after the dataset columns.
/// sets == 0 selects default_sets.
RuleBase initial_grid(const Dataset& normalized, Method method, std::size_t sets);

/// Throws UsageError for type-distance, which has no learning scheme.
TrainReport train_method(Method method, const RuleBase& initial, const Dataset& normalized, const TrainConfig& cfg);

struct BenchConfig {
  Method baseline = Method::Sugeno;
  Method candidate = Method::Production;
  std::size_t sets = 0;
  std::size_t reps = 5;
  TrainConfig train;
};

struct ArmTiming {
  Method method = Method::Production;
  std::vector<double> seconds;  // update time per repetition
  double per100_min = 0.0;
  double per100_median = 0.0;
  double accuracy = 0.0;  // of the last repetition
};

struct BenchResult {
  ArmTiming baseline;
  ArmTiming candidate;
  double ratio = 0.0;  // baseline median / candidate median
  std::size_t iterations = 0;
  std::size_t rules = 0;
  bool pinned = false;
};

/// Trains both arms reps times on the normalized dataset, alternating which
/// arm goes first, pinned to one CPU when the platform allows. reps >= 5.
BenchResult run_bench(const Dataset& normalized, const BenchConfig& cfg);

/// Table of per-100-iteration times with the measured ratio and the
/// published reference ratios for comparison.
std::string format_bench_markdown(const BenchResult& result, const std::string& dataset_label);

}  // namespace mrfuzzy
