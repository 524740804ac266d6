#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrfuzzy/fuzzy_set.hpp"

namespace mrfuzzy {

enum class SetKind { Triangular, Gaussian };

const char* to_string(SetKind kind) noexcept;

/// Closed interval in raw input units.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Per-input metadata: a name, the linguistic labels available on this input
/// and, optionally, the raw range that was mapped onto [-1, 1] before the
/// rule base saw any data.
struct Dimension {
  std::string name;
  std::vector<std::string> labels;
  std::optional<Interval> raw_range;

  friend bool operator==(const Dimension&, const Dimension&) = default;
};

/// If x1 is A_1 and ... and xn is A_n then y = c0 + c1*x1 + ... + cn*xn.
struct Rule {
  std::vector<std::size_t> labels;  // index into Dimension::labels, one per input
  std::vector<AntecedentSet> antecedents;
  std::vector<double> coefficients;  // c0, c1, ..., cn

  /// Consequent line evaluated at x (x.size() must equal n).
  double consequent(std::span<const double> x) const noexcept;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// A homogeneous rule base: every antecedent has the same SetKind.
class RuleBase {
 public:
  /// Throws UsageError when the invariants do not hold (m >= 1, n >= 1,
  /// antecedents and label indices sized n, coefficients sized n + 1, all
  /// antecedents of the declared kind, label indices in range).
  RuleBase(SetKind kind, std::vector<Dimension> dimensions, std::vector<Rule> rules);

  SetKind kind() const noexcept { return kind_; }
  std::size_t input_dim() const noexcept { return dimensions_.size(); }
  std::size_t size() const noexcept { return rules_.size(); }
  std::span<const Dimension> dimensions() const noexcept { return dimensions_; }
  std::span<const Rule> rules() const noexcept { return rules_; }
  const Rule& rule(std::size_t i) const { return rules_.at(i); }

  /// Label text of rule i on input j.
  const std::string& label(std::size_t i, std::size_t j) const;

  friend bool operator==(const RuleBase&, const RuleBase&) = default;

 private:
  SetKind kind_;
  std::vector<Dimension> dimensions_;
  std::vector<Rule> rules_;
};

/// Text serialization. The grammar is documented in docs/rulebase-format.md.
/// Numbers are written in shortest round-trip form, so write/read is exact.
void write_rulebase(std::ostream& out, const RuleBase& rb);
std::string format_rulebase(const RuleBase& rb);

/// Throws ParseError with the offending line/column.
RuleBase read_rulebase(std::istream& in);
RuleBase parse_rulebase(const std::string& text);

}  // namespace mrfuzzy
