#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrfuzzy/rule_base.hpp"

namespace mrfuzzy {

/// Rows of numeric inputs with one numeric target each. Immutable.
class Dataset {
 public:
  /// inputs is row-major, size() * input_names.size() values.
  Dataset(std::vector<std::string> input_names, std::string target_name, std::vector<double> inputs,
          std::vector<double> targets);

  std::size_t size() const noexcept { return targets_.size(); }
  std::size_t input_dim() const noexcept { return input_names_.size(); }
  std::span<const double> row(std::size_t i) const { return {inputs_.data() + i * input_dim(), input_dim()}; }
  double target(std::size_t i) const { return targets_.at(i); }
  std::span<const double> targets() const noexcept { return targets_; }
  std::vector<double> column(std::size_t j) const;
  std::span<const std::string> input_names() const noexcept { return input_names_; }
  const std::string& target_name() const noexcept { return target_name_; }

 private:
  std::vector<std::string> input_names_;
  std::string target_name_;
  std::vector<double> inputs_;
  std::vector<double> targets_;
};

/// Comma-separated, header row, '.' decimal point. The target is the last
/// column unless target_column (0-based) says otherwise. Throws ParseError
/// pointing at the offending cell.
Dataset read_csv(std::istream& in, std::optional<std::size_t> target_column = std::nullopt);
Dataset load_csv(const std::filesystem::path& path, std::optional<std::size_t> target_column = std::nullopt);

void write_csv(std::ostream& out, const Dataset& ds);

/// Annual precipitation against two predictive factors, 1952-1977 (26 rows).
Dataset precipitation_fixture();
/// Network security situation value against three factors (60 rows).
Dataset security_fixture();

/// Affine map of [min, max] onto [-1, 1].
struct ColumnTransform {
  double min = -1.0;
  double max = 1.0;

  double forward(double x) const noexcept { return (2.0 * x - (min + max)) / (max - min); }
  double inverse(double y) const noexcept { return (y * (max - min) + (min + max)) / 2.0; }
};

struct NormalizedDataset {
  Dataset data;
  std::vector<ColumnTransform> transforms;  // one per input column
};

/// Min-max scale every input column to [-1, 1]; targets stay in raw units.
/// Throws DataError on a constant column.
NormalizedDataset normalize(const Dataset& ds);

/// Apply previously fitted transforms (e.g. to score new data with a trained model).
Dataset apply_transforms(const Dataset& ds, std::span<const ColumnTransform> transforms);

/// Grid partition of the input space.
struct PartitionSpec {
  struct Axis {
    std::string name;
    std::size_t sets = 0;
    double min = -1.0;
    double max = 1.0;
    std::vector<std::string> labels;  // empty: default_labels(sets)
  };
  std::vector<Axis> axes;

  /// Same set count and range on every axis, named x1..xn.
  static PartitionSpec uniform(std::size_t inputs, std::size_t sets, double min = -1.0, double max = 1.0);

  /// Throws UsageError unless every axis has >= 2 sets, min < max and a label per set.
  void validate() const;
};

/// PL..NL for six sets, PL/PM/PS for three, A1..Ak otherwise. Labels are
/// listed from the largest centre down.
std::vector<std::string> default_labels(std::size_t sets);

/// Equally spaced centres over each axis range, listed in label order (the
/// first label sits at max). Triangles overlap by half: a set's support ends
/// at its neighbours' centres, and the outermost sets extend one spacing past
/// the range. Gaussian sets share the centres and cross at 0.5 halfway between
/// neighbours, i.e. width = spacing^2 / (4 ln 2). Rules form the Cartesian
/// product with the last input varying fastest; every coefficient is zero.
RuleBase build_grid_rulebase(const PartitionSpec& spec, SetKind kind);

}  // namespace mrfuzzy
