#include "mrfuzzy/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "mrfuzzy/errors.hpp"

namespace mrfuzzy {

Dataset::Dataset(std::vector<std::string> input_names, std::string target_name, std::vector<double> inputs,
                 std::vector<double> targets)
    : input_names_(std::move(input_names)),
      target_name_(std::move(target_name)),
      inputs_(std::move(inputs)),
      targets_(std::move(targets)) {
  if (input_names_.empty()) throw DataError("dataset needs at least one input column");
  if (inputs_.size() != targets_.size() * input_names_.size()) {
    throw DataError("input matrix has " + std::to_string(inputs_.size()) + " cells, expected " +
                    std::to_string(targets_.size() * input_names_.size()));
  }
  for (double v : inputs_) {
    if (!std::isfinite(v)) throw DataError("dataset contains a non-finite input");
  }
  for (double v : targets_) {
    if (!std::isfinite(v)) throw DataError("dataset contains a non-finite target");
  }
}

std::vector<double> Dataset::column(std::size_t j) const {
  if (j >= input_dim()) throw UsageError("column index out of range");
  std::vector<double> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(inputs_[i * input_dim() + j]);
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

struct Cell {
  std::string_view text;
  std::size_t column;  // 1-based character column
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<Cell> split_cells(std::string_view line) {
  std::vector<Cell> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
    cells.push_back({trim(line.substr(start, end - start)), start + 1});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool blank(std::string_view s) { return trim(s).empty(); }

}  // namespace

Dataset read_csv(std::istream& in, std::optional<std::size_t> target_column) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    for (const auto& cell : split_cells(line)) {
      if (cell.text.empty()) throw ParseError("empty column name", line_no, cell.column);
      header.emplace_back(cell.text);
    }
    break;
  }
  if (header.empty()) throw ParseError("empty CSV input: no header row", line_no + 1, 1);
  if (header.size() < 2) throw ParseError("CSV needs at least one input and one target column", line_no, 1);

  const std::size_t cols = header.size();
  const std::size_t target = target_column.value_or(cols - 1);
  if (target >= cols) throw DataError("target column " + std::to_string(target) + " does not exist");

  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols; ++c) {
    if (c != target) names.push_back(header[c]);
  }

  std::vector<double> inputs;
  std::vector<double> targets;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    const auto cells = split_cells(line);
    if (cells.size() != cols) {
      throw ParseError("expected " + std::to_string(cols) + " cells, found " + std::to_string(cells.size()), line_no,
                       1);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const auto text = cells[c].text;
      if (text.empty()) throw ParseError("missing value in column '" + header[c] + "'", line_no, cells[c].column);
      double v = 0.0;
      const char* first = text.data();
      if (*first == '+') ++first;
      auto res = std::from_chars(first, text.data() + text.size(), v);
      if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ParseError("non-numeric value '" + std::string(text) + "' in column '" + header[c] + "'", line_no,
                         cells[c].column);
      }
      (c == target ? targets : inputs).push_back(v);
    }
  }
  if (targets.empty()) throw ParseError("CSV has a header but no data rows", line_no + 1, 1);
  return Dataset(std::move(names), header[target], std::move(inputs), std::move(targets));
}

Dataset load_csv(const std::filesystem::path& path, std::optional<std::size_t> target_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_csv(in, target_column);
}

void write_csv(std::ostream& out, const Dataset& ds) {
  for (const auto& name : ds.input_names()) out << name << ',';
  out << ds.target_name() << '\n';
  char buf[32];
  auto put = [&](double v) {
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
  };
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.row(i)) {
      put(v);
      out << ',';
    }
    put(ds.target(i));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Normalization

NormalizedDataset normalize(const Dataset& ds) {
  std::vector<ColumnTransform> transforms;
  for (std::size_t j = 0; j < ds.input_dim(); ++j) {
    const auto col = ds.column(j);
    if (col.empty()) throw DataError("cannot normalize an empty dataset");
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    if (!(*lo < *hi)) throw DataError("column '" + ds.input_names()[j] + "' is constant");
    transforms.push_back({*lo, *hi});
  }
  return {apply_transforms(ds, transforms), std::move(transforms)};
}

Dataset apply_transforms(const Dataset& ds, std::span<const ColumnTransform> transforms) {
  if (transforms.size() != ds.input_dim()) throw DataError("transform count does not match input dimension");
  std::vector<double> inputs;
  inputs.reserve(ds.size() * ds.input_dim());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto row = ds.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) inputs.push_back(transforms[j].forward(row[j]));
  }
  std::vector<std::string> names(ds.input_names().begin(), ds.input_names().end());
  std::vector<double> targets(ds.targets().begin(), ds.targets().end());
  return Dataset(std::move(names), ds.target_name(), std::move(inputs), std::move(targets));
}

// ---------------------------------------------------------------------------
// Grid rule bases

PartitionSpec PartitionSpec::uniform(std::size_t inputs, std::size_t sets, double min, double max) {
  PartitionSpec spec;
  for (std::size_t j = 0; j < inputs; ++j) spec.axes.push_back({"x" + std::to_string(j + 1), sets, min, max, {}});
  return spec;
}

void PartitionSpec::validate() const {
  if (axes.empty()) throw UsageError("partition needs at least one axis");
  for (const auto& axis : axes) {
    if (axis.sets < 2) throw UsageError("axis '" + axis.name + "' needs at least two sets");
    if (!(axis.min < axis.max)) throw UsageError("axis '" + axis.name + "' needs min < max");
    if (!axis.labels.empty() && axis.labels.size() != axis.sets) {
      throw UsageError("axis '" + axis.name + "' has " + std::to_string(axis.labels.size()) + " labels for " +
                       std::to_string(axis.sets) + " sets");
    }
  }
}

std::vector<std::string> default_labels(std::size_t sets) {
  if (sets == 6) return {"PL", "PM", "PS", "NS", "NM", "NL"};
  if (sets == 3) return {"PL", "PM", "PS"};
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < sets; ++k) labels.push_back("A" + std::to_string(k + 1));
  return labels;
}

RuleBase build_grid_rulebase(const PartitionSpec& spec, SetKind kind) {
  spec.validate();
  const std::size_t n = spec.axes.size();

  std::vector<Dimension> dims;
  std::vector<std::vector<AntecedentSet>> per_axis;
  for (const auto& axis : spec.axes) {
    Dimension dim{axis.name, axis.labels.empty() ? default_labels(axis.sets) : axis.labels, std::nullopt};
    const double spacing = (axis.max - axis.min) / static_cast<double>(axis.sets - 1);
    std::vector<AntecedentSet> sets;
    for (std::size_t k = 0; k < axis.sets; ++k) {
      // Label order runs from the top of the range down; pin the ends exactly.
      const std::size_t steps = axis.sets - 1 - k;
      const double c = steps == 0 ? axis.min : (k == 0 ? axis.max : axis.min + spacing * static_cast<double>(steps));
      if (kind == SetKind::Triangular) {
        sets.emplace_back(TriangularSet(c - spacing, c, c + spacing));
      } else {
        sets.emplace_back(GaussianSet(c, spacing * spacing / (4.0 * std::log(2.0))));
      }
    }
    dims.push_back(std::move(dim));
    per_axis.push_back(std::move(sets));
  }

  std::vector<Rule> rules;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Rule rule;
    rule.labels = idx;
    for (std::size_t j = 0; j < n; ++j) rule.antecedents.push_back(per_axis[j][idx[j]]);
    rule.coefficients.assign(n + 1, 0.0);
    rules.push_back(std::move(rule));

    std::size_t j = n;
    while (j > 0) {
      --j;
      if (++idx[j] < spec.axes[j].sets) break;
      idx[j] = 0;
      if (j == 0) return RuleBase(kind, std::move(dims), std::move(rules));
    }
  }
}

}  // namespace mrfuzzy
