#include "mrfuzzy/rule_base.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "mrfuzzy/errors.hpp"

namespace mrfuzzy {

const char* to_string(SetKind kind) noexcept {
  return kind == SetKind::Triangular ? "triangular" : "gaussian";
}

double Rule::consequent(std::span<const double> x) const noexcept {
  double y = coefficients[0];
  for (std::size_t j = 0; j < x.size(); ++j) y += coefficients[j + 1] * x[j];
  return y;
}

namespace {

bool valid_token(const std::string& s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch) != 0; });
}

}  // namespace

RuleBase::RuleBase(SetKind kind, std::vector<Dimension> dimensions, std::vector<Rule> rules)
    : kind_(kind), dimensions_(std::move(dimensions)), rules_(std::move(rules)) {
  const std::size_t n = dimensions_.size();
  if (n == 0) throw UsageError("rule base needs at least one input");
  if (rules_.empty()) throw UsageError("rule base needs at least one rule");
  for (const auto& dim : dimensions_) {
    if (!valid_token(dim.name)) throw UsageError("input name must be a non-empty token without whitespace");
    if (dim.labels.empty()) throw UsageError("input '" + dim.name + "' has no labels");
    for (const auto& label : dim.labels) {
      if (!valid_token(label) || label == "->") throw UsageError("invalid set label '" + label + "'");
    }
    if (dim.raw_range && !(dim.raw_range->lo < dim.raw_range->hi)) {
      throw UsageError("input '" + dim.name + "' has an empty raw range");
    }
  }
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Rule& r = rules_[i];
    const std::string where = "rule " + std::to_string(i + 1);
    if (r.antecedents.size() != n || r.labels.size() != n) {
      throw UsageError(where + ": expected " + std::to_string(n) + " antecedents");
    }
    if (r.coefficients.size() != n + 1) {
      throw UsageError(where + ": expected " + std::to_string(n + 1) + " consequent coefficients");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const bool tri = std::holds_alternative<TriangularSet>(r.antecedents[j]);
      if (tri != (kind_ == SetKind::Triangular)) {
        throw UsageError(where + ": antecedent kind does not match rule base kind");
      }
      if (r.labels[j] >= dimensions_[j].labels.size()) throw UsageError(where + ": label index out of range");
    }
  }
}

const std::string& RuleBase::label(std::size_t i, std::size_t j) const {
  return dimensions_.at(j).labels.at(rules_.at(i).labels.at(j));
}

// ---------------------------------------------------------------------------
// Text format

namespace {

constexpr std::string_view kMagic = "mrfuzzy-rulebase";
constexpr int kVersion = 1;

void put_number(std::ostream& out, double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.write(buf.data(), res.ptr - buf.data());
}

struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

class LineCursor {
 public:
  LineCursor(std::vector<Token> tokens, std::size_t line) : tokens_(std::move(tokens)), line_(line) {}

  bool done() const { return pos_ >= tokens_.size(); }
  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t col = pos_ < tokens_.size() ? tokens_[pos_].column
                                            : (tokens_.empty() ? 1 : tokens_.back().column + tokens_.back().text.size());
    throw ParseError(what, line_, col);
  }

  std::string_view peek() const { return done() ? std::string_view{} : tokens_[pos_].text; }

  std::string_view word(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    return tokens_[pos_++].text;
  }

  void keyword(std::string_view kw) {
    if (done() || tokens_[pos_].text != kw) fail("expected '" + std::string(kw) + "'");
    ++pos_;
  }

  double number() {
    if (done()) fail("expected a number");
    const auto text = tokens_[pos_].text;
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
      fail("invalid number '" + std::string(text) + "'");
    }
    ++pos_;
    return v;
  }

  void expect_end() {
    if (!done()) fail("unexpected token '" + std::string(peek()) + "'");
  }

 private:
  std::vector<Token> tokens_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_rulebase(std::ostream& out, const RuleBase& rb) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << to_string(rb.kind()) << '\n';
  for (const auto& dim : rb.dimensions()) {
    out << "dim " << dim.name;
    if (dim.raw_range) {
      out << " range ";
      put_number(out, dim.raw_range->lo);
      out << ' ';
      put_number(out, dim.raw_range->hi);
    }
    out << " labels";
    for (const auto& label : dim.labels) out << ' ' << label;
    out << '\n';
  }
  for (std::size_t i = 0; i < rb.size(); ++i) {
    const Rule& rule = rb.rule(i);
    out << "rule";
    for (std::size_t j = 0; j < rb.input_dim(); ++j) {
      out << ' ' << rb.label(i, j);
      if (const auto* tri = std::get_if<TriangularSet>(&rule.antecedents[j])) {
        for (double v : {tri->left(), tri->center(), tri->right()}) {
          out << ' ';
          put_number(out, v);
        }
      } else {
        const auto& g = std::get<GaussianSet>(rule.antecedents[j]);
        for (double v : {g.center(), g.width()}) {
          out << ' ';
          put_number(out, v);
        }
      }
    }
    out << " ->";
    for (double c : rule.coefficients) {
      out << ' ';
      put_number(out, c);
    }
    out << '\n';
  }
  out << "end\n";
}

std::string format_rulebase(const RuleBase& rb) {
  std::ostringstream out;
  write_rulebase(out, rb);
  return out.str();
}

RuleBase read_rulebase(std::istream& in) {
  enum class Stage { Magic, Kind, Body, Done };
  Stage stage = Stage::Magic;
  SetKind kind = SetKind::Triangular;
  std::vector<Dimension> dims;
  std::vector<Rule> rules;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto tokens = tokenize(raw);
    if (tokens.empty() || tokens.front().text.front() == '#') continue;
    LineCursor cur(std::move(tokens), line_no);

    switch (stage) {
      case Stage::Magic: {
        cur.keyword(kMagic);
        const double version = cur.number();
        if (version != kVersion) cur.fail("unsupported format version");
        cur.expect_end();
        stage = Stage::Kind;
        break;
      }
      case Stage::Kind: {
        cur.keyword("kind");
        const auto k = cur.word("set kind");
        if (k == "triangular") {
          kind = SetKind::Triangular;
        } else if (k == "gaussian") {
          kind = SetKind::Gaussian;
        } else {
          throw ParseError("unknown set kind '" + std::string(k) + "'", line_no, 6);
        }
        cur.expect_end();
        stage = Stage::Body;
        break;
      }
      case Stage::Body: {
        const auto head = cur.word("record");
        if (head == "dim") {
          if (!rules.empty()) cur.fail("'dim' records must precede rules");
          Dimension dim;
          dim.name = std::string(cur.word("input name"));
          if (cur.peek() == "range") {
            cur.keyword("range");
            Interval range;
            range.lo = cur.number();
            range.hi = cur.number();
            if (!(range.lo < range.hi)) cur.fail("range requires lo < hi");
            dim.raw_range = range;
          }
          cur.keyword("labels");
          while (!cur.done()) {
            auto label = std::string(cur.word("label"));
            if (std::find(dim.labels.begin(), dim.labels.end(), label) != dim.labels.end()) {
              cur.fail("duplicate label '" + label + "'");
            }
            dim.labels.push_back(std::move(label));
          }
          if (dim.labels.empty()) cur.fail("expected at least one label");
          dims.push_back(std::move(dim));
        } else if (head == "rule") {
          if (dims.empty()) cur.fail("'rule' before any 'dim' record");
          Rule rule;
          for (const auto& dim : dims) {
            const auto label = cur.word("set label");
            auto it = std::find(dim.labels.begin(), dim.labels.end(), label);
            if (it == dim.labels.end()) {
              throw ParseError("label '" + std::string(label) + "' is not declared for input '" + dim.name + "'",
                               line_no, 1);
            }
            rule.labels.push_back(static_cast<std::size_t>(it - dim.labels.begin()));
            try {
              if (kind == SetKind::Triangular) {
                const double l = cur.number();
                const double c = cur.number();
                const double r = cur.number();
                rule.antecedents.emplace_back(TriangularSet(l, c, r));
              } else {
                const double a = cur.number();
                const double b = cur.number();
                rule.antecedents.emplace_back(GaussianSet(a, b));
              }
            } catch (const UsageError& e) {
              throw ParseError(e.what(), line_no, 1);
            }
          }
          cur.keyword("->");
          for (std::size_t j = 0; j <= dims.size(); ++j) rule.coefficients.push_back(cur.number());
          cur.expect_end();
          rules.push_back(std::move(rule));
        } else if (head == "end") {
          cur.expect_end();
          stage = Stage::Done;
        } else {
          throw ParseError("unknown record '" + std::string(head) + "'", line_no, 1);
        }
        break;
      }
      case Stage::Done:
        throw ParseError("content after 'end'", line_no, 1);
    }
  }
  if (stage != Stage::Done) throw ParseError("unexpected end of input (missing 'end')", line_no + 1, 1);
  try {
    return RuleBase(kind, std::move(dims), std::move(rules));
  } catch (const UsageError& e) {
    throw ParseError(e.what(), line_no, 1);
  }
}

RuleBase parse_rulebase(const std::string& text) {
  std::istringstream in(text);
  return read_rulebase(in);
}

}  // namespace mrfuzzy
