#include "mrfuzzy/fuzzy_set.hpp"

#include <cmath>
#include <string>

#include "mrfuzzy/errors.hpp"

namespace mrfuzzy {

TriangularSet::TriangularSet(double left, double center, double right)
    : left_(left), center_(center), right_(right) {
  if (!std::isfinite(left) || !std::isfinite(center) || !std::isfinite(right)) {
    throw UsageError("triangular set endpoints must be finite");
  }
  if (!(left < center && center < right)) {
    throw UsageError("triangular set requires left < center < right, got (" + std::to_string(left) + ", " +
                     std::to_string(center) + ", " + std::to_string(right) + ")");
  }
}

TriangularSet TriangularSet::translated(double delta) const {
  return TriangularSet(left_ + delta, center_ + delta, right_ + delta);
}

GaussianSet::GaussianSet(double center, double width) : center_(center), width_(width) {
  if (!std::isfinite(center) || !std::isfinite(width)) {
    throw UsageError("gaussian set parameters must be finite");
  }
  if (!(width > 0.0)) {
    throw UsageError("gaussian set width must be positive, got " + std::to_string(width));
  }
}

double center_of(const AntecedentSet& set) noexcept {
  return std::visit([](const auto& s) { return s.center(); }, set);
}

InputValue InputValue::singleton(double value) {
  if (!std::isfinite(value)) throw UsageError("input value must be finite");
  return InputValue(Kind::Singleton, value, value, value);
}

InputValue InputValue::triangle(double left, double center, double right) {
  if (!std::isfinite(left) || !std::isfinite(center) || !std::isfinite(right)) {
    throw UsageError("input triangle must be finite");
  }
  if (!(left <= center && center <= right)) {
    throw UsageError("input triangle requires left <= center <= right");
  }
  return InputValue(Kind::FuzzyTriangle, left, center, right);
}

double membership(const TriangularSet& set, double x) noexcept {
  const double l = set.left();
  const double c = set.center();
  const double r = set.right();
  if (x >= c && x < r) return (r - x) / (r - c);
  if (x > l && x < c) return (x - l) / (c - l);
  return 0.0;
}

double membership(const GaussianSet& set, double x) noexcept {
  const double dx = x - set.center();
  return std::exp(-(dx * dx) / set.width());
}

double membership(const AntecedentSet& set, double x) noexcept {
  return std::visit([x](const auto& s) { return membership(s, x); }, set);
}

MovingRate moving_rate_singleton(const TriangularSet& set, double x0) noexcept {
  const double l = set.left();
  const double c = set.center();
  const double r = set.right();
  if (x0 >= c && x0 < r) return MovingRate((x0 - c) / (r - c));
  if (x0 > l && x0 <= c) return MovingRate((c - x0) / (c - l));
  return MovingRate(1.0);
}

MovingRate moving_rate_fuzzy(const TriangularSet& set, const InputValue& input) noexcept {
  const double l = set.left();
  const double c = set.center();
  const double r = set.right();
  const double x0 = input.center();
  if (x0 >= c && x0 < r) return MovingRate((x0 - c) / ((r - c) + input.right_width()));
  if (x0 > l && x0 <= c) return MovingRate((c - x0) / ((c - l) + input.left_width()));
  return MovingRate(1.0);
}

MovingRate moving_rate(const TriangularSet& set, const InputValue& input) noexcept {
  return input.is_singleton() ? moving_rate_singleton(set, input.center()) : moving_rate_fuzzy(set, input);
}

}  // namespace mrfuzzy
