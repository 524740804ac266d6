#pragma once

// Antecedent fuzzy sets, observed inputs and the moving-rate measure.
//
// The moving rate of an input x0 with respect to a triangular set is the
// distance |x0 - center| measured in units of the half-width on the side the
// input falls on. It is 0 at the center and 1 at or beyond the support
// boundary, so inside the open support it is exactly the complement of the
// triangular membership.
//
// Fuzzy (triangular) observations widen the denominator by the input
// triangle's half-width on the same side:
//
//   right side:  (x0 - c) / ((r - c) + (ir - x0))
//   left side:   (c - x0) / ((c - l) + (x0 - il))
//
// where (il, x0, ir) is the input triangle. A zero-width observation therefore
// reduces to the singleton formula bit for bit.

#include <variant>

namespace mrfuzzy {

/// Triangular fuzzy set with left < center < right. Asymmetric sets are fine.
class TriangularSet {
 public:
  /// Throws UsageError unless left < center < right and all are finite.
  TriangularSet(double left, double center, double right);

  double left() const noexcept { return left_; }
  double center() const noexcept { return center_; }
  double right() const noexcept { return right_; }
  double left_width() const noexcept { return center_ - left_; }
  double right_width() const noexcept { return right_ - center_; }

  /// Same half-widths, shifted by delta.
  TriangularSet translated(double delta) const;

  friend bool operator==(const TriangularSet&, const TriangularSet&) = default;

 private:
  double left_;
  double center_;
  double right_;
};

/// Gaussian set exp(-(x - center)^2 / width) with width > 0.
class GaussianSet {
 public:
  GaussianSet(double center, double width);

  double center() const noexcept { return center_; }
  double width() const noexcept { return width_; }

  friend bool operator==(const GaussianSet&, const GaussianSet&) = default;

 private:
  double center_;
  double width_;
};

using AntecedentSet = std::variant<TriangularSet, GaussianSet>;

double center_of(const AntecedentSet& set) noexcept;

/// An observed input: a crisp singleton or a triangular fuzzy observation.
class InputValue {
 public:
  enum class Kind { Singleton, FuzzyTriangle };

  static InputValue singleton(double value);
  /// Requires left <= center <= right. Equal endpoints give a zero-width triangle.
  static InputValue triangle(double left, double center, double right);

  Kind kind() const noexcept { return kind_; }
  bool is_singleton() const noexcept { return kind_ == Kind::Singleton; }
  double center() const noexcept { return center_; }
  double left() const noexcept { return left_; }
  double right() const noexcept { return right_; }
  double left_width() const noexcept { return center_ - left_; }
  double right_width() const noexcept { return right_ - center_; }

 private:
  InputValue(Kind kind, double left, double center, double right)
      : kind_(kind), left_(left), center_(center), right_(right) {}

  Kind kind_;
  double left_;
  double center_;
  double right_;
};

/// Dimensionless value in [0, 1].
class MovingRate {
 public:
  constexpr explicit MovingRate(double value) noexcept : value_(value) {}
  constexpr double value() const noexcept { return value_; }

  friend constexpr bool operator==(MovingRate, MovingRate) = default;

 private:
  double value_;
};

double membership(const TriangularSet& set, double x) noexcept;
double membership(const GaussianSet& set, double x) noexcept;
double membership(const AntecedentSet& set, double x) noexcept;

MovingRate moving_rate_singleton(const TriangularSet& set, double x0) noexcept;

/// Width-aware moving rate. Singleton inputs are treated as zero-width triangles.
MovingRate moving_rate_fuzzy(const TriangularSet& set, const InputValue& input) noexcept;

/// Dispatches on the input kind.
MovingRate moving_rate(const TriangularSet& set, const InputValue& input) noexcept;

}  // namespace mrfuzzy
