#pragma once

#include <cmath>
#include <compare>
#include <string>

#include "plrkit/errors.hpp"

namespace plrkit {

/// A value in R u {+inf}. Infinity is a tag; the stored double is never used
/// for arithmetic when the tag is set.
class ExtReal {
 public:
  // Implicit on purpose: finite doubles flow into ExtReal everywhere.
  ExtReal(double v) : value_(v), infinite_(false) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(v)) throw DomainError("ExtReal: finite value required, got " + std::to_string(v));
  }

  static ExtReal infinity() { return ExtReal(Tag{}); }

  bool is_finite() const noexcept { return !infinite_; }
  bool is_infinite() const noexcept { return infinite_; }

  double value() const {
    if (infinite_) throw DomainError("ExtReal: value() on +inf");
    return value_;
  }
  double value_or(double fallback) const noexcept { return infinite_ ? fallback : value_; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

  friend ExtReal operator+(const ExtReal& a, double b) { return a.infinite_ ? a : ExtReal(a.value_ + b); }
  friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ + b.value_);
  }
  /// Scaling by r >= 0; 0 * (+inf) is +inf (the function stays outside its domain).
  ExtReal scaled(double r) const {
    if (r < 0) throw DomainError("ExtReal: negative scaling of an extended real");
    return infinite_ ? *this : ExtReal(value_ * r);
  }

  std::string to_string() const;

 private:
  struct Tag {};
  explicit ExtReal(Tag) : value_(0.0), infinite_(true) {}

  double value_;
  bool infinite_;
};

}  // namespace plrkit
