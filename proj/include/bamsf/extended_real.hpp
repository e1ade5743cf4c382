#pragma once

#include <cmath>
#include <limits>

namespace bamsf {

/// Scalar value in (-inf, +inf]. Used for support-function values and the
/// dual objective; -inf is never produced by construction.
class ExtendedReal {
public:
  ExtendedReal() : value_(0.0), infinite_(false) {}
  ExtendedReal(double v) : value_(v), infinite_(false) {}

  static ExtendedReal infinity() {
    ExtendedReal e;
    e.infinite_ = true;
    e.value_ = std::numeric_limits<double>::infinity();
    return e;
  }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }

  /// Finite value; +inf as a double when infinite.
  double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  ExtendedReal operator+(const ExtendedReal& o) const {
    if (infinite_ || o.infinite_) return infinity();
    return ExtendedReal(value_ + o.value_);
  }
  ExtendedReal& operator+=(const ExtendedReal& o) {
    *this = *this + o;
    return *this;
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ != b.infinite_) return false;
    return a.infinite_ || a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) {
    return a == b || a < b;
  }

private:
  double value_;
  bool infinite_;
};

}  // namespace bamsf
