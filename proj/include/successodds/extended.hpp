#pragma once

#include <compare>
#include <limits>
#include <optional>
#include <type_traits>
#include <string>
#include <utility>

#include "successodds/rational.hpp"

namespace successodds {

enum class ExtendedState { finite, plus_infinity, undefined };

/// A non-negative quantity that may be +inf (x/0 with x > 0) or undefined
/// (0/0). Ratios are built with `Extended::ratio`, never by raw division.
template <typename T>
class Extended {
 public:
  Extended() : state_(ExtendedState::undefined), value_{} {}

  static Extended finite(T value) { return Extended(ExtendedState::finite, std::move(value)); }
  static Extended infinity() { return Extended(ExtendedState::plus_infinity, T{}); }
  static Extended undefined() { return Extended(ExtendedState::undefined, T{}); }

  /// num/den for num, den >= 0.
  static Extended ratio(const T& num, const T& den) {
    if (den > 0) return finite(T(num / den));
    if (num > 0) return infinity();
    return undefined();
  }

  ExtendedState state() const noexcept { return state_; }
  bool is_finite() const noexcept { return state_ == ExtendedState::finite; }
  bool is_infinite() const noexcept { return state_ == ExtendedState::plus_infinity; }
  bool is_undefined() const noexcept { return state_ == ExtendedState::undefined; }

  /// Finite payload; meaningless unless is_finite().
  const T& value() const noexcept { return value_; }

  double to_double() const {
    switch (state_) {
      case ExtendedState::finite:
        if constexpr (std::is_same_v<T, Rational>) {
          return successodds::to_double(value_);
        } else {
          return static_cast<double>(value_);
        }
      case ExtendedState::plus_infinity: return std::numeric_limits<double>::infinity();
      case ExtendedState::undefined: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  /// Undefined values are unordered; +inf sits above every finite value.
  friend std::partial_ordering operator<=>(const Extended& a, const Extended& b) {
    if (a.is_undefined() || b.is_undefined()) return std::partial_ordering::unordered;
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    if (a.value_ < b.value_) return std::partial_ordering::less;
    if (b.value_ < a.value_) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.state_ != b.state_) return false;
    return !a.is_finite() || a.value_ == b.value_;
  }

 private:
  Extended(ExtendedState state, T value) : state_(state), value_(std::move(value)) {}

  ExtendedState state_;
  T value_;
};

using ExtendedRational = Extended<Rational>;
using ExtendedReal = Extended<double>;

inline ExtendedReal to_real(const ExtendedRational& x) {
  switch (x.state()) {
    case ExtendedState::finite: return ExtendedReal::finite(to_double(x.value()));
    case ExtendedState::plus_infinity: return ExtendedReal::infinity();
    case ExtendedState::undefined: break;
  }
  return ExtendedReal::undefined();
}

/// JSON-facing spelling: "inf" / "undef"; finite values are not rendered here.
inline const char* state_token(ExtendedState s) {
  switch (s) {
    case ExtendedState::plus_infinity: return "inf";
    case ExtendedState::undefined: return "undef";
    case ExtendedState::finite: break;
  }
  return "finite";
}

}  // namespace successodds
