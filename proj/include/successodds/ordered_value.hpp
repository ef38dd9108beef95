#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "successodds/error.hpp"
#include "successodds/rational.hpp"

namespace successodds {

enum class ValueKind : std::uint8_t { numeric, ordinal };

inline constexpr int kMaxDecimals = 9;
inline constexpr std::int64_t kMaxMantissa = 1'000'000'000'000'000;  // 10^15

namespace detail {

inline constexpr std::int64_t pow10(int n) {
  std::int64_t p = 1;
  for (int i = 0; i < n; ++i) p *= 10;
  return p;
}

// FNV-1a over the category list; identifies a category list inside values.
inline std::uint64_t fingerprint(const std::vector<std::string>& categories) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const auto& c : categories) {
    for (unsigned char ch : c) mix(ch);
    mix(0xff);
  }
  return h | 1u;  // never 0, which marks numeric values
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Exact, totally ordered outcome value.
///
/// Numeric values are a signed mantissa with a decimal exponent
/// (`mantissa * 10^-decimals`); ordinal values are positions in a category
/// list identified by `tag`. Comparisons across kinds or category lists throw
/// `E_SCALE`; numeric values of different decimal scales compare exactly.
class OrderedValue {
 public:
  OrderedValue() = default;

  static OrderedValue numeric(std::int64_t mantissa, int decimals) {
    if (decimals < 0 || decimals > kMaxDecimals) {
      fail(ErrorCode::scale, "decimal scale out of range: " + std::to_string(decimals));
    }
    if (mantissa > kMaxMantissa || mantissa < -kMaxMantissa) {
      fail(ErrorCode::scale, "value magnitude exceeds 10^15 at scale");
    }
    return OrderedValue(ValueKind::numeric, mantissa, static_cast<std::uint8_t>(decimals), 0);
  }

  static OrderedValue ordinal(std::int64_t index, std::uint64_t list_tag) {
    return OrderedValue(ValueKind::ordinal, index, 0, list_tag);
  }

  ValueKind kind() const noexcept { return kind_; }
  std::int64_t payload() const noexcept { return payload_; }
  int decimals() const noexcept { return decimals_; }
  std::uint64_t tag() const noexcept { return tag_; }

  bool comparable_with(const OrderedValue& other) const noexcept {
    return kind_ == other.kind_ && tag_ == other.tag_;
  }

  /// Sort key valid among mutually comparable values.
  __int128 key() const noexcept {
    if (kind_ == ValueKind::ordinal) return payload_;
    return static_cast<__int128>(payload_) * detail::pow10(kMaxDecimals - decimals_);
  }

  /// Exact numeric value (ordinal: the category index).
  Rational to_rational() const {
    if (kind_ == ValueKind::ordinal) return Rational(payload_);
    return Rational(payload_, detail::pow10(decimals_));
  }

  /// Same value re-expressed with more decimals.
  OrderedValue rescaled(int decimals) const {
    if (kind_ != ValueKind::numeric || decimals < decimals_) {
      fail(ErrorCode::scale, "cannot rescale value to fewer decimals");
    }
    return numeric(payload_ * detail::pow10(decimals - decimals_), decimals);
  }

  friend std::strong_ordering operator<=>(const OrderedValue& a, const OrderedValue& b) {
    if (!a.comparable_with(b)) {
      fail(ErrorCode::scale, "comparison of values from incompatible scales");
    }
    return a.key() <=> b.key();
  }

  friend bool operator==(const OrderedValue& a, const OrderedValue& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  OrderedValue(ValueKind kind, std::int64_t payload, std::uint8_t decimals, std::uint64_t tag)
      : kind_(kind), decimals_(decimals), payload_(payload), tag_(tag) {}

  ValueKind kind_ = ValueKind::numeric;
  std::uint8_t decimals_ = 0;
  std::int64_t payload_ = 0;
  std::uint64_t tag_ = 0;
};

/// Shared scale metadata of a dataset: `numeric(max_decimals)` or
/// `ordinal([c1,...,ck])` with categories in rank order.
class Scale {
 public:
  Scale() = default;

  static Scale numeric(int max_decimals) {
    if (max_decimals < 0 || max_decimals > kMaxDecimals) {
      fail(ErrorCode::usage, "numeric scale needs 0..9 decimals, got " + std::to_string(max_decimals));
    }
    Scale s;
    s.kind_ = ValueKind::numeric;
    s.decimals_ = max_decimals;
    return s;
  }

  static Scale ordinal(std::vector<std::string> categories) {
    if (categories.empty()) fail(ErrorCode::usage, "ordinal scale needs at least one category");
    for (std::size_t i = 0; i < categories.size(); ++i) {
      for (std::size_t j = i + 1; j < categories.size(); ++j) {
        if (categories[i] == categories[j]) {
          fail(ErrorCode::usage, "duplicate ordinal category '" + categories[i] + "'");
        }
      }
    }
    Scale s;
    s.kind_ = ValueKind::ordinal;
    s.tag_ = detail::fingerprint(categories);
    s.categories_ = std::make_shared<const std::vector<std::string>>(std::move(categories));
    return s;
  }

  /// Parses "numeric(d)" or "ordinal([a,b,c])".
  static Scale parse(std::string_view spec) {
    spec = detail::trim(spec);
    auto bad = [&]() -> Scale {
      fail(ErrorCode::usage, "bad scale spec '" + std::string(spec) +
                                 "' (expected numeric(d) or ordinal([c1,...,ck]))");
    };
    auto body = [&](std::string_view prefix) -> std::optional<std::string_view> {
      if (spec.size() < prefix.size() + 2 || spec.substr(0, prefix.size()) != prefix) return std::nullopt;
      std::string_view rest = spec.substr(prefix.size());
      if (rest.front() != '(' || rest.back() != ')') return std::nullopt;
      return detail::trim(rest.substr(1, rest.size() - 2));
    };
    if (auto inner = body("numeric")) {
      int d = -1;
      auto [ptr, ec] = std::from_chars(inner->data(), inner->data() + inner->size(), d);
      if (ec != std::errc{} || ptr != inner->data() + inner->size()) return bad();
      return numeric(d);
    }
    if (auto inner = body("ordinal")) {
      if (inner->size() < 2 || inner->front() != '[' || inner->back() != ']') return bad();
      std::string_view list = inner->substr(1, inner->size() - 2);
      std::vector<std::string> cats;
      while (true) {
        auto comma = list.find(',');
        cats.emplace_back(detail::trim(list.substr(0, comma)));
        if (cats.back().empty()) return bad();
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
      }
      return ordinal(std::move(cats));
    }
    return bad();
  }

  ValueKind kind() const noexcept { return kind_; }
  int decimals() const noexcept { return decimals_; }
  std::uint64_t tag() const noexcept { return tag_; }
  const std::vector<std::string>& categories() const {
    static const std::vector<std::string> none;
    return categories_ ? *categories_ : none;
  }

  std::string spec() const {
    if (kind_ == ValueKind::numeric) return "numeric(" + std::to_string(decimals_) + ")";
    std::string out = "ordinal([";
    const auto& cats = categories();
    for (std::size_t i = 0; i < cats.size(); ++i) {
      if (i) out += ',';
      out += cats[i];
    }
    return out + "])";
  }

  /// Values of the two scales can be compared with each other.
  bool compatible(const Scale& other) const noexcept {
    return kind_ == other.kind_ && tag_ == other.tag_;
  }

  bool operator==(const Scale& other) const noexcept {
    return compatible(other) && decimals_ == other.decimals_;
  }

  /// Parses one cell. Numeric cells keep the written decimal exactly and are
  /// stored at this scale's decimals; ordinal cells must match a category
  /// verbatim.
  OrderedValue parse_value(std::string_view cell) const {
    std::string_view text = detail::trim(cell);
    if (kind_ == ValueKind::ordinal) {
      const auto& cats = categories();
      auto it = std::find(cats.begin(), cats.end(), text);
      if (it == cats.end()) {
        fail(ErrorCode::scale, "unknown ordinal category '" + std::string(text) + "'");
      }
      return OrderedValue::ordinal(it - cats.begin(), tag_);
    }

    auto bad = [&]() -> OrderedValue {
      fail(ErrorCode::parse, "unparseable numeric value '" + std::string(text) + "'");
    };
    std::size_t pos = 0;
    bool negative = false;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
      negative = text[0] == '-';
      ++pos;
    }
    std::string digits;
    int frac = 0;
    bool point = false;
    for (; pos < text.size(); ++pos) {
      char c = text[pos];
      if (c >= '0' && c <= '9') {
        digits += c;
        if (point) ++frac;
      } else if (c == '.' && !point) {
        point = true;
      } else {
        return bad();
      }
    }
    if (digits.empty()) return bad();
    // Trailing zeros past the scale carry no information.
    while (frac > decimals_ && digits.back() == '0') {
      digits.pop_back();
      --frac;
    }
    if (frac > decimals_) {
      fail(ErrorCode::scale, "decimal precision exceeded in '" + std::string(text) + "' (scale " +
                                 spec() + ")");
    }
    digits.append(static_cast<std::size_t>(decimals_ - frac), '0');
    auto first = digits.find_first_not_of('0');
    digits = first == std::string::npos ? "0" : digits.substr(first);
    if (digits.size() > 16) fail(ErrorCode::scale, "value magnitude exceeds 10^15 at scale");
    std::int64_t mantissa = 0;
    std::from_chars(digits.data(), digits.data() + digits.size(), mantissa);
    return OrderedValue::numeric(negative ? -mantissa : mantissa, decimals_);
  }

  std::string format(const OrderedValue& v) const {
    if (v.kind() == ValueKind::ordinal) {
      if (v.tag() != tag_) fail(ErrorCode::scale, "value does not belong to this category list");
      return categories().at(static_cast<std::size_t>(v.payload()));
    }
    return format_value(v);
  }

  /// Plain decimal text of a numeric value at its own decimals.
  static std::string format_value(const OrderedValue& v) {
    if (v.kind() == ValueKind::ordinal) return "#" + std::to_string(v.payload());
    std::int64_t m = v.payload();
    std::string digits = std::to_string(m < 0 ? -m : m);
    int d = v.decimals();
    if (d > 0) {
      if (digits.size() <= static_cast<std::size_t>(d)) {
        digits.insert(0, static_cast<std::size_t>(d) + 1 - digits.size(), '0');
      }
      digits.insert(digits.size() - static_cast<std::size_t>(d), ".");
    }
    return m < 0 ? "-" + digits : digits;
  }

  /// Checks that a value conforms to this scale.
  bool admits(const OrderedValue& v) const noexcept {
    if (v.kind() != kind_) return false;
    if (kind_ == ValueKind::ordinal) {
      return v.tag() == tag_ && v.payload() >= 0 &&
             v.payload() < static_cast<std::int64_t>(categories().size());
    }
    return v.decimals() <= decimals_;
  }

 private:
  ValueKind kind_ = ValueKind::numeric;
  int decimals_ = 0;
  std::uint64_t tag_ = 0;
  std::shared_ptr<const std::vector<std::string>> categories_;
};

/// Numeric value from decimal text; decimals inferred from the text.
inline OrderedValue decimal(std::string_view text) {
  auto point = text.find('.');
  int d = point == std::string_view::npos ? 0 : static_cast<int>(text.size() - point - 1);
  return Scale::numeric(std::min(d, kMaxDecimals)).parse_value(text);
}

}  // namespace successodds
