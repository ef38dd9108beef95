#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "successodds/error.hpp"
#include "successodds/ordered_value.hpp"
#include "successodds/rational.hpp"

namespace successodds {

/// A labeled multiset of outcomes on one scale.
class Sample {
 public:
  Sample() = default;

  Sample(std::string label, Scale scale, std::vector<OrderedValue> values)
      : label_(std::move(label)), scale_(std::move(scale)), values_(std::move(values)) {
    for (const auto& v : values_) {
      if (!scale_.admits(v)) {
        fail(ErrorCode::scale, "value " + Scale::format_value(v) + " does not conform to scale " +
                                   scale_.spec() + " of sample '" + label_ + "'");
      }
    }
  }

  /// Numeric sample from decimal literals; the scale takes the largest
  /// number of written decimals.
  static Sample numeric(std::string label, std::span<const std::string_view> texts) {
    int d = 0;
    for (auto t : texts) {
      auto point = t.find('.');
      if (point != std::string_view::npos) d = std::max(d, static_cast<int>(t.size() - point - 1));
    }
    Scale scale = Scale::numeric(std::min(d, kMaxDecimals));
    std::vector<OrderedValue> values;
    values.reserve(texts.size());
    for (auto t : texts) values.push_back(scale.parse_value(t));
    return Sample(std::move(label), std::move(scale), std::move(values));
  }

  static Sample numeric(std::string label, std::initializer_list<std::string_view> texts) {
    return numeric(std::move(label), std::span<const std::string_view>(texts.begin(), texts.size()));
  }

  /// Integer-valued sample (scale numeric(0)).
  static Sample integers(std::string label, std::span<const std::int64_t> xs) {
    std::vector<OrderedValue> values;
    values.reserve(xs.size());
    for (auto x : xs) values.push_back(OrderedValue::numeric(x, 0));
    return Sample(std::move(label), Scale::numeric(0), std::move(values));
  }

  static Sample integers(std::string label, std::initializer_list<std::int64_t> xs) {
    return integers(std::move(label), std::span<const std::int64_t>(xs.begin(), xs.size()));
  }

  const std::string& label() const noexcept { return label_; }
  const Scale& scale() const noexcept { return scale_; }
  std::span<const OrderedValue> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  friend bool operator==(const Sample& a, const Sample& b) {
    return a.label_ == b.label_ && a.values_ == b.values_;
  }

 private:
  std::string label_;
  Scale scale_;
  std::vector<OrderedValue> values_;
};

/// Distribution with finite support and exact rational masses.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  /// Validates: equal lengths, strictly increasing support, non-negative
  /// masses summing to 1 (exactly, or within 1e-12 for decimal inputs).
  DiscreteDistribution(std::string label, Scale scale, std::vector<OrderedValue> support,
                       std::vector<Rational> probs)
      : label_(std::move(label)), scale_(std::move(scale)), support_(std::move(support)),
        probs_(std::move(probs)) {
    if (support_.size() != probs_.size()) {
      fail(ErrorCode::parse, "distribution '" + label_ + "': support has " +
                                 std::to_string(support_.size()) + " points but " +
                                 std::to_string(probs_.size()) + " probabilities");
    }
    if (support_.empty()) fail(ErrorCode::parse, "distribution '" + label_ + "' has empty support");
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (!scale_.admits(support_[i])) {
        fail(ErrorCode::scale, "distribution '" + label_ + "': support point " +
                                   Scale::format_value(support_[i]) + " not on scale " + scale_.spec());
      }
      if (i > 0 && !(support_[i - 1] < support_[i])) {
        fail(ErrorCode::parse, "distribution '" + label_ + "': support not strictly increasing");
      }
      if (probs_[i] < 0) fail(ErrorCode::parse, "distribution '" + label_ + "': negative probability");
    }
    Rational total = 0;
    for (const auto& p : probs_) total += p;
    if (total != 1 && std::fabs(to_double(total - 1)) > 1e-12) {
      fail(ErrorCode::parse, "distribution '" + label_ + "': probabilities sum to " +
                                 format_trimmed(total, 12));
    }
  }

  /// Point masses at the observed values with empirical weights.
  static DiscreteDistribution empirical(const Sample& s) {
    if (s.empty()) fail(ErrorCode::usage, "empirical distribution of empty sample '" + s.label() + "'");
    std::vector<OrderedValue> sorted(s.values().begin(), s.values().end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<OrderedValue> support;
    std::vector<Rational> probs;
    const auto n = static_cast<std::int64_t>(sorted.size());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      support.push_back(sorted[i]);
      probs.emplace_back(static_cast<std::int64_t>(j - i), n);
      i = j;
    }
    return DiscreteDistribution(s.label(), s.scale(), std::move(support), std::move(probs));
  }

  const std::string& label() const noexcept { return label_; }
  const Scale& scale() const noexcept { return scale_; }
  std::span<const OrderedValue> support() const noexcept { return support_; }
  std::span<const Rational> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return support_.size(); }

  DiscreteDistribution relabeled(std::string label) const {
    DiscreteDistribution d = *this;
    d.label_ = std::move(label);
    return d;
  }

  friend bool operator==(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    return a.support_ == b.support_ && a.probs_ == b.probs_;
  }

 private:
  std::string label_;
  Scale scale_;
  std::vector<OrderedValue> support_;
  std::vector<Rational> probs_;
};

/// Weighted mixture sum_i w_i * d_i. Weights must be non-negative with a
/// positive total; they are normalized by that total.
inline DiscreteDistribution mixture(std::string label, std::span<const DiscreteDistribution> parts,
                                    std::span<const Rational> weights) {
  if (parts.empty()) fail(ErrorCode::usage, "mixture of zero distributions");
  if (parts.size() != weights.size()) fail(ErrorCode::usage, "mixture weight count mismatch");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) fail(ErrorCode::usage, "negative mixture weight");
    total += w;
  }
  if (total == 0) fail(ErrorCode::usage, "mixture weights have zero total");

  const Scale& scale = parts.front().scale();
  std::map<__int128, std::pair<OrderedValue, Rational>> mass;
  int decimals = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!parts[i].scale().compatible(scale)) {
      fail(ErrorCode::scale, "mixture of distributions on incompatible scales");
    }
    decimals = std::max(decimals, parts[i].scale().decimals());
    Rational w = weights[i] / total;
    for (std::size_t j = 0; j < parts[i].size(); ++j) {
      const OrderedValue& x = parts[i].support()[j];
      auto [it, inserted] = mass.try_emplace(x.key(), x, Rational(0));
      it->second.second += w * parts[i].probs()[j];
    }
  }
  std::vector<OrderedValue> support;
  std::vector<Rational> probs;
  for (auto& [key, entry] : mass) {
    support.push_back(entry.first);
    probs.push_back(std::move(entry.second));
  }
  Scale out_scale = scale.kind() == ValueKind::numeric ? Scale::numeric(decimals) : scale;
  return DiscreteDistribution(std::move(label), std::move(out_scale), std::move(support), std::move(probs));
}

struct Record {
  OrderedValue value;
  std::string group;
  std::optional<std::string> stratum;
};

/// Parsed tabular data: one record per row, all values on one scale.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Scale scale, std::vector<Record> records) : scale_(std::move(scale)), records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (records_[i].group.empty()) {
        fail(ErrorCode::parse, "record " + std::to_string(i + 1) + " has an empty group label");
      }
      if (!scale_.admits(records_[i].value)) {
        fail(ErrorCode::scale, "record " + std::to_string(i + 1) + " does not conform to scale " + scale_.spec());
      }
    }
  }

  const Scale& scale() const noexcept { return scale_; }
  std::span<const Record> records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  /// Group labels in order of first appearance.
  std::vector<std::string> groups() const {
    std::vector<std::string> out;
    for (const auto& r : records_) {
      if (std::find(out.begin(), out.end(), r.group) == out.end()) out.push_back(r.group);
    }
    return out;
  }

  /// Stratum labels in order of first appearance (records without a stratum
  /// are skipped).
  std::vector<std::string> strata() const {
    std::vector<std::string> out;
    for (const auto& r : records_) {
      if (r.stratum && std::find(out.begin(), out.end(), *r.stratum) == out.end()) out.push_back(*r.stratum);
    }
    return out;
  }

  /// Values of one group, optionally restricted to one stratum.
  Sample sample(const std::string& group, const std::optional<std::string>& stratum = std::nullopt) const {
    std::vector<OrderedValue> values;
    for (const auto& r : records_) {
      if (r.group == group && (!stratum || r.stratum == stratum)) values.push_back(r.value);
    }
    if (values.empty()) {
      fail(ErrorCode::usage, "no records for group '" + group + "'" +
                                 (stratum ? " in stratum '" + *stratum + "'" : std::string()));
    }
    return Sample(group, scale_, std::move(values));
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    if (!(a.scale_ == b.scale_) || a.records_.size() != b.records_.size()) return false;
    for (std::size_t i = 0; i < a.records_.size(); ++i) {
      const auto& x = a.records_[i];
      const auto& y = b.records_[i];
      if (!(x.value == y.value) || x.value.decimals() != y.value.decimals() || x.group != y.group ||
          x.stratum != y.stratum) {
        return false;
      }
    }
    return true;
  }

 private:
  Scale scale_;
  std::vector<Record> records_;
};

}  // namespace successodds
