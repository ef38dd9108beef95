#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "successodds/error.hpp"
#include "successodds/ordered_value.hpp"
#include "successodds/sample.hpp"

namespace successodds {

/// Round numeric values half away from zero to `decimals` places.
struct RoundToDecimals {
  int decimals = 0;
};

/// Replace every value in [lo, hi] by `replacement`, which must itself lie in
/// [lo, hi]; values outside the interval are untouched.
struct CollapseInterval {
  OrderedValue lo;
  OrderedValue hi;
  OrderedValue replacement;
};

/// Weakly monotone value maps used to coarsen a measurement scale.
using CoarseningRule = std::variant<RoundToDecimals, CollapseInterval>;

namespace detail {

inline OrderedValue round_value(const OrderedValue& v, int decimals) {
  if (v.decimals() <= decimals) return v;
  const std::int64_t factor = pow10(v.decimals() - decimals);
  std::int64_t m = v.payload();
  std::int64_t mag = m < 0 ? -m : m;
  std::int64_t q = (mag + factor / 2) / factor;
  return OrderedValue::numeric(m < 0 ? -q : q, decimals);
}

}  // namespace detail

inline Sample coarsen(const Sample& s, const CoarseningRule& rule) {
  const Scale& scale = s.scale();
  std::vector<OrderedValue> out;
  out.reserve(s.size());

  if (const auto* round = std::get_if<RoundToDecimals>(&rule)) {
    if (scale.kind() != ValueKind::numeric) fail(ErrorCode::scale, "rounding applies to numeric samples only");
    if (round->decimals < 0 || round->decimals > kMaxDecimals) {
      fail(ErrorCode::usage, "rounding needs 0..9 decimals");
    }
    const int target = std::min(round->decimals, scale.decimals());
    for (const auto& v : s.values()) out.push_back(detail::round_value(v, target));
    return Sample(s.label(), Scale::numeric(target), std::move(out));
  }

  const auto& collapse = std::get<CollapseInterval>(rule);
  for (const auto* bound : {&collapse.lo, &collapse.hi, &collapse.replacement}) {
    if (bound->kind() != scale.kind() || (scale.kind() == ValueKind::ordinal && !scale.admits(*bound))) {
      fail(ErrorCode::scale, "coarsening bounds are not on the sample's scale " + scale.spec());
    }
  }
  if (collapse.hi < collapse.lo) fail(ErrorCode::usage, "collapse interval has hi < lo");
  if (collapse.replacement < collapse.lo || collapse.hi < collapse.replacement) {
    fail(ErrorCode::usage, "replacement " + Scale::format_value(collapse.replacement) + " lies outside [" +
                               Scale::format_value(collapse.lo) + ", " + Scale::format_value(collapse.hi) + "]");
  }

  if (scale.kind() == ValueKind::ordinal) {
    for (const auto& v : s.values()) {
      out.push_back(collapse.lo <= v && v <= collapse.hi ? collapse.replacement : v);
    }
    return Sample(s.label(), scale, std::move(out));
  }

  const int decimals = std::max(scale.decimals(), collapse.replacement.decimals());
  for (const auto& v : s.values()) {
    const OrderedValue& mapped = collapse.lo <= v && v <= collapse.hi ? collapse.replacement : v;
    out.push_back(mapped.rescaled(decimals));
  }
  return Sample(s.label(), Scale::numeric(decimals), std::move(out));
}

/// Old category (as written on the distribution's scale) to new category.
/// Support points missing from the map keep their label.
using CategoryMapping = std::vector<std::pair<std::string, std::string>>;

/// Merges support points by an order-preserving map; merged masses add up.
///
/// Ordinal inputs get a new category list made of the images in rank order.
/// Numeric inputs map onto numeric values. A mapping that is not weakly
/// monotone over the current order is rejected.
inline DiscreteDistribution merge_categories(const DiscreteDistribution& d, const CategoryMapping& mapping) {
  const Scale& scale = d.scale();
  std::map<__int128, std::string> lookup;
  for (const auto& [from, to] : mapping) {
    if (!lookup.emplace(scale.parse_value(from).key(), std::string(detail::trim(to))).second) {
      fail(ErrorCode::usage, "category '" + from + "' mapped twice");
    }
  }

  auto image_of = [&](const OrderedValue& v) {
    auto it = lookup.find(v.key());
    return it == lookup.end() ? scale.format(v) : it->second;
  };

  std::vector<OrderedValue> support;
  std::vector<Rational> probs;
  if (scale.kind() == ValueKind::ordinal) {
    // The new category list is built from the whole old list, so every
    // distribution on the old scale lands on the same new scale. Images must
    // form contiguous runs.
    std::vector<std::string> categories;
    std::vector<std::int64_t> new_index;
    for (std::size_t k = 0; k < scale.categories().size(); ++k) {
      const std::string& old = scale.categories()[k];
      std::string image = image_of(OrderedValue::ordinal(static_cast<std::int64_t>(k), scale.tag()));
      if (categories.empty() || categories.back() != image) {
        if (std::find(categories.begin(), categories.end(), image) != categories.end()) {
          fail(ErrorCode::usage, "category mapping is not order preserving at '" + old + "'");
        }
        categories.push_back(image);
      }
      new_index.push_back(static_cast<std::int64_t>(categories.size()) - 1);
    }
    Scale merged = Scale::ordinal(categories);
    for (std::size_t i = 0; i < d.size(); ++i) {
      OrderedValue v = OrderedValue::ordinal(new_index[static_cast<std::size_t>(d.support()[i].payload())], merged.tag());
      if (!support.empty() && v == support.back()) {
        probs.back() += d.probs()[i];
      } else {
        support.push_back(v);
        probs.push_back(d.probs()[i]);
      }
    }
    return DiscreteDistribution(d.label(), std::move(merged), std::move(support), std::move(probs));
  }

  std::vector<std::string> images;
  for (const auto& x : d.support()) images.push_back(image_of(x));
  int decimals = scale.decimals();
  std::vector<OrderedValue> mapped;
  for (const auto& text : images) {
    OrderedValue v = decimal(text);
    decimals = std::max(decimals, v.decimals());
    mapped.push_back(v);
  }
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    OrderedValue v = mapped[i].rescaled(decimals);
    if (!support.empty() && v < support.back()) {
      fail(ErrorCode::usage, "value mapping is not order preserving at '" + scale.format(d.support()[i]) + "'");
    }
    if (!support.empty() && v == support.back()) {
      probs.back() += d.probs()[i];
    } else {
      support.push_back(v);
      probs.push_back(d.probs()[i]);
    }
  }
  return DiscreteDistribution(d.label(), Scale::numeric(decimals), std::move(support), std::move(probs));
}

}  // namespace successodds
