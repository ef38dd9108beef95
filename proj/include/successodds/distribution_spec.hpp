#pragma once

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "successodds/error.hpp"
#include "successodds/ordered_value.hpp"
#include "successodds/rational.hpp"
#include "successodds/sample.hpp"

namespace successodds {

namespace detail {

// JSON numbers are re-read from their shortest round-trip text, so 0.1
// becomes exactly 1/10. Strings may hold decimals or fractions ("1/3").
inline std::string json_scalar_text(const nlohmann::json& v, std::string_view what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  fail(ErrorCode::parse, std::string(what) + " must be a number or string, got " + v.dump());
}

inline int written_decimals(std::string_view text) {
  auto point = text.find('.');
  if (point == std::string_view::npos) return 0;
  auto end = text.find_first_of("eE", point);
  if (end == std::string_view::npos) end = text.size();
  std::string_view frac = text.substr(point + 1, end - point - 1);
  while (!frac.empty() && frac.back() == '0') frac.remove_suffix(1);
  return static_cast<int>(frac.size());
}

inline DiscreteDistribution parse_one_distribution(const nlohmann::json& entry, const Scale& scale,
                                                   const std::string& fallback_label) {
  if (!entry.is_object()) fail(ErrorCode::parse, "distribution entry must be an object");
  std::string label = fallback_label;
  if (auto it = entry.find("label"); it != entry.end()) {
    if (!it->is_string()) fail(ErrorCode::parse, "distribution label must be a string");
    label = it->get<std::string>();
  }
  auto support_it = entry.find("support");
  auto probs_it = entry.find("probs");
  if (support_it == entry.end() || !support_it->is_array()) {
    fail(ErrorCode::parse, "distribution '" + label + "' lacks a support array");
  }
  if (probs_it == entry.end() || !probs_it->is_array()) {
    fail(ErrorCode::parse, "distribution '" + label + "' lacks a probs array");
  }
  std::vector<OrderedValue> support;
  for (const auto& x : *support_it) support.push_back(scale.parse_value(json_scalar_text(x, "support point")));
  std::vector<Rational> probs;
  for (const auto& p : *probs_it) probs.push_back(parse_rational(json_scalar_text(p, "probability")));
  return DiscreteDistribution(std::move(label), scale, std::move(support), std::move(probs));
}

}  // namespace detail

/// Reads a distribution document:
///
///   {"scale": "ordinal([1,2,3])",
///    "distributions": [{"label": "A", "support": [1,2,3], "probs": [0.1,0.9,0]}]}
///
/// A bare {"support": ..., "probs": ...} object is accepted as a single
/// distribution. Without "scale" a numeric scale wide enough for the written
/// support points is used.
inline std::vector<DiscreteDistribution> parse_distribution_spec(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::parse, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::parse, "distribution document must be a JSON object");

  std::vector<nlohmann::json> entries;
  if (auto it = doc.find("distributions"); it != doc.end()) {
    if (!it->is_array() || it->empty()) fail(ErrorCode::parse, "\"distributions\" must be a non-empty array");
    entries.assign(it->begin(), it->end());
  } else {
    entries.push_back(doc);
  }

  Scale scale;
  if (auto it = doc.find("scale"); it != doc.end()) {
    if (!it->is_string()) fail(ErrorCode::parse, "\"scale\" must be a string such as \"numeric(1)\"");
    scale = Scale::parse(it->get<std::string>());
  } else {
    int d = 0;
    for (const auto& e : entries) {
      if (auto s = e.find("support"); s != e.end() && s->is_array()) {
        for (const auto& x : *s) d = std::max(d, detail::written_decimals(detail::json_scalar_text(x, "support point")));
      }
    }
    scale = Scale::numeric(std::min(d, kMaxDecimals));
  }

  std::vector<DiscreteDistribution> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out.push_back(detail::parse_one_distribution(entries[i], scale, "D" + std::to_string(i + 1)));
  }
  return out;
}

}  // namespace successodds
