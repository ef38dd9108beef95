#pragma once

// Reference datasets and their published summary values, embedded so the
// `paper` verification command needs no input files.

#include <optional>
#include <string>
#include <vector>

#include "successodds/coarsen.hpp"
#include "successodds/rational.hpp"
#include "successodds/sample.hpp"

namespace successodds::builtin {

/// Three treatments on the ordinal outcome 1 < 2 < 3.
inline std::vector<DiscreteDistribution> three_treatments() {
  Scale scale = Scale::ordinal({"1", "2", "3"});
  auto make = [&](const char* label, const char* p1, const char* p2, const char* p3) {
    std::vector<OrderedValue> support;
    for (int i = 0; i < 3; ++i) support.push_back(OrderedValue::ordinal(i, scale.tag()));
    return DiscreteDistribution(label, scale, std::move(support),
                                {parse_rational(p1), parse_rational(p2), parse_rational(p3)});
  };
  return {make("A", "0.10", "0.90", "0"), make("B", "0", "0.90", "0.10"), make("C", "0", "0.10", "0.90")};
}

/// Measurements of treatments A and B, five each, recorded to one decimal.
inline Sample measurements_a() { return Sample::numeric("A", {"1.7", "3.3", "3.8", "4.9", "6.3"}); }
inline Sample measurements_b() { return Sample::numeric("B", {"1.4", "1.6", "2.7", "4.3", "5.0"}); }

/// The four coarsening steps of the measurements: as recorded, rounded to
/// integers, then [2.6, 4.4] and [1.6, 5.4] collapsed onto 3.5.
inline std::vector<CoarseningRule> coarsening_steps(int step) {
  auto collapse = [](const char* lo, const char* hi) {
    return CollapseInterval{decimal(lo), decimal(hi), decimal("3.5")};
  };
  switch (step) {
    case 1: return {};
    case 2: return {RoundToDecimals{0}};
    case 3: return {RoundToDecimals{0}, collapse("2.6", "4.4")};
    case 4: return {RoundToDecimals{0}, collapse("1.6", "5.4")};
    default: break;
  }
  fail(ErrorCode::usage, "coarsening step must be 1..4");
}

inline std::pair<Sample, Sample> coarsened_measurements(int step) {
  Sample a = measurements_a();
  Sample b = measurements_b();
  for (const auto& rule : coarsening_steps(step)) {
    a = coarsen(a, rule);
    b = coarsen(b, rule);
  }
  return {a, b};
}

/// Two treatments on six ordinal scores.
inline std::vector<DiscreteDistribution> six_scores() {
  Scale scale = Scale::ordinal({"1", "2", "3", "4", "5", "6"});
  auto make = [&](const char* label, std::vector<const char*> probs) {
    std::vector<OrderedValue> support;
    std::vector<Rational> p;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      support.push_back(OrderedValue::ordinal(static_cast<std::int64_t>(i), scale.tag()));
      p.push_back(parse_rational(probs[i]));
    }
    return DiscreteDistribution(label, scale, std::move(support), std::move(p));
  };
  return {make("A", {"0.0", "0.1", "0.2", "0.3", "0.2", "0.2"}), make("B", {"0.3", "0.3", "0.1", "0.2", "0.1", "0.0"})};
}

/// Scores 3, 4 and 5 combined into a new score 4.
inline CategoryMapping merge_middle_scores() { return {{"3", "4"}, {"4", "4"}, {"5", "4"}}; }

/// Non-transitive dice.
inline std::vector<Sample> tricky_dice() {
  return {Sample::integers("D1", {1, 4, 5, 6, 7, 7}), Sample::integers("D2", {3, 3, 4, 5, 6, 9}),
          Sample::integers("D3", {1, 2, 2, 8, 8, 9})};
}

struct BinaryRates {
  const char* q_a;
  const char* q_b;
};

/// Success rates of treatment A raised from 90% to 95% at three levels of B.
inline std::vector<BinaryRates> binary_rate_grid() {
  return {{"0.9", "0.5"}, {"0.95", "0.5"}, {"0.9", "0.6"}, {"0.95", "0.6"}, {"0.9", "0.7"}, {"0.95", "0.7"}};
}

/// Two binary comparisons sharing a win ratio of about 3.06.
inline std::vector<BinaryRates> binary_bar_pairs() { return {{"0.821", "0.6"}, {"0.99", "0.97"}}; }

/// A published value: nullopt value means +inf; tolerance applies to finite
/// values.
struct Golden {
  std::optional<double> value;
  double tolerance = 0.005;

  static Golden finite(double v, double tol = 0.005) { return {v, tol}; }
  static Golden infinite() { return {std::nullopt, 0.0}; }
};

}  // namespace successodds::builtin
