#pragma once

#include <span>
#include <string>
#include <vector>

#include "successodds/effects.hpp"
#include "successodds/error.hpp"
#include "successodds/extended.hpp"
#include "successodds/multigroup.hpp"
#include "successodds/sample.hpp"

namespace successodds {

template <EffectGroup G>
struct Stratum {
  std::string label;
  G a;
  G b;
};

enum class StratumWeighting {
  unweighted,   ///< arithmetic mean over strata
  sample_size,  ///< weights n_a + n_b (samples only; distributions weigh 1)
};

struct StratumEffect {
  std::string label;
  EffectEstimates effects;
  Rational weight;
};

/// An extended mean; `poisoned` marks a non-finite stratum value that made
/// the mean non-finite.
struct ExtendedMean {
  ExtendedRational value;
  bool poisoned = false;
};

struct StratifiedSummary {
  std::vector<StratumEffect> per_stratum;
  Rational mean_theta;
  ExtendedMean mean_lambda_so;
  ExtendedMean mean_lambda_wr;
  /// A-side mixture versus B-side mixture, strata weighted equally.
  EffectEstimates pooled;
  StratumWeighting weighting = StratumWeighting::unweighted;
};

namespace detail {

inline ExtendedMean extended_mean(std::span<const StratumEffect> strata, ExtendedRational EffectEstimates::*field) {
  Rational sum = 0;
  Rational total = 0;
  bool infinite = false;
  for (const auto& s : strata) {
    const ExtendedRational& x = s.effects.*field;
    if (x.is_undefined()) return {ExtendedRational::undefined(), true};
    if (x.is_infinite()) {
      infinite = true;
      continue;
    }
    sum += s.weight * x.value();
    total += s.weight;
  }
  if (infinite) return {ExtendedRational::infinity(), true};
  return {ExtendedRational::finite(Rational(sum / total)), false};
}

}  // namespace detail

template <EffectGroup G>
StratifiedSummary stratified_summary(std::span<const Stratum<G>> strata,
                                     StratumWeighting weighting = StratumWeighting::unweighted) {
  if (strata.empty()) fail(ErrorCode::usage, "stratified summary needs at least one stratum");
  StratifiedSummary out;
  out.weighting = weighting;
  std::vector<DiscreteDistribution> side_a;
  std::vector<DiscreteDistribution> side_b;
  for (const auto& s : strata) {
    if constexpr (std::is_same_v<G, Sample>) {
      if (s.a.empty() || s.b.empty()) fail(ErrorCode::usage, "stratum '" + s.label + "' has an empty sample");
    }
    Rational weight = 1;
    if constexpr (std::is_same_v<G, Sample>) {
      if (weighting == StratumWeighting::sample_size) {
        weight = Rational(static_cast<std::int64_t>(s.a.size() + s.b.size()));
      }
    }
    out.per_stratum.push_back({s.label, compare_groups(s.a, s.b), weight});
    side_a.push_back(as_distribution(s.a));
    side_b.push_back(as_distribution(s.b));
  }

  Rational theta_sum = 0;
  Rational total = 0;
  for (const auto& s : out.per_stratum) {
    theta_sum += s.weight * s.effects.theta;
    total += s.weight;
  }
  out.mean_theta = theta_sum / total;
  out.mean_lambda_so = detail::extended_mean(out.per_stratum, &EffectEstimates::lambda_so);
  out.mean_lambda_wr = detail::extended_mean(out.per_stratum, &EffectEstimates::lambda_wr);

  const std::vector<Rational> equal(strata.size(), Rational(1));
  out.pooled = effects_from_distributions(mixture("A", side_a, equal), mixture("B", side_b, equal));
  return out;
}

template <EffectGroup G>
StratifiedSummary stratified_summary(const std::vector<Stratum<G>>& strata,
                                     StratumWeighting weighting = StratumWeighting::unweighted) {
  return stratified_summary(std::span<const Stratum<G>>(strata), weighting);
}

}  // namespace successodds
