#pragma once

#include <optional>

#include "successodds/error.hpp"
#include "successodds/extended.hpp"
#include "successodds/pair_counts.hpp"
#include "successodds/rational.hpp"
#include "successodds/sample.hpp"

namespace successodds {

/// The three pair probabilities and the effects built from them.
///
///   theta     = p+ + p0/2
///   lambda_so = theta / (1 - theta)   (success odds)
///   lambda_wr = p+ / p-               (win ratio)
///
/// All fields are exact. `odds_ratio` is only set for binary outcomes, where
/// it coincides with lambda_wr.
struct EffectEstimates {
  Rational p_plus;
  Rational p_zero;
  Rational p_minus;
  Rational theta;
  ExtendedRational lambda_so;
  ExtendedRational lambda_wr;
  std::optional<ExtendedRational> odds_ratio;

  /// Effects of the reversed comparison (B vs A).
  EffectEstimates swapped() const;
};

inline EffectEstimates effects_from_probabilities(Rational p_plus, Rational p_zero, Rational p_minus) {
  EffectEstimates e;
  e.theta = p_plus + p_zero / 2;
  e.lambda_so = ExtendedRational::ratio(e.theta, Rational(1 - e.theta));
  e.lambda_wr = ExtendedRational::ratio(p_plus, p_minus);
  e.p_plus = std::move(p_plus);
  e.p_zero = std::move(p_zero);
  e.p_minus = std::move(p_minus);
  return e;
}

inline EffectEstimates EffectEstimates::swapped() const {
  EffectEstimates e = effects_from_probabilities(p_minus, p_zero, p_plus);
  if (odds_ratio) e.odds_ratio = e.lambda_wr;
  return e;
}

inline EffectEstimates effects_from_counts(const PairCounts& c) {
  if (c.n_pairs == 0) fail(ErrorCode::usage, "effects need at least one pair (n_pairs = 0)");
  if (c.wins + c.ties + c.losses != c.n_pairs) {
    fail(ErrorCode::usage, "inconsistent pair counts: wins + ties + losses != n_pairs");
  }
  const BigInt n = c.n_pairs;
  return effects_from_probabilities(Rational(BigInt(c.wins), n), Rational(BigInt(c.ties), n),
                                    Rational(BigInt(c.losses), n));
}

/// Effects of sample `a` relative to sample `b`.
inline EffectEstimates sample_effects(const Sample& a, const Sample& b) {
  return effects_from_counts(count_pairs_fast(a, b));
}

/// Exact effects of X ~ da relative to Y ~ db.
inline EffectEstimates effects_from_distributions(const DiscreteDistribution& da, const DiscreteDistribution& db) {
  if (!da.scale().compatible(db.scale())) {
    fail(ErrorCode::scale, "distributions '" + da.label() + "' and '" + db.label() +
                               "' are on incompatible scales (" + da.scale().spec() + " vs " + db.scale().spec() + ")");
  }
  Rational p_plus = 0;
  Rational p_zero = 0;
  Rational mass_below = 0;  // P(Y < x) for the current support point x of da
  std::size_t j = 0;
  const auto ys = db.support();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const __int128 x = da.support()[i].key();
    while (j < ys.size() && ys[j].key() < x) mass_below += db.probs()[j++];
    const Rational& fx = da.probs()[i];
    p_plus += fx * mass_below;
    if (j < ys.size() && ys[j].key() == x) p_zero += fx * db.probs()[j];
  }
  // Tolerated decimal round-off in the inputs ends up in p_minus.
  Rational total_a = 0;
  Rational total_b = 0;
  for (const auto& p : da.probs()) total_a += p;
  for (const auto& p : db.probs()) total_b += p;
  Rational p_minus = total_a * total_b - p_plus - p_zero;
  return effects_from_probabilities(std::move(p_plus), std::move(p_zero), std::move(p_minus));
}

/// Binary outcomes with success rates q_a = P(X = 1), q_b = P(Y = 1).
inline EffectEstimates binary_effects(const Rational& q_a, const Rational& q_b) {
  if (q_a < 0 || q_a > 1 || q_b < 0 || q_b > 1) {
    fail(ErrorCode::usage, "success rates must lie in [0, 1]");
  }
  Rational p_plus = q_a * (1 - q_b);
  Rational p_minus = q_b * (1 - q_a);
  Rational p_zero = q_a * q_b + (1 - q_a) * (1 - q_b);
  EffectEstimates e = effects_from_probabilities(std::move(p_plus), std::move(p_zero), std::move(p_minus));
  e.odds_ratio = e.lambda_wr;
  return e;
}

/// Doubles are taken at their exact binary value; pass decimal text through
/// parse_rational when exact decimals matter.
inline EffectEstimates binary_effects(double q_a, double q_b) {
  return binary_effects(from_double(q_a), from_double(q_b));
}

}  // namespace successodds
