#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "successodds/error.hpp"
#include "successodds/extended.hpp"
#include "successodds/pair_counts.hpp"
#include "successodds/rational.hpp"
#include "successodds/sample.hpp"
#include "successodds/t_distribution.hpp"

namespace successodds {

namespace detail {

// Twice the midrank of every value, in input order. Twice a midrank is
// always an integer, so rank arithmetic stays exact.
inline std::vector<std::int64_t> doubled_midranks(std::span<const __int128> keys) {
  std::vector<std::size_t> order(keys.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return keys[x] < keys[y]; });
  std::vector<std::int64_t> ranks(keys.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && keys[order[j]] == keys[order[i]]) ++j;
    // positions i+1 .. j share the midrank (i + 1 + j) / 2
    const auto doubled = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = doubled;
    i = j;
  }
  return ranks;
}

inline std::vector<__int128> keys_of(const Sample& s) {
  std::vector<__int128> keys;
  keys.reserve(s.size());
  for (const auto& v : s.values()) keys.push_back(v.key());
  return keys;
}

// Rank decomposition of two samples: doubled placements
// 2 * (R_ik - R^(i)_ik) of every observation against the other sample.
struct Placements {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
};

inline Placements doubled_placements(const Sample& a, const Sample& b) {
  auto ka = keys_of(a);
  auto kb = keys_of(b);
  std::vector<__int128> pooled = ka;
  pooled.insert(pooled.end(), kb.begin(), kb.end());
  auto pooled_ranks = doubled_midranks(pooled);
  auto ra = doubled_midranks(ka);
  auto rb = doubled_midranks(kb);
  Placements p;
  p.a.resize(ka.size());
  p.b.resize(kb.size());
  for (std::size_t i = 0; i < ka.size(); ++i) p.a[i] = pooled_ranks[i] - ra[i];
  for (std::size_t j = 0; j < kb.size(); ++j) p.b[j] = pooled_ranks[ka.size() + j] - rb[j];
  return p;
}

// n * sum(d^2) - (sum d)^2, i.e. 4 n (n - 1) S^2 for doubled placements d.
inline __int128 scaled_sum_of_squares(std::span<const std::int64_t> d) {
  __int128 sum = 0;
  __int128 sum_sq = 0;
  for (auto x : d) {
    sum += x;
    sum_sq += static_cast<__int128>(x) * x;
  }
  return static_cast<__int128>(d.size()) * sum_sq - sum * sum;
}

}  // namespace detail

/// Relative effect of `a` versus `b` from pooled midranks:
/// (mean pooled midrank of a - (n1 + 1)/2) / n2.
inline Rational estimate_theta_ranks(const Sample& a, const Sample& b) {
  detail::check_pair_inputs(a, b);
  auto ka = detail::keys_of(a);
  auto pooled = ka;
  auto kb = detail::keys_of(b);
  pooled.insert(pooled.end(), kb.begin(), kb.end());
  auto ranks = detail::doubled_midranks(pooled);
  BigInt rank_sum_doubled = 0;
  for (std::size_t i = 0; i < ka.size(); ++i) rank_sum_doubled += ranks[i];
  const BigInt n1 = a.size();
  const BigInt n2 = b.size();
  return Rational(BigInt(rank_sum_doubled - n1 * (n1 + 1)), BigInt(2 * n1 * n2));
}

enum class Alternative { two_sided, greater, less };

inline const char* alternative_name(Alternative alt) {
  switch (alt) {
    case Alternative::two_sided: return "two_sided";
    case Alternative::greater: return "greater";
    case Alternative::less: return "less";
  }
  return "two_sided";
}

/// Brunner-Munzel test of H0: theta = 1/2.
struct TestResult {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Rational theta_exact;
  double theta_hat = 0.5;
  /// sigma^2_N = N * (S1^2 / (n1 n2^2) + S2^2 / (n2 n1^2)).
  double variance_hat = 0.0;
  /// Satterthwaite degrees of freedom; 0 when degenerate.
  double df = 0.0;
  std::optional<double> statistic;
  std::optional<double> p_value;
  Alternative alternative = Alternative::two_sided;
  bool degenerate = false;
  std::string degenerate_reason;

  /// Estimated standard error of theta_hat, sigma_N / sqrt(N).
  double standard_error() const {
    return std::sqrt(variance_hat / static_cast<double>(n1 + n2));
  }
};

inline TestResult brunner_munzel(const Sample& a, const Sample& b, Alternative alternative = Alternative::two_sided) {
  detail::check_pair_inputs(a, b);
  if (a.size() < 2 || b.size() < 2) {
    fail(ErrorCode::usage, "Brunner-Munzel test needs at least 2 observations per sample");
  }
  TestResult r;
  r.n1 = a.size();
  r.n2 = b.size();
  r.alternative = alternative;
  const auto n1 = static_cast<double>(r.n1);
  const auto n2 = static_cast<double>(r.n2);
  const double n = n1 + n2;

  const auto placements = detail::doubled_placements(a, b);
  __int128 placement_sum = 0;
  for (auto d : placements.a) placement_sum += d;  // 2 wins + ties
  const __int128 n_pairs = static_cast<__int128>(r.n1) * static_cast<__int128>(r.n2);
  const __int128 wins_minus_losses = placement_sum - n_pairs;  // (2w + t) - (w + t + l)
  r.theta_exact = Rational(BigInt(static_cast<long long>(placement_sum)), BigInt(2 * static_cast<long long>(n_pairs)));
  r.theta_hat = to_double(r.theta_exact);

  const __int128 ss1 = detail::scaled_sum_of_squares(placements.a);
  const __int128 ss2 = detail::scaled_sum_of_squares(placements.b);
  // S_i^2 = ss_i / (4 n_i (n_i - 1))
  const double s1 = static_cast<double>(ss1) / (4.0 * n1 * (n1 - 1.0));
  const double s2 = static_cast<double>(ss2) / (4.0 * n2 * (n2 - 1.0));
  const double v1 = s1 / (n1 * n2 * n2);
  const double v2 = s2 / (n2 * n1 * n1);
  r.variance_hat = n * (v1 + v2);

  if (ss1 == 0 || ss2 == 0) {
    r.degenerate = true;
    const __int128 losses_doubled = 2 * n_pairs - placement_sum;
    if (placement_sum == 2 * n_pairs || losses_doubled == 2 * n_pairs) {
      r.degenerate_reason = "complete separation of the samples (zero variance)";
    } else if (ss1 == 0 && ss2 == 0) {
      r.degenerate_reason = "zero placement variance in both samples";
    } else {
      r.degenerate_reason = std::string("zero placement variance in sample '") +
                            (ss1 == 0 ? a.label() : b.label()) + "'";
    }
    return r;
  }

  r.df = (v1 + v2) * (v1 + v2) / (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
  // theta_hat - 1/2 = (w - l) / (2 n1 n2), kept exact in sign and magnitude.
  const double centered = static_cast<double>(wins_minus_losses) / (2.0 * n1 * n2);
  const double t = centered / std::sqrt(v1 + v2);
  r.statistic = t;
  switch (alternative) {
    case Alternative::two_sided: r.p_value = student_t_two_sided(t, r.df); break;
    case Alternative::greater: r.p_value = student_t_cdf(-t, r.df); break;
    case Alternative::less: r.p_value = student_t_cdf(t, r.df); break;
  }
  return r;
}

enum class IntervalScale { theta, lambda_so, lambda_wr };
enum class IntervalMethod { logit_t, bootstrap_percentile };

inline const char* interval_scale_name(IntervalScale s) {
  switch (s) {
    case IntervalScale::theta: return "theta";
    case IntervalScale::lambda_so: return "lambda_so";
    case IntervalScale::lambda_wr: return "lambda_wr";
  }
  return "theta";
}

inline const char* interval_method_name(IntervalMethod m) {
  return m == IntervalMethod::logit_t ? "logit_t" : "bootstrap_percentile";
}

struct ConfidenceInterval {
  ExtendedReal estimate;
  ExtendedReal lower;
  ExtendedReal upper;
  double level = 0.95;
  IntervalScale scale = IntervalScale::theta;
  IntervalMethod method = IntervalMethod::logit_t;
};

namespace detail {

inline void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::usage, "confidence level must lie in (0, 1)");
}

// Bounds of logit(theta) from an already computed test result.
inline std::pair<double, double> logit_bounds(const TestResult& r, double level) {
  check_level(level);
  if (r.theta_exact == 0 || r.theta_exact == 1) {
    fail(ErrorCode::degenerate, "theta estimate is " + format_trimmed(r.theta_exact, 0) +
                                    "; no logit interval exists, use the bootstrap interval instead");
  }
  if (r.degenerate) {
    fail(ErrorCode::degenerate, "variance estimate degenerate (" + r.degenerate_reason +
                                    "); use the bootstrap interval instead");
  }
  const double theta = r.theta_hat;
  const double q = student_t_quantile(0.5 + 0.5 * level, r.df);
  const double half_width = q * r.standard_error() / (theta * (1.0 - theta));
  const double center = std::log(theta / (1.0 - theta));
  return {center - half_width, center + half_width};
}

// Kept strictly inside (0, 1): far in the tails the exact value is closer to
// the boundary than any double, so the nearest interior double is returned.
inline double expit(double x) {
  const double p = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

}  // namespace detail

/// Range-preserving interval for theta: a t interval for logit(theta) via the
/// delta method, mapped back with expit.
inline ConfidenceInterval ci_theta_logit(const TestResult& r, double level) {
  auto [lo, hi] = detail::logit_bounds(r, level);
  ConfidenceInterval ci;
  ci.estimate = ExtendedReal::finite(r.theta_hat);
  ci.lower = ExtendedReal::finite(detail::expit(lo));
  ci.upper = ExtendedReal::finite(detail::expit(hi));
  ci.level = level;
  ci.scale = IntervalScale::theta;
  ci.method = IntervalMethod::logit_t;
  return ci;
}

inline ConfidenceInterval ci_theta_logit(const Sample& a, const Sample& b, double level = 0.95) {
  return ci_theta_logit(brunner_munzel(a, b), level);
}

/// Interval for lambda_so = theta / (1 - theta): exp of the logit bounds,
/// since logit(theta) = log(lambda_so).
inline ConfidenceInterval ci_lambda_so(const TestResult& r, double level) {
  auto [lo, hi] = detail::logit_bounds(r, level);
  ConfidenceInterval ci;
  ci.estimate = to_real(ExtendedRational::ratio(r.theta_exact, Rational(1 - r.theta_exact)));
  ci.lower = ExtendedReal::finite(std::exp(lo));
  ci.upper = ExtendedReal::finite(std::exp(hi));
  ci.level = level;
  ci.scale = IntervalScale::lambda_so;
  ci.method = IntervalMethod::logit_t;
  return ci;
}

inline ConfidenceInterval ci_lambda_so(const Sample& a, const Sample& b, double level = 0.95) {
  return ci_lambda_so(brunner_munzel(a, b), level);
}

}  // namespace successodds
