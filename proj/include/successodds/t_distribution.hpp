#pragma once

#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>

#include "successodds/error.hpp"

namespace successodds {

namespace detail {

// Per-step convergence threshold; keeps the absolute error of I_x below 1e-12.
inline constexpr double kBetaStepTolerance = 1e-15;
inline constexpr int kBetaMaxIterations = 300;

// Continued fraction for I_x(a, b) (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kBetaStepTolerance) return h;
  }
  return h;  // max iterations; accuracy is still far below the tolerance in practice
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b). `one_minus_x` may be supplied when
/// it is known more accurately than 1 - x.
inline double incomplete_beta(double a, double b, double x, double one_minus_x = -1.0) {
  if (!(a > 0) || !(b > 0)) fail(ErrorCode::usage, "incomplete beta needs a, b > 0");
  if (x < 0 || x > 1) fail(ErrorCode::usage, "incomplete beta needs x in [0, 1]");
  if (one_minus_x < 0) one_minus_x = 1.0 - x;
  if (x == 0) return 0.0;
  if (one_minus_x == 0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log(one_minus_x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::beta_continued_fraction(b, a, one_minus_x) / b;
}

/// P(T <= t) for Student's t with real-valued `df` > 0.
inline double student_t_cdf(double t, double df) {
  if (!(df > 0)) fail(ErrorCode::usage, "t distribution needs df > 0");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  if (std::isinf(df)) return 0.5 * std::erfc(-t / std::sqrt(2.0));
  const double t2 = t * t;
  const double x = df / (df + t2);
  const double one_minus_x = t2 / (df + t2);
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x, one_minus_x);
  return t > 0 ? 1.0 - tail : tail;
}

/// P(|T| >= |t|).
inline double student_t_two_sided(double t, double df) {
  if (!(df > 0)) fail(ErrorCode::usage, "t distribution needs df > 0");
  if (std::isinf(t)) return 0.0;
  if (std::isinf(df)) return std::erfc(std::fabs(t) / std::sqrt(2.0));
  const double t2 = t * t;
  return incomplete_beta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2));
}

inline double student_t_pdf(double t, double df) {
  if (std::isinf(df)) return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
  const double log_c = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_c - 0.5 * (df + 1.0) * std::log1p(t * t / df));
}

/// Inverse CDF: the t with P(T <= t) = p.
inline double student_t_quantile(double p, double df) {
  if (!(p > 0) || !(p < 1)) fail(ErrorCode::usage, "t quantile needs p in (0, 1)");
  if (!(df > 0)) fail(ErrorCode::usage, "t distribution needs df > 0");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, df);

  // Bracket, then safeguarded Newton on the upper half line.
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_cdf(hi, df) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double f = student_t_cdf(t, df) - p;
    if (f == 0.0) return t;
    if (f < 0) {
      lo = t;
    } else {
      hi = t;
    }
    double next = t - f / student_t_pdf(t, df);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - t) <= 1e-14 * std::max(1.0, std::fabs(t))) return next;
    t = next;
  }
  return t;
}

}  // namespace successodds
