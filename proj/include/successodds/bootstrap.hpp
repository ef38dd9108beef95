#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "successodds/brunner_munzel.hpp"
#include "successodds/effects.hpp"
#include "successodds/error.hpp"
#include "successodds/extended.hpp"
#include "successodds/pair_counts.hpp"
#include "successodds/sample.hpp"

namespace successodds {

/// Counter-based generator: the stream for (seed, stream_id) depends on
/// nothing else, so replicate r draws the same numbers on any thread.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id)
      : state_(mix(seed ^ mix(stream_id + 0x9E3779B97F4A7C15ull))) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform integer in [0, bound), unbiased (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

struct BootstrapOptions {
  double level = 0.95;
  std::size_t reps = 10000;
  std::uint64_t seed = 0;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend
  /// on this value.
  unsigned threads = 1;
};

/// Percentile bootstrap interval for the win ratio together with replicate
/// bookkeeping.
struct BootstrapInterval {
  ConfidenceInterval interval;
  std::size_t reps = 0;
  std::size_t infinite_replicates = 0;
  /// Replicates whose resample had p+ = p- = 0 (all pairs tied); they carry
  /// no win ratio and are left out of the percentile ranking.
  std::size_t undefined_replicates = 0;
};

namespace detail {

inline std::vector<ExtendedRational> win_ratio_replicates(std::span<const __int128> a, std::span<const __int128> b,
                                                          const BootstrapOptions& opt) {
  std::vector<ExtendedRational> out(opt.reps);
  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<__int128> ra(a.size());
    std::vector<__int128> rb(b.size());
    for (std::size_t r = begin; r < end; ++r) {
      CounterRng rng(opt.seed, r);
      for (auto& x : ra) x = a[rng.below(a.size())];
      for (auto& y : rb) y = b[rng.below(b.size())];
      std::sort(ra.begin(), ra.end());
      std::sort(rb.begin(), rb.end());
      const PairCounts c = count_sorted(ra, rb);
      out[r] = ExtendedRational::ratio(Rational(BigInt(c.wins)), Rational(BigInt(c.losses)));
    }
  };

  unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, opt.reps));
  if (threads <= 1) {
    run(0, opt.reps);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (opt.reps + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(opt.reps, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }  // joined
  return out;
}

}  // namespace detail

/// Percentile interval of the resampled win ratio. Each replicate resamples
/// both groups with replacement from its own (seed, replicate) stream.
/// Replicates with p- = 0 < p+ rank above every finite value.
///
/// Bounds are order statistics: lower = sorted[floor(m * alpha/2)],
/// upper = sorted[ceil(m * (1 - alpha/2)) - 1] over the m defined replicates.
inline BootstrapInterval ci_lambda_wr_bootstrap(const Sample& a, const Sample& b, const BootstrapOptions& opt = {}) {
  detail::check_pair_inputs(a, b);
  detail::check_level(opt.level);
  if (opt.reps < 100) fail(ErrorCode::usage, "bootstrap needs at least 100 replicates");

  auto ka = detail::sorted_keys(a.values());
  auto kb = detail::sorted_keys(b.values());
  const PairCounts observed = detail::count_sorted(ka, kb);
  auto estimate = ExtendedRational::ratio(Rational(BigInt(observed.wins)), Rational(BigInt(observed.losses)));
  if (estimate.is_undefined()) {
    fail(ErrorCode::degenerate, "win ratio undefined (0/0): no pair is decided, bootstrap interval not available");
  }

  auto reps = detail::win_ratio_replicates(ka, kb, opt);
  BootstrapInterval result;
  result.reps = opt.reps;
  std::vector<ExtendedRational> defined;
  defined.reserve(reps.size());
  for (auto& r : reps) {
    if (r.is_undefined()) {
      ++result.undefined_replicates;
      continue;
    }
    if (r.is_infinite()) ++result.infinite_replicates;
    defined.push_back(std::move(r));
  }
  if (defined.empty()) {
    fail(ErrorCode::degenerate, "every bootstrap replicate has an undefined win ratio");
  }
  std::sort(defined.begin(), defined.end(), [](const auto& x, const auto& y) { return x < y; });

  const double alpha = 1.0 - opt.level;
  const auto m = static_cast<double>(defined.size());
  auto lo_index = static_cast<std::size_t>(std::floor(m * alpha / 2.0));
  auto hi_index = static_cast<std::size_t>(std::ceil(m * (1.0 - alpha / 2.0)));
  hi_index = hi_index == 0 ? 0 : hi_index - 1;
  lo_index = std::min(lo_index, defined.size() - 1);
  hi_index = std::min(std::max(hi_index, lo_index), defined.size() - 1);

  result.interval.estimate = to_real(estimate);
  result.interval.lower = to_real(defined[lo_index]);
  result.interval.upper = to_real(defined[hi_index]);
  result.interval.level = opt.level;
  result.interval.scale = IntervalScale::lambda_wr;
  result.interval.method = IntervalMethod::bootstrap_percentile;
  return result;
}

}  // namespace successodds
