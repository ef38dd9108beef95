#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "successodds/error.hpp"
#include "successodds/sample.hpp"

namespace successodds {

/// Outcomes over all n1*n2 cross pairs (x from the first sample, y from the
/// second): wins x > y, ties x = y, losses x < y.
struct PairCounts {
  std::uint64_t wins = 0;
  std::uint64_t ties = 0;
  std::uint64_t losses = 0;
  std::uint64_t n_pairs = 0;

  /// Counts seen from the other sample's side.
  PairCounts swapped() const noexcept { return {losses, ties, wins, n_pairs}; }

  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

namespace detail {

inline void check_pair_inputs(const Sample& a, const Sample& b) {
  if (a.empty() || b.empty()) {
    fail(ErrorCode::usage, "pair counting needs non-empty samples ('" + a.label() + "' has " +
                               std::to_string(a.size()) + ", '" + b.label() + "' has " +
                               std::to_string(b.size()) + " values)");
  }
  if (!a.scale().compatible(b.scale())) {
    fail(ErrorCode::scale, "samples '" + a.label() + "' and '" + b.label() + "' are on incompatible scales (" +
                               a.scale().spec() + " vs " + b.scale().spec() + ")");
  }
}

inline std::vector<__int128> sorted_keys(std::span<const OrderedValue> values) {
  std::vector<__int128> keys;
  keys.reserve(values.size());
  for (const auto& v : values) keys.push_back(v.key());
  std::sort(keys.begin(), keys.end());
  return keys;
}

// Merge count over two ascending key sequences.
inline PairCounts count_sorted(std::span<const __int128> a, std::span<const __int128> b) {
  PairCounts c;
  c.n_pairs = static_cast<std::uint64_t>(a.size()) * b.size();
  std::size_t below = 0;  // b-elements < current a value
  std::size_t i = 0;
  while (i < a.size()) {
    const __int128 x = a[i];
    std::size_t run = 1;
    while (i + run < a.size() && a[i + run] == x) ++run;
    while (below < b.size() && b[below] < x) ++below;
    std::size_t equal_end = below;
    while (equal_end < b.size() && b[equal_end] == x) ++equal_end;
    c.wins += run * below;
    c.ties += run * (equal_end - below);
    i += run;
  }
  c.losses = c.n_pairs - c.wins - c.ties;
  return c;
}

}  // namespace detail

/// Reference O(n1*n2) enumeration of every cross pair.
inline PairCounts count_pairs(const Sample& a, const Sample& b) {
  detail::check_pair_inputs(a, b);
  PairCounts c;
  for (const auto& x : a.values()) {
    for (const auto& y : b.values()) {
      auto cmp = x <=> y;
      if (cmp > 0) {
        ++c.wins;
      } else if (cmp == 0) {
        ++c.ties;
      } else {
        ++c.losses;
      }
    }
  }
  c.n_pairs = static_cast<std::uint64_t>(a.size()) * b.size();
  return c;
}

/// Sort-and-merge counting, O((n1 + n2) log(n1 + n2)). Always equal to
/// count_pairs.
inline PairCounts count_pairs_fast(const Sample& a, const Sample& b) {
  detail::check_pair_inputs(a, b);
  auto ka = detail::sorted_keys(a.values());
  auto kb = detail::sorted_keys(b.values());
  return detail::count_sorted(ka, kb);
}

}  // namespace successodds
