#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "successodds/effects.hpp"
#include "successodds/error.hpp"
#include "successodds/sample.hpp"

namespace successodds {

inline EffectEstimates compare_groups(const Sample& a, const Sample& b) { return sample_effects(a, b); }

inline EffectEstimates compare_groups(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return effects_from_distributions(a, b);
}

inline DiscreteDistribution as_distribution(const Sample& s) { return DiscreteDistribution::empirical(s); }
inline const DiscreteDistribution& as_distribution(const DiscreteDistribution& d) { return d; }

/// Anything the effect functions accept as one group: a Sample or a
/// DiscreteDistribution.
template <typename G>
concept EffectGroup = requires(const G& g) {
  { compare_groups(g, g) } -> std::same_as<EffectEstimates>;
  { g.label() } -> std::convertible_to<std::string>;
};

/// Effects for every ordered pair of k groups; cell(i, j) compares group i
/// against group j.
class PairwiseMatrix {
 public:
  PairwiseMatrix() = default;
  PairwiseMatrix(std::vector<std::string> labels, std::vector<EffectEstimates> cells)
      : labels_(std::move(labels)), cells_(std::move(cells)) {}

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const EffectEstimates& cell(std::size_t i, std::size_t j) const { return cells_.at(i * size() + j); }

 private:
  std::vector<std::string> labels_;
  std::vector<EffectEstimates> cells_;
};

template <EffectGroup G>
PairwiseMatrix pairwise_effects(std::span<const G> groups) {
  const std::size_t k = groups.size();
  if (k < 2) fail(ErrorCode::usage, "pairwise comparison needs at least two groups");
  for (const auto& g : groups) {
    if (!g.scale().compatible(groups.front().scale())) {
      fail(ErrorCode::scale, "groups '" + groups.front().label() + "' and '" + g.label() + "' use incompatible scales");
    }
  }
  std::vector<std::string> labels;
  for (const auto& g : groups) labels.push_back(g.label());
  std::vector<EffectEstimates> cells(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    cells[i * k + i] = compare_groups(groups[i], groups[i]);
    for (std::size_t j = i + 1; j < k; ++j) {
      cells[i * k + j] = compare_groups(groups[i], groups[j]);
      cells[j * k + i] = cells[i * k + j].swapped();
    }
  }
  return PairwiseMatrix(std::move(labels), std::move(cells));
}

template <EffectGroup G>
PairwiseMatrix pairwise_effects(const std::vector<G>& groups) {
  return pairwise_effects(std::span<const G>(groups));
}

/// Which effect decides that group i dominates group j.
enum class DominanceCriterion {
  theta,      ///< theta(i, j) > 1/2, equivalently lambda_so > 1
  win_ratio,  ///< lambda_wr(i, j) > 1 (including +inf)
};

struct TournamentReport {
  std::vector<std::string> labels;
  /// Directed edges (i, j): i dominates j.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  /// Elementary directed cycles, each starting at its smallest vertex index.
  std::vector<std::vector<std::size_t>> cycles;
  bool transitive = true;

  std::vector<std::vector<std::string>> cycle_labels() const {
    std::vector<std::vector<std::string>> out;
    for (const auto& c : cycles) {
      std::vector<std::string> names;
      for (auto v : c) names.push_back(labels[v]);
      out.push_back(std::move(names));
    }
    return out;
  }
};

inline bool dominates(const EffectEstimates& e, DominanceCriterion criterion) {
  if (criterion == DominanceCriterion::theta) return e.theta * 2 > 1;
  return e.lambda_wr > ExtendedRational::finite(Rational(1));
}

/// Dominance digraph of a pairwise matrix and all of its elementary cycles.
inline TournamentReport detect_cycles(const PairwiseMatrix& m,
                                      DominanceCriterion criterion = DominanceCriterion::theta) {
  const std::size_t k = m.size();
  TournamentReport report;
  report.labels = m.labels();
  std::vector<std::vector<std::size_t>> adjacency(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j && dominates(m.cell(i, j), criterion)) {
        report.edges.emplace_back(i, j);
        adjacency[i].push_back(j);
      }
    }
  }

  // Depth-first search from each start vertex through larger vertices only,
  // so every cycle is found once, rooted at its minimum.
  std::vector<std::size_t> path;
  std::vector<bool> on_path(k, false);
  auto search = [&](auto&& self, std::size_t start, std::size_t v) -> void {
    for (auto w : adjacency[v]) {
      if (w == start && path.size() >= 2) {
        report.cycles.push_back(path);
      } else if (w > start && !on_path[w]) {
        on_path[w] = true;
        path.push_back(w);
        self(self, start, w);
        path.pop_back();
        on_path[w] = false;
      }
    }
  };
  for (std::size_t s = 0; s < k; ++s) {
    path.assign(1, s);
    on_path[s] = true;
    search(search, s, s);
    on_path[s] = false;
  }
  report.transitive = report.cycles.empty();
  return report;
}

/// Effects of each group against the weighted mixture of all groups
/// (the group itself included). Without weights, samples are weighted by
/// size and distributions equally.
template <EffectGroup G>
std::vector<EffectEstimates> mixture_reference_effects(std::span<const G> groups,
                                                       std::optional<std::vector<Rational>> weights = std::nullopt) {
  if (groups.empty()) fail(ErrorCode::usage, "mixture reference needs at least one group");
  std::vector<DiscreteDistribution> parts;
  parts.reserve(groups.size());
  for (const auto& g : groups) parts.push_back(as_distribution(g));
  std::vector<Rational> w;
  if (weights) {
    w = std::move(*weights);
  } else {
    for (const auto& g : groups) {
      if constexpr (std::is_same_v<G, Sample>) {
        w.emplace_back(static_cast<std::int64_t>(g.size()));
      } else {
        w.emplace_back(1);
      }
    }
  }
  const DiscreteDistribution reference = mixture("mixture", parts, w);
  std::vector<EffectEstimates> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(effects_from_distributions(p, reference));
  return out;
}

template <EffectGroup G>
std::vector<EffectEstimates> mixture_reference_effects(const std::vector<G>& groups,
                                                       std::optional<std::vector<Rational>> weights = std::nullopt) {
  return mixture_reference_effects(std::span<const G>(groups), std::move(weights));
}

}  // namespace successodds
