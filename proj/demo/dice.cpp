// Pairwise effects of three non-transitive dice and their comparison against
// the pooled mixture.

#include <iostream>

#include "successodds.hpp"

int main() {
  using namespace successodds;
  std::vector<Sample> dice{Sample::integers("D1", {1, 4, 5, 6, 7, 7}), Sample::integers("D2", {3, 3, 4, 5, 6, 9}),
                           Sample::integers("D3", {1, 2, 2, 8, 8, 9})};

  PairwiseMatrix m = pairwise_effects(dice);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::size_t j = (i + 1) % m.size();
    const auto& e = m.cell(i, j);
    std::cout << m.labels()[i] << " vs " << m.labels()[j] << ": theta = " << e.theta
              << ", win ratio = " << e.lambda_wr.value() << '\n';
  }

  for (const auto& cycle : detect_cycles(m).cycle_labels()) {
    std::cout << "cycle:";
    for (const auto& label : cycle) std::cout << ' ' << label;
    std::cout << '\n';
  }

  auto reference = mixture_reference_effects(dice);
  for (std::size_t i = 0; i < dice.size(); ++i) {
    std::cout << dice[i].label() << " vs mixture: theta = " << reference[i].theta << '\n';
  }
}
