#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "taxalign/taxalign.hpp"

namespace taxalign::testing {

/// A scaling instance: both sides are forests of complete binary trees of a
/// fixed depth, so per-label supporter counts stay bounded as the size grows.
struct SyntheticInstance {
  TaxonomyGraph source;
  TaxonomyGraph target;
  CandidateSet candidates;
};

inline TaxonomyGraph binary_forest(char prefix, std::size_t trees, std::size_t tree_size) {
  TaxonomyGraph g;
  const std::size_t n = trees * tree_size;
  for (std::size_t i = 0; i < n; ++i) {
    std::string digits = std::to_string(i);
    g.add_node({std::string(1, prefix) + std::string(7 - digits.size(), '0') + digits, "w" + std::to_string(i), {}, {},
                {}});
  }
  for (std::size_t t = 0; t < trees; ++t) {
    const std::size_t base = t * tree_size;
    for (std::size_t k = 1; k < tree_size; ++k) {
      g.add_edge(static_cast<NodeIndex>(base + (k - 1) / 2), static_cast<NodeIndex>(base + k));
    }
  }
  return g;
}

/// About `pairs` variable-label pairs: every source node gets its mirror in
/// the target plus `per_node - 1` random distractors.
inline SyntheticInstance synthetic_instance(std::size_t pairs, std::size_t per_node = 4, std::uint64_t seed = 1) {
  constexpr std::size_t kTree = 15;  // depth 3
  const std::size_t nodes = std::max<std::size_t>(kTree, pairs / per_node);
  const std::size_t trees = (nodes + kTree - 1) / kTree;
  SyntheticInstance inst;
  inst.source = binary_forest('s', trees, kTree);
  inst.target = binary_forest('t', trees, kTree);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeIndex> any(0, static_cast<NodeIndex>(inst.target.size() - 1));
  std::vector<std::vector<NodeIndex>> labels(inst.source.size());
  for (NodeIndex s = 0; s < labels.size(); ++s) {
    auto& l = labels[s];
    l.push_back(s);
    while (l.size() < per_node) {
      const auto t = any(rng);
      if (std::find(l.begin(), l.end(), t) == l.end()) l.push_back(t);
    }
    std::sort(l.begin(), l.end());
  }
  inst.candidates = CandidateSet(std::move(labels));
  return inst;
}

}  // namespace taxalign::testing
