#pragma once

#include <cstdint>
#include <random>

#include "taxalign/taxalign.hpp"

namespace taxalign::testing {

struct ScoredVariable {
  std::size_t good = 0;
  std::size_t count = 0;
};

/// Polysemous, gold-covered, non-T_NOK variables with their count of
/// candidates that satisfy the gold at the given level.
inline std::vector<ScoredVariable> scored_variables(const CandidateSet& cand, const TaxonomyGraph& source,
                                                    const TaxonomyGraph& target, const GoldStandard& gold,
                                                    EvalLevel level) {
  std::vector<ScoredVariable> out;
  for (NodeIndex s = 0; s < cand.source_count(); ++s) {
    if (cand.count(s) < 2) continue;
    const auto it = gold.find(source.node(s).id);
    if (it == gold.end() || it->second.quality == Quality::TaxonomyNok) continue;
    if (level == EvalLevel::Node ? !it->second.node : !it->second.file) continue;
    ScoredVariable v{0, cand.count(s)};
    for (auto t : cand.of(s)) {
      const auto& n = target.node(t);
      v.good += level == EvalLevel::Node ? n.id == *it->second.node : n.semfile == it->second.file;
    }
    out.push_back(v);
  }
  return out;
}

/// Draws a uniform candidate for every variable, `draws` times, and returns
/// the mean fraction of correct picks.
inline double monte_carlo_baseline(const std::vector<ScoredVariable>& vars, std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uint64_t right = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    for (const auto& v : vars) {
      std::uniform_int_distribution<std::size_t> pick(0, v.count - 1);
      right += pick(rng) < v.good;
    }
  }
  return static_cast<double>(right) / static_cast<double>(draws * vars.size());
}

}  // namespace taxalign::testing
